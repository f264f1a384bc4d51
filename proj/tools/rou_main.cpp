#include <string>
#include <vector>

#include "rou/cli.hpp"

int main(int argc, char** argv) {
    return rou::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
