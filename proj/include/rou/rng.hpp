#pragma once

#include <cstdint>
#include <random>

namespace rou {

/// One deterministic generator stream.  Streams are derived from
/// (master seed, path index, tag), so every path owns its randomness and
/// results do not depend on worker count or scheduling.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t path_index, std::uint32_t tag) {
        std::seed_seq seq{static_cast<std::uint32_t>(master_seed & 0xffffffffu),
                          static_cast<std::uint32_t>(master_seed >> 32),
                          static_cast<std::uint32_t>(path_index & 0xffffffffu),
                          static_cast<std::uint32_t>(path_index >> 32), tag};
        engine_.seed(seq);
    }

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Per-path random streams.  Wiener increments, boundary resampling and
/// initial-state draws come from separate streams: two runs with the same
/// seed see identical driving noise even when the number of auxiliary draws
/// differs along the way (e.g. coupled paths from different starting points).
struct PathRng {
    RngStream wiener;
    RngStream aux;
    RngStream init;

    PathRng(std::uint64_t master_seed, std::uint64_t path_index)
        : wiener(master_seed, path_index, 0x77696e72u),
          aux(master_seed, path_index, 0x61757872u),
          init(master_seed, path_index, 0x696e6974u) {}
};

}  // namespace rou
