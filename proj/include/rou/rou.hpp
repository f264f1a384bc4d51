#pragma once

// Umbrella header for the reflected / skew / oblique OU toolkit.

#include "rou/bodies.hpp"
#include "rou/common.hpp"
#include "rou/config.hpp"
#include "rou/dynamics.hpp"
#include "rou/gaussian.hpp"
#include "rou/girsanov.hpp"
#include "rou/layering.hpp"
#include "rou/oblique.hpp"
#include "rou/parallel.hpp"
#include "rou/rng.hpp"
#include "rou/spectral.hpp"
#include "rou/verify.hpp"
