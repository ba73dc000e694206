#pragma once

// Umbrella header for the suslab library.

#include "bp_montecarlo.hpp"
#include "component_stats.hpp"
#include "config_sampler.hpp"
#include "degree_model.hpp"
#include "errors.hpp"
#include "experiment_harness.hpp"
#include "ext_real.hpp"
#include "gf_analytics.hpp"
#include "io.hpp"
#include "numeric.hpp"
#include "parallel.hpp"
#include "rng.hpp"
