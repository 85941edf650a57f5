#pragma once

// Umbrella header for the whole library.

#include "borda/aggregation.hpp"
#include "borda/bounds.hpp"
#include "borda/combinatorics.hpp"
#include "borda/experiments.hpp"
#include "borda/model.hpp"
#include "borda/observation.hpp"
#include "borda/preflib.hpp"
#include "borda/rng.hpp"
#include "borda/score_vector.hpp"
#include "borda/textio.hpp"

namespace borda {}
