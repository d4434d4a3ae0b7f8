#pragma once

// Convenience header pulling in the whole library.

#include "stairsplit/matrix.hpp"
#include "stairsplit/lu.hpp"
#include "stairsplit/spectrum.hpp"
#include "stairsplit/splitting.hpp"
#include "stairsplit/iteration.hpp"
#include "stairsplit/singular.hpp"
#include "stairsplit/walks.hpp"
#include "stairsplit/generators.hpp"
#include "stairsplit/matrix_market.hpp"
#include "stairsplit/experiments.hpp"
#include "stairsplit/verify.hpp"
