#pragma once

// Sparse kernel learning with l1-normed reproducing kernel Banach spaces.

#include "rkbs/error.hpp"
#include "rkbs/random.hpp"
#include "rkbs/point_set.hpp"
#include "rkbs/kernels.hpp"
#include "rkbs/gram.hpp"
#include "rkbs/admissibility.hpp"
#include "rkbs/interpolation.hpp"
#include "rkbs/solvers.hpp"
#include "rkbs/experiment.hpp"
