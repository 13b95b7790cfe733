#pragma once

// Umbrella header: the whole library in one include.

#include "gsconvex/algebra.hpp"
#include "gsconvex/check.hpp"
#include "gsconvex/deriv.hpp"
#include "gsconvex/errors.hpp"
#include "gsconvex/expr.hpp"
#include "gsconvex/gradient.hpp"
#include "gsconvex/gradineq.hpp"
#include "gsconvex/optim.hpp"
#include "gsconvex/parse.hpp"
#include "gsconvex/problem_file.hpp"
#include "gsconvex/report.hpp"
#include "gsconvex/sampling.hpp"
#include "gsconvex/sets.hpp"
#include "gsconvex/version.hpp"
