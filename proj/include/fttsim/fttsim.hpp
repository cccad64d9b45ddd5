#pragma once

#include "fttsim/errors.hpp"
#include "fttsim/quadrature.hpp"
#include "fttsim/specfun.hpp"
#include "fttsim/wright_kernel.hpp"
#include "fttsim/greens.hpp"
#include "fttsim/phasefn.hpp"
#include "fttsim/closedform.hpp"
#include "fttsim/solver.hpp"
#include "fttsim/verify.hpp"
#include "fttsim/io.hpp"
