#pragma once

// Umbrella header.

#include "rational.hpp"
#include "expr.hpp"
#include "quadrature.hpp"
#include "kernel.hpp"
#include "measures.hpp"
#include "grid.hpp"
#include "impulse.hpp"
#include "problem.hpp"
#include "cone.hpp"
#include "conditions.hpp"
#include "scheduler.hpp"
#include "solver.hpp"
#include "report.hpp"
