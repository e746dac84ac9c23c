#pragma once

#include "grounded/centrality.hpp"
#include "grounded/eigensolvers.hpp"
#include "grounded/errors.hpp"
#include "grounded/generators.hpp"
#include "grounded/graph.hpp"
#include "grounded/grounded_operator.hpp"
#include "grounded/linear_solver.hpp"
#include "grounded/rng.hpp"
#include "grounded/selection.hpp"
