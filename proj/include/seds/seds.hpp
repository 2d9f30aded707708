#pragma once

// Umbrella header for the evaluation library (board, solver, analysis, SGF,
// benchmark harness). The HTTP layer lives in seds/server.hpp.

#include "seds/analysis.hpp"
#include "seds/bench.hpp"
#include "seds/board.hpp"
#include "seds/coord.hpp"
#include "seds/sgf.hpp"
#include "seds/solver.hpp"
