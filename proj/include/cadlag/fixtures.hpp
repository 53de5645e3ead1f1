#pragma once

#include "cadlag/path.hpp"

// Deterministic worked paths used by the verification suites and the CLI
// `fixtures` subcommand.

namespace cadlag::fixtures {

// (0,0) -> (1,0) -> (1,1), two unit segments
GroupPath two_segment();

// oscillatory pair x1 = -n^{-1/3} cos(2 pi n t), x2 = n^{-1/3} sin(2 pi n t),
// rescaled to [0,1] and sampled piecewise-linearly
GroupPath oscillatory(int n = 8, int segments = 4096);

// pure-jump d=2 path jumping by (1,1) at t = 1/2
GroupPath pure_jump_11();

// d=2 path with drift and two jumps, the standard Ito-check fixture
GroupPath two_jump_drift();

// d=1 step path: +1 at 1/3, +2 at 2/3
GroupPath qv_steps();

// d=1 continuous piecewise-linear path with a kink, step-path free
GroupPath kinked_line();

} // namespace cadlag::fixtures
