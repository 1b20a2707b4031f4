#pragma once

#include "mpimex/system.hpp"

namespace mpimex {

// 3x3 linear ODE du/dt = A u, A = [[1,1,1],[1,1,0],[1,1,1]], u(0) = (1,0,2),
// treated as three scalar subsystems with r_i = u_i + c_i and couplings
// c1 = u2 + u3, c2 = u1, c3 = u1 + u2. c_i never depends on u_i, so weak and
// strong predictors coincide; c2 and c3 depend only on earlier subsystems.
struct Linear3Problem {
  static CoupledOdeSystem system();
  static PartitionedState initial();
  static DenseMatrix matrix();
  // P exp(t S) P^{-1} u0 via the dense eigensolver plus inverse iteration.
  static Vector exact(double t);
};

}  // namespace mpimex
