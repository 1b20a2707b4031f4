#pragma once

#include "mpimex/system.hpp"

namespace mpimex {

// Two-equation linear model problem: du1/dt = lambda1 (u1 + u2),
// du2/dt = lambda2 (u1 + u2), split as r_i = (1-alpha) lambda_i u_i +
// lambda_i c_i with couplings c1 = alpha u1 + u2, c2 = u1 + alpha u2. The
// parameter alpha moves own-state dependence between the direct velocity and
// the coupling term; the monolithic dynamics are alpha-independent.
struct Model2Problem {
  double lambda1 = -1.0;
  double lambda2 = -1.0;
  double alpha = 0.5;

  CoupledOdeSystem system() const;
  PartitionedState initial() const;  // (1, 0)
  Vector exact(double t, const Vector& u0) const;
};

}  // namespace mpimex
