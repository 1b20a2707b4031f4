#pragma once

#include "mpimex/system.hpp"

namespace mpimex {

// Predator-prey reaction coupling on a 2-D advection-diffusion grid over
// [-0.5,0.5]^2: two species on n x n uniform cells, second-order central
// diffusion, first-order upwind advection, Neumann boundaries via ghost-cell
// mirroring. The reaction source enters only through the coupling terms.
struct PredPreyProblem {
  int n = 20;  // cells per direction (paper-scale runs use 40)
  double diffusivity = 0.01;
  double a1 = 0.25, a2 = 2.0, a3 = 1.0, a4 = 3.4;
  double v1x = 0.0, v1y = 0.0;
  double v2x = 0.5, v2y = 0.5;
  double bump_x = -0.25, bump_y = -0.25, bump_radius = 0.2;

  CoupledOdeSystem system() const;
  PartitionedState initial() const;

  int cells() const { return n * n; }
  // pointwise reaction sources f^1, f^2 and their partial derivatives
  double reaction(int species, double u1, double u2) const;
  double reaction_d(int species, int wrt, double u1, double u2) const;
};

}  // namespace mpimex
