#pragma once

#include "mpimex/system.hpp"

namespace mpimex {

// One-dimensional three-field piston: an inviscid gas column closed by a
// spring-mounted piston, with the fluid mesh treated as a pseudo-structure.
// Subsystem order is (structure, mesh, fluid):
//   structure  u^s = (velocity, displacement) of the piston, mass diag(ms, 1);
//              the physical domain is [0, 1 - u_s].
//   mesh       interleaved (displacement, velocity) of the interior nodes of a
//              1-D linear pseudo-structure on the reference domain, Dirichlet
//              at both ends (fixed wall, piston face).
//   fluid      reference-domain conserved variables g*(rho, rho u, rho E) per
//              finite-volume cell, ALE-transformed Euler with Roe fluxes.
// Couplings: c^s = external force -p at the piston face, c^x = face
// displacement and velocity (structure state only), c^f = positions and
// velocities of all mesh nodes.
struct PistonProblem {
  int cells = 128;   // finite-volume cells; nodes = cells + 1
  double gamma = 1.4;
  double rho0 = 1.0, p0 = 0.4;  // initial resting gas
  double ms = 1.0, ks = 1.0, cs = 0.0;
  double rho_m = 1.0, e_m = 1.0, c_m = 0.0;
  double us0 = -0.3;  // initial piston displacement
  bool freeze_structure = false;  // pin the piston (zero structure velocity)

  CoupledOdeSystem system() const;
  PartitionedState initial() const;

  int nodes() const { return cells + 1; }
  int mesh_dim() const { return 2 * (nodes() - 2); }
  int fluid_dim() const { return 3 * cells; }

  // physical node positions and velocities from a state (the fluid coupling)
  Vector node_positions_velocities(const PartitionedState& u) const;
  // total reference-domain fluid mass sum g*rho*dX
  double fluid_mass(const PartitionedState& u) const;
};

}  // namespace mpimex
