#include "mpimex/problems/piston.hpp"

#include <cmath>
#include <memory>

#include "mpimex/errors.hpp"
#include "mpimex/problems/euler1d.hpp"

namespace mpimex {

namespace {

// mesh state layout: (d_1, w_1, d_2, w_2, ..., d_{N-2}, w_{N-2}) for interior
// nodes 1..N-2 of N nodes; node 0 is the fixed wall, node N-1 the piston face.
struct PistonImpl {
  PistonProblem prm;
  int nn;       // nodes
  double dx;    // reference cell length

  // assemble positions x_0..x_{N-1} and velocities v_0..v_{N-1}
  Vector nodes(const PartitionedState& u) const {
    const double vs = u.part(0)[0];
    const double us = u.part(0)[1];
    auto mesh = u.part(1);
    Vector out(2 * nn);
    out[0] = 0.0;
    out[nn] = 0.0;
    for (int k = 1; k <= nn - 2; ++k) {
      const double ref = static_cast<double>(k) * dx;
      out[k] = ref + mesh[2 * (k - 1)];
      out[nn + k] = mesh[2 * (k - 1) + 1];
    }
    out[nn - 1] = 1.0 - us;
    out[2 * nn - 1] = -vs;
    return out;
  }

  // fluid semi-discrete velocity: d(U_X)/dt = -(Fhat_{k+1} - Fhat_k)/dX with
  // ALE Roe fluxes at interior faces and mirrored-wall fluxes at both ends
  Vector fluid_velocity(std::span<const double> uf, std::span<const double> c) const {
    const int nc = prm.cells;
    const double g = prm.gamma;
    std::span<const double> x(c.data(), nn);
    std::span<const double> v(c.data() + nn, nn);
    Vector out(3 * nc);
    std::vector<euler1d::ConsState> phys(nc);
    for (int k = 0; k < nc; ++k) {
      const double gk = (x[k + 1] - x[k]) / dx;
      if (gk <= 0.0) throw MeshTangling("piston: mesh cell " + std::to_string(k) + " has g <= 0");
      phys[k] = {uf[3 * k] / gk, uf[3 * k + 1] / gk, uf[3 * k + 2] / gk};
    }
    euler1d::ConsState fprev =
        euler1d::ale_roe_flux(euler1d::mirror_state(phys[0], v[0]), phys[0], v[0], g);
    for (int k = 0; k < nc; ++k) {
      euler1d::ConsState fnext;
      if (k + 1 < nc) {
        fnext = euler1d::ale_roe_flux(phys[k], phys[k + 1], v[k + 1], g);
      } else {
        fnext = euler1d::ale_roe_flux(phys[nc - 1], euler1d::mirror_state(phys[nc - 1], v[nn - 1]),
                                      v[nn - 1], g);
      }
      for (int q = 0; q < 3; ++q) out[3 * k + q] = -(fnext[q] - fprev[q]) / dx;
      fprev = fnext;
    }
    return out;
  }

  // pressure at the piston face from the last cell's physical state
  double face_pressure(const PartitionedState& u) const {
    auto uf = u.part(2);
    Vector nv = nodes(u);
    const double glast = (nv[nn - 1] - nv[nn - 2]) / dx;
    if (glast <= 0.0) throw MeshTangling("piston: face cell has g <= 0");
    const int k = prm.cells - 1;
    const euler1d::ConsState last = {uf[3 * k] / glast, uf[3 * k + 1] / glast, uf[3 * k + 2] / glast};
    return euler1d::pressure(last, prm.gamma);
  }
};

}  // namespace

CoupledOdeSystem PistonProblem::system() const {
  auto impl = std::make_shared<const PistonImpl>(PistonImpl{*this, nodes(), 1.0 / cells});
  CoupledOdeSystem sys;
  sys.name = "piston";
  sys.structure = CouplingStructure::special_triangular;

  {
    Subsystem s;
    s.dim = 2;
    s.cdim = 1;
    s.name = "structure";
    const double m = ms, k = ks, c = cs;
    const bool frozen = freeze_structure;
    s.mass_apply = [m](std::span<const double> u) { return Vector{m * u[0], u[1]}; };
    s.mass_solve = [m](std::span<const double> v) { return Vector{v[0] / m, v[1]}; };
    s.velocity = [k, c, frozen](std::span<const double> u, std::span<const double> cc, double) {
      if (frozen) return Vector{0.0, 0.0};
      return Vector{cc[0] - c * u[0] - k * u[1], u[0]};
    };
    s.jac_velocity_u = [k, c, frozen](std::span<const double>, std::span<const double>, double) {
      DenseMatrix j(2, 2);
      if (!frozen) {
        j(0, 0) = -c;
        j(0, 1) = -k;
        j(1, 0) = 1.0;
      }
      return j;
    };
    s.jac_velocity_c = [frozen](std::span<const double>, std::span<const double>, double) {
      DenseMatrix j(2, 1);
      if (!frozen) j(0, 0) = 1.0;
      return j;
    };
    sys.subsystems.push_back(std::move(s));
  }

  {
    Subsystem s;
    s.dim = mesh_dim();
    s.cdim = 2;
    s.name = "mesh";
    s.bandwidth = 3;
    const int ni = nodes() - 2;  // interior nodes
    const double h = 1.0 / cells;
    const double em = e_m, rm = rho_m, cm = c_m;
    s.velocity = [ni, h, em, rm, cm](std::span<const double> u, std::span<const double> c, double) {
      Vector out(2 * ni);
      auto disp = [&](int k) -> double {  // node displacement, k in 0..ni+1
        if (k == 0) return 0.0;
        if (k == ni + 1) return c[0];
        return u[2 * (k - 1)];
      };
      for (int k = 1; k <= ni; ++k) {
        const double w = u[2 * (k - 1) + 1];
        const double lap = (disp(k - 1) - 2.0 * disp(k) + disp(k + 1)) / (h * h);
        out[2 * (k - 1)] = w;
        out[2 * (k - 1) + 1] = (em * lap - cm * w) / rm;
      }
      return out;
    };
    sys.subsystems.push_back(std::move(s));
  }

  {
    Subsystem s;
    s.dim = fluid_dim();
    s.cdim = 2 * nodes();
    s.name = "fluid";
    s.bandwidth = 5;  // one cell of coupling on each side, 3 variables per cell
    s.velocity = [impl](std::span<const double> u, std::span<const double> c, double) {
      return impl->fluid_velocity(u, c);
    };
    sys.subsystems.push_back(std::move(s));
  }

  sys.coupling = [impl](int i, const PartitionedState& u, double) -> Vector {
    if (i == 0) return Vector{-impl->face_pressure(u)};
    if (i == 1) {
      const double vs = u.part(0)[0];
      const double us = u.part(0)[1];
      return Vector{-us, -vs};
    }
    return impl->nodes(u);
  };

  // Banded stage Jacobians: the mesh block is linear and constant; the fluid
  // block falls back to the colored finite-difference probe.
  const double h = 1.0 / cells;
  const double em = e_m, rm = rho_m, cm = c_m;
  const int ni = nodes() - 2;
  sys.stage_jacobian_band = [h, em, rm, cm, ni](int i, const PartitionedState&, std::span<const double>,
                                                double, bool, BandedMatrix& jac) {
    if (i != 1) return false;  // fluid block is probed by finite differences
    // mesh block is linear and constant; its coupling ignores the mesh state
    const double k2 = em / (rm * h * h);
    for (int k = 1; k <= ni; ++k) {
      const int rd = 2 * (k - 1);
      const int rw = rd + 1;
      jac.at(rd, rw) = 1.0;
      jac.at(rw, rd) = -2.0 * k2;
      jac.at(rw, rw) = -cm / rm;
      if (k > 1) jac.at(rw, rd - 2) = k2;
      if (k < ni) jac.at(rw, rd + 2) = k2;
    }
    return true;
  };
  return sys;
}

PartitionedState PistonProblem::initial() const {
  PartitionedState u({2, mesh_dim(), fluid_dim()});
  u.part(0)[0] = 0.0;
  u.part(0)[1] = us0;
  // static pseudo-structure solution matching the face offset: linear ramp
  const int ni = nodes() - 2;
  auto mesh = u.part(1);
  for (int k = 1; k <= ni; ++k) {
    const double ref = static_cast<double>(k) / cells;
    mesh[2 * (k - 1)] = -us0 * ref;
    mesh[2 * (k - 1) + 1] = 0.0;
  }
  // uniform resting gas on [0, 1 - us0]; constant metric g
  const double g0 = 1.0 - us0;
  const double e0 = p0 / (gamma - 1.0);
  auto uf = u.part(2);
  for (int k = 0; k < cells; ++k) {
    uf[3 * k] = g0 * rho0;
    uf[3 * k + 1] = 0.0;
    uf[3 * k + 2] = g0 * e0;
  }
  return u;
}

Vector PistonProblem::node_positions_velocities(const PartitionedState& u) const {
  PistonImpl impl{*this, nodes(), 1.0 / cells};
  return impl.nodes(u);
}

double PistonProblem::fluid_mass(const PartitionedState& u) const {
  auto uf = u.part(2);
  double total = 0.0;
  for (int k = 0; k < cells; ++k) total += uf[3 * k];
  return total / cells;
}

}  // namespace mpimex
