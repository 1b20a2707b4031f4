#include "mpimex/problems/predprey.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "mpimex/errors.hpp"

namespace mpimex {

double PredPreyProblem::reaction(int species, double u1, double u2) const {
  if (species == 0) return u1 * (-(u1 - a1) * (u1 - 1.0) - a2 * u2);
  return u2 * (-a3 - a4 * u2 + a2 * u1);
}

double PredPreyProblem::reaction_d(int species, int wrt, double u1, double u2) const {
  if (species == 0) {
    if (wrt == 0) return -(3.0 * u1 * u1 - 2.0 * (1.0 + a1) * u1 + a1) - a2 * u2;
    return -a2 * u1;
  }
  if (wrt == 0) return a2 * u2;
  return -a3 - 2.0 * a4 * u2 + a2 * u1;
}

namespace {

struct Grid {
  int n;
  double h;
  int id(int ix, int iy) const { return ix + n * iy; }
};

// -(v . grad)u + D lap(u) with mirrored ghost cells (zero normal gradient).
void advection_diffusion(const Grid& g, double d, double vx, double vy, std::span<const double> u,
                         std::span<double> out) {
  const int n = g.n;
  const double h = g.h;
  auto at = [&](int ix, int iy) {
    ix = std::clamp(ix, 0, n - 1);  // mirror ghost
    iy = std::clamp(iy, 0, n - 1);
    return u[g.id(ix, iy)];
  };
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double uc = u[g.id(ix, iy)];
      const double lap =
          (at(ix - 1, iy) + at(ix + 1, iy) + at(ix, iy - 1) + at(ix, iy + 1) - 4.0 * uc) / (h * h);
      double adv = 0.0;
      if (vx > 0.0)
        adv += vx * (uc - at(ix - 1, iy)) / h;
      else if (vx < 0.0)
        adv += vx * (at(ix + 1, iy) - uc) / h;
      if (vy > 0.0)
        adv += vy * (uc - at(ix, iy - 1)) / h;
      else if (vy < 0.0)
        adv += vy * (at(ix, iy + 1) - uc) / h;
      out[g.id(ix, iy)] = -adv + d * lap;
    }
}

// Band entries of the advection-diffusion operator for one species.
void operator_band(const Grid& g, double d, double vx, double vy, BandedMatrix& jac) {
  const int n = g.n;
  const double h = g.h;
  const double idh2 = d / (h * h);
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const int row = g.id(ix, iy);
      auto add = [&](int jx, int jy, double w) {
        const int cx = std::clamp(jx, 0, n - 1);
        const int cy = std::clamp(jy, 0, n - 1);
        jac.at(row, g.id(cx, cy)) += w;
      };
      add(ix, iy, -4.0 * idh2);
      add(ix - 1, iy, idh2);
      add(ix + 1, iy, idh2);
      add(ix, iy - 1, idh2);
      add(ix, iy + 1, idh2);
      if (vx > 0.0) {
        add(ix, iy, -vx / h);
        add(ix - 1, iy, vx / h);
      } else if (vx < 0.0) {
        add(ix + 1, iy, -vx / h);
        add(ix, iy, vx / h);
      }
      if (vy > 0.0) {
        add(ix, iy, -vy / h);
        add(ix, iy - 1, vy / h);
      } else if (vy < 0.0) {
        add(ix, iy + 1, -vy / h);
        add(ix, iy, vy / h);
      }
    }
}

}  // namespace

CoupledOdeSystem PredPreyProblem::system() const {
  auto prm = std::make_shared<const PredPreyProblem>(*this);
  const Grid grid{n, 1.0 / n};
  const int dim = cells();

  CoupledOdeSystem sys;
  sys.name = "predprey";
  sys.structure = CouplingStructure::full;
  for (int i = 0; i < 2; ++i) {
    Subsystem s;
    s.dim = dim;
    s.cdim = dim;
    s.name = i == 0 ? "prey" : "predator";
    s.bandwidth = n;
    const double vx = i == 0 ? v1x : v2x;
    const double vy = i == 0 ? v1y : v2y;
    const double d = diffusivity;
    s.velocity = [grid, d, vx, vy](std::span<const double> u, std::span<const double> c, double) {
      Vector out(u.size());
      advection_diffusion(grid, d, vx, vy, u, out);
      for (size_t k = 0; k < out.size(); ++k) out[k] += c[k];
      return out;
    };
    s.jac_velocity_u = [grid, d, vx, vy, dim](std::span<const double>, std::span<const double>, double) {
      BandedMatrix band(dim, grid.n);
      operator_band(grid, d, vx, vy, band);
      DenseMatrix j(dim, dim);
      for (int r = 0; r < dim; ++r)
        for (int cc = std::max(0, r - grid.n); cc <= std::min(dim - 1, r + grid.n); ++cc)
          j(r, cc) = band.at(r, cc);
      return j;
    };
    s.jac_velocity_c = [dim](std::span<const double>, std::span<const double>, double) {
      return DenseMatrix::identity(dim);
    };
    sys.subsystems.push_back(std::move(s));
  }

  sys.coupling = [prm, dim](int i, const PartitionedState& u, double) {
    auto u1 = u.part(0);
    auto u2 = u.part(1);
    Vector c(dim);
    for (int k = 0; k < dim; ++k) c[k] = prm->reaction(i, u1[k], u2[k]);
    return c;
  };
  sys.jac_coupling = [prm, dim](int i, int j, const PartitionedState& u, double) {
    auto u1 = u.part(0);
    auto u2 = u.part(1);
    DenseMatrix d(dim, dim);
    for (int k = 0; k < dim; ++k) d(k, k) = prm->reaction_d(i, j, u1[k], u2[k]);
    return d;
  };
  sys.stage_jacobian_band = [prm, grid](int i, const PartitionedState& arg, std::span<const double>,
                                        double, bool strong, BandedMatrix& jac) {
    const double vx = i == 0 ? prm->v1x : prm->v2x;
    const double vy = i == 0 ? prm->v1y : prm->v2y;
    operator_band(grid, prm->diffusivity, vx, vy, jac);
    if (strong) {
      auto u1 = arg.part(0);
      auto u2 = arg.part(1);
      for (int k = 0; k < grid.n * grid.n; ++k) jac.at(k, k) += prm->reaction_d(i, i, u1[k], u2[k]);
    }
    return true;
  };
  return sys;
}

PartitionedState PredPreyProblem::initial() const {
  const int dim = cells();
  PartitionedState u({dim, dim});
  const double h = 1.0 / n;
  const double d2 = bump_radius * bump_radius;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double x = -0.5 + (ix + 0.5) * h;
      const double y = -0.5 + (iy + 0.5) * h;
      const int id = ix + n * iy;
      u.part(0)[id] = 1.0;
      const double r2 = (x - bump_x) * (x - bump_x) + (y - bump_y) * (y - bump_y);
      u.part(1)[id] = (r2 < d2) ? std::exp(-d2 / (d2 - r2)) : 0.0;
    }
  return u;
}

}  // namespace mpimex
