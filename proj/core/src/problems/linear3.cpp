#include "mpimex/problems/linear3.hpp"

#include <algorithm>
#include <cmath>

#include "mpimex/errors.hpp"

namespace mpimex {

DenseMatrix Linear3Problem::matrix() {
  DenseMatrix a(3, 3);
  const double t[3][3] = {{1, 1, 1}, {1, 1, 0}, {1, 1, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = t[i][j];
  return a;
}

CoupledOdeSystem Linear3Problem::system() {
  CoupledOdeSystem sys;
  sys.name = "linear3";
  sys.structure = CouplingStructure::full;  // c1 depends on later subsystems
  for (int i = 0; i < 3; ++i) {
    Subsystem s;
    s.dim = 1;
    s.cdim = 1;
    s.name = "u" + std::to_string(i + 1);
    s.velocity = [](std::span<const double> u, std::span<const double> c, double) {
      return Vector{u[0] + c[0]};
    };
    s.jac_velocity_u = [](std::span<const double>, std::span<const double>, double) {
      DenseMatrix j(1, 1);
      j(0, 0) = 1.0;
      return j;
    };
    s.jac_velocity_c = [](std::span<const double>, std::span<const double>, double) {
      DenseMatrix j(1, 1);
      j(0, 0) = 1.0;
      return j;
    };
    sys.subsystems.push_back(std::move(s));
  }
  sys.coupling = [](int i, const PartitionedState& u, double) {
    const double u1 = u.part(0)[0], u2 = u.part(1)[0], u3 = u.part(2)[0];
    switch (i) {
      case 0: return Vector{u2 + u3};
      case 1: return Vector{u1};
      default: return Vector{u1 + u2};
    }
  };
  sys.jac_coupling = [](int i, int j, const PartitionedState&, double) {
    const double t[3][3] = {{0, 1, 1}, {1, 0, 0}, {1, 1, 0}};
    DenseMatrix d(1, 1);
    d(0, 0) = t[i][j];
    return d;
  };
  return sys;
}

PartitionedState Linear3Problem::initial() {
  PartitionedState u({1, 1, 1});
  u.part(0)[0] = 1.0;
  u.part(1)[0] = 0.0;
  u.part(2)[0] = 2.0;
  return u;
}

Vector Linear3Problem::exact(double t) {
  const DenseMatrix a = matrix();
  auto ev = eigenvalues(a);
  for (const auto& z : ev)
    if (std::abs(z.imag()) > 1e-12) throw NumericFailure("linear3 exact: unexpected complex spectrum");
  // Eigenvectors by inverse iteration with a slightly shifted eigenvalue.
  DenseMatrix p(3, 3);
  for (int k = 0; k < 3; ++k) {
    const double shift = ev[k].real() + 1e-8;
    DenseMatrix shifted = a;
    for (int i = 0; i < 3; ++i) shifted(i, i) -= shift;
    LuFactor lu(shifted);
    Vector v{1.0, 0.7, -0.4};
    for (int it = 0; it < 5; ++it) {
      lu.solve_in_place(v);
      double m = norm_inf(v);
      for (double& x : v) x /= m;
    }
    for (int i = 0; i < 3; ++i) p(i, k) = v[i];
  }
  const Vector u0 = {1.0, 0.0, 2.0};
  Vector y = lu_solve(p, u0);  // coordinates of u0 in the eigenbasis
  for (int k = 0; k < 3; ++k) y[k] *= std::exp(ev[k].real() * t);
  return matvec(p, y);
}

}  // namespace mpimex
