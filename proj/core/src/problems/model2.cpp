#include "mpimex/problems/model2.hpp"

#include <cmath>

#include "mpimex/errors.hpp"

namespace mpimex {

CoupledOdeSystem Model2Problem::system() const {
  CoupledOdeSystem sys;
  sys.name = "model2";
  sys.structure = CouplingStructure::full;
  const double lam[2] = {lambda1, lambda2};
  const double a = alpha;
  for (int i = 0; i < 2; ++i) {
    Subsystem s;
    s.dim = 1;
    s.cdim = 1;
    s.name = i == 0 ? "u1" : "u2";
    const double li = lam[i];
    s.velocity = [li, a](std::span<const double> u, std::span<const double> c, double) {
      return Vector{(1.0 - a) * li * u[0] + li * c[0]};
    };
    s.jac_velocity_u = [li, a](std::span<const double>, std::span<const double>, double) {
      DenseMatrix j(1, 1);
      j(0, 0) = (1.0 - a) * li;
      return j;
    };
    s.jac_velocity_c = [li](std::span<const double>, std::span<const double>, double) {
      DenseMatrix j(1, 1);
      j(0, 0) = li;
      return j;
    };
    sys.subsystems.push_back(std::move(s));
  }
  sys.coupling = [a](int i, const PartitionedState& u, double) {
    const double u1 = u.part(0)[0], u2 = u.part(1)[0];
    return Vector{i == 0 ? a * u1 + u2 : u1 + a * u2};
  };
  sys.jac_coupling = [a](int i, int j, const PartitionedState&, double) {
    DenseMatrix d(1, 1);
    d(0, 0) = (i == j) ? a : 1.0;
    return d;
  };
  return sys;
}

PartitionedState Model2Problem::initial() const {
  PartitionedState u({1, 1});
  u.part(0)[0] = 1.0;
  u.part(1)[0] = 0.0;
  return u;
}

Vector Model2Problem::exact(double t, const Vector& u0) const {
  // A = [[l1, l1], [l2, l2]] has eigenvalues 0 and l1+l2; exp(tA) closed form.
  const double s = lambda1 + lambda2;
  if (s == 0.0) throw SingularParameter("model2 exact: lambda1 + lambda2 = 0");
  const double e = std::exp(s * t);
  const double w = (u0[0] + u0[1]) * (e - 1.0) / s;
  return Vector{u0[0] + lambda1 * w, u0[1] + lambda2 * w};
}

}  // namespace mpimex
