#include "mpimex/system.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "mpimex/errors.hpp"

namespace mpimex {

PartitionedState::PartitionedState(std::vector<int> dims) : dims_(std::move(dims)) {
  offsets_.resize(dims_.size());
  int off = 0;
  for (size_t i = 0; i < dims_.size(); ++i) {
    offsets_[i] = off;
    off += dims_[i];
  }
  total_ = off;
  data_.assign(total_, 0.0);
}

PartitionedState::PartitionedState(std::vector<int> dims, Vector flat) : PartitionedState(std::move(dims)) {
  if (static_cast<int>(flat.size()) != total_)
    throw RejectedInput("PartitionedState: flat vector does not match dims");
  data_ = std::move(flat);
}

Vector PartitionedState::part_copy(int i) const {
  auto p = part(i);
  return Vector(p.begin(), p.end());
}

void PartitionedState::set_part(int i, std::span<const double> v) {
  if (static_cast<int>(v.size()) != dims_[i]) throw RejectedInput("set_part: dimension mismatch");
  auto p = part(i);
  std::copy(v.begin(), v.end(), p.begin());
}

double PartitionedState::norm_inf() const { return mpimex::norm_inf(data_); }

Vector Subsystem::apply_mass(std::span<const double> u) const {
  if (!mass_apply) return Vector(u.begin(), u.end());
  return mass_apply(u);
}

Vector Subsystem::solve_mass(std::span<const double> v) const {
  if (!mass_solve) return Vector(v.begin(), v.end());
  return mass_solve(v);
}

std::vector<int> CoupledOdeSystem::dims() const {
  std::vector<int> d(subsystems.size());
  for (size_t i = 0; i < subsystems.size(); ++i) d[i] = subsystems[i].dim;
  return d;
}

int CoupledOdeSystem::total_dim() const {
  int t = 0;
  for (const auto& s : subsystems) t += s.dim;
  return t;
}

PartitionedState CoupledOdeSystem::zero_state() const { return PartitionedState(dims()); }

PartitionedState monolithic_velocity(const CoupledOdeSystem& sys, const PartitionedState& u, double t) {
  if (u.parts() != sys.count() || u.dims() != sys.dims())
    throw RejectedInput("monolithic_velocity: state dimensions do not match system");
  PartitionedState r(sys.dims());
  for (int i = 0; i < sys.count(); ++i) {
    Vector c = sys.coupling(i, u, t);
    if (static_cast<int>(c.size()) != sys.subsystems[i].cdim)
      throw RejectedInput("coupling term has wrong dimension for subsystem " + std::to_string(i));
    Vector v = sys.subsystems[i].velocity(u.part(i), c, t);
    r.set_part(i, v);
  }
  return r;
}

DenseMatrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& u) {
  const int n = static_cast<int>(u.size());
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  Vector up = u, um = u;
  Vector f0 = f(u);
  for (double x : f0)
    if (!std::isfinite(x)) throw NumericFailure("fd_jacobian: non-finite function value");
  const int m = static_cast<int>(f0.size());
  DenseMatrix jac(m, n);
  for (int k = 0; k < n; ++k) {
    const double h = sqrt_eps * (1.0 + std::abs(u[k]));
    up[k] = u[k] + h;
    um[k] = u[k] - h;
    Vector fp = f(up);
    Vector fm = f(um);
    up[k] = u[k];
    um[k] = u[k];
    for (int i = 0; i < m; ++i) {
      const double d = (fp[i] - fm[i]) / (2.0 * h);
      if (!std::isfinite(d)) throw NumericFailure("fd_jacobian: non-finite difference quotient");
      jac(i, k) = d;
    }
  }
  return jac;
}

}  // namespace mpimex
