#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mpimex/mat.hpp"

namespace mpimex {

// Per-subsystem state vectors stored as offsets into one concatenated vector.
class PartitionedState {
 public:
  PartitionedState() = default;
  explicit PartitionedState(std::vector<int> dims);
  PartitionedState(std::vector<int> dims, Vector flat);

  int parts() const { return static_cast<int>(dims_.size()); }
  int dim(int i) const { return dims_[i]; }
  const std::vector<int>& dims() const { return dims_; }
  int total() const { return total_; }

  std::span<double> part(int i) { return {data_.data() + offsets_[i], static_cast<size_t>(dims_[i])}; }
  std::span<const double> part(int i) const {
    return {data_.data() + offsets_[i], static_cast<size_t>(dims_[i])};
  }
  Vector part_copy(int i) const;
  void set_part(int i, std::span<const double> v);

  Vector& flat() { return data_; }
  const Vector& flat() const { return data_; }

  double norm_inf() const;

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  int total_ = 0;
  Vector data_;
};

// One physical subsystem: mass-operator actions, velocity, and optional
// analytic Jacobians. Null mass actions mean identity; null Jacobians fall
// back to finite differences.
struct Subsystem {
  int dim = 0;
  int cdim = 0;
  std::string name;

  using MassFn = std::function<Vector(std::span<const double>)>;
  using VelocityFn = std::function<Vector(std::span<const double> u, std::span<const double> c, double t)>;
  using JacFn = std::function<DenseMatrix(std::span<const double> u, std::span<const double> c, double t)>;

  MassFn mass_apply;   // v = M u
  MassFn mass_solve;   // u = M^{-1} v
  VelocityFn velocity; // r(u, c, t)
  JacFn jac_velocity_u;  // dr/du, optional
  JacFn jac_velocity_c;  // dr/dc, optional

  // Scalar half-bandwidth of the stage Newton matrix M - dt*a*dg/du;
  // negative means dense.
  int bandwidth = -1;

  Vector apply_mass(std::span<const double> u) const;
  Vector solve_mass(std::span<const double> v) const;
};

enum class CouplingStructure { full, special_triangular };

// Ordered collection of coupled subsystems (the semi-discrete multiphysics
// system): each coupling term c^i may draw on the states of all subsystems.
struct CoupledOdeSystem {
  std::vector<Subsystem> subsystems;
  std::string name;
  CouplingStructure structure = CouplingStructure::full;

  using CouplingFn = std::function<Vector(int i, const PartitionedState& u, double t)>;
  using CouplingJacFn = std::function<DenseMatrix(int i, int j, const PartitionedState& u, double t)>;

  CouplingFn coupling;
  CouplingJacFn jac_coupling;  // dc^i/du^j, optional (strong predictors use j == i)

  // Optional band-limited stage Jacobian for banded subsystems:
  // dr^i/du^i + (strong ? dr^i/dc^i * dc^i/du^i : 0), added into jac. `arg` is
  // the predictor argument state whose i-th part is the live stage unknown
  // (parts other than i are meaningful only when strong is set) and c is the
  // prediction value there. Returning false (or a null function) falls back to
  // a colored central-difference probe of the combined implicit stage
  // velocity for that subsystem.
  using StageJacBandFn = std::function<bool(int i, const PartitionedState& arg, std::span<const double> c,
                                            double t, bool strong, BandedMatrix& jac)>;
  StageJacBandFn stage_jacobian_band;

  int count() const { return static_cast<int>(subsystems.size()); }
  std::vector<int> dims() const;
  int total_dim() const;
  PartitionedState zero_state() const;
};

// r(u, c(u,t), t), concatenated over subsystems.
PartitionedState monolithic_velocity(const CoupledOdeSystem& sys, const PartitionedState& u, double t);

// Central-difference Jacobian with per-column step sqrt(eps)*(1+|u_k|).
DenseMatrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& u);

}  // namespace mpimex
