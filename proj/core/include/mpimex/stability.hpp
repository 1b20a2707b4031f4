#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mpimex/integrator.hpp"

namespace mpimex {

// Update matrix, spectrum, and verdict of one linear one-step map.
struct StabilityReport {
  DenseMatrix update_matrix;
  std::vector<Complex> eigenvalues;
  double rho = 0.0;
  bool stable = false;  // rho <= 1 + 1e-12
  // Eigenvalues of magnitude ~1 appear clustered; the eigenspace condition is
  // reported, not enforced.
  bool unit_modulus_cluster_warning = false;
};

// One-step update matrix C of a linear homogeneous system: column k is one
// step applied to the k-th unit vector. Verifies homogeneity and linearity of
// the step map before probing.
DenseMatrix probe_update_matrix(const CoupledOdeSystem& sys, const ImexTableau& tableau, PredictorKind kind,
                                double dt, const NewtonConfig& newton = {});

StabilityReport stability_report(const CoupledOdeSystem& sys, const ImexTableau& tableau, PredictorKind kind,
                                 double dt, const NewtonConfig& newton = {});

// The eigenvalue of the probed 2x2 model-problem update matrix farthest from 1
// (the unit eigenvalue is structural).
Complex nonunit_eigenvalue(const DenseMatrix& c2x2);

// Closed-form non-unit amplification factor of the first-order
// forward-backward Euler pair on the two-equation model problem; the spectral
// radius is max(1, |factor|).
double closed_form_factor_imex1(PredictorKind kind, double dt, double lambda1, double lambda2, double alpha);

// Product of the two trapezoidal amplification factors (strong Gauss-Seidel,
// second-order pair); independent of the coupling parameter.
double closed_form_factor_imex2_strong_gs(double dt, double lambda1, double lambda2);

// |p(x1,x2)/q(x1,x2)| for the strong Gauss-Seidel split of the third-order
// (4-stage) and fourth-order (6-stage) pairs, with q = (1-a*x1)^d (1-a*x2)^d,
// (a,d) = (0.4358665216, 3) and (0.25, 5).
double ark_ratio(int order, double x1, double x2);

// Transcribed numerator coefficient tables behind ark_ratio (row i = power of
// x1, column j = power of x2).
const DenseMatrix& ark_p_table(int order);
// Binomial coefficients of the corresponding q; (-1)^{i+j} q_ij >= |p_ij|.
double ark_q_coefficient(int order, int i, int j);

// |(1 + dt*lambda2)/(1 - dt*lambda1)|: the conditional bound produced when one
// subsystem is replaced by its exact solution before discretizing.
double reduced_decoupled_factor(double dt, double lambda1, double lambda2);

struct StabilityScanRow {
  double dt = 0.0, lambda1 = 0.0, lambda2 = 0.0, alpha = 0.0;
  double rho = 0.0;
  bool stable = false;
  std::string error;  // empty on success
};

// Model-problem scan over the grid dt x lambda1 x lambda2 x alpha, in
// lexicographic order of the grid indices. Per-point failures are recorded in
// the row and the scan continues.
std::vector<StabilityScanRow> scan_stability(SchemeId scheme, PredictorKind kind,
                                             const std::vector<double>& dts,
                                             const std::vector<double>& lambda1s,
                                             const std::vector<double>& lambda2s,
                                             const std::vector<double>& alphas, int threads = 0);

struct DiagDominantRow {
  int n = 0;
  int instance = 0;
  double dt = 0.0;
  PredictorKind kind = PredictorKind::weak_jacobi;
  double rho = 0.0;
  bool pass = false;  // rho <= 1 + 1e-10
};

struct DiagDominantSummary {
  std::vector<DiagDominantRow> rows;
  int failures = 0;
  double max_rho = 0.0;
};

// Random diagonally dominant matrices with negative diagonals, coupling
// c = (L+U)u, first-order pair: both Jacobi and Gauss-Seidel partitioned
// update matrices must satisfy rho <= 1 + 1e-10.
DiagDominantSummary diag_dominant_theorem_check(int n, int count, const std::vector<double>& dts,
                                                std::uint64_t seed);

// n scalar subsystems from a dense matrix: r_i = a_ii u_i + c_i with
// c_i = sum_{j != i} a_ij u_j.
CoupledOdeSystem coupled_system_from_matrix(const DenseMatrix& a);

// Off-diagonals uniform in [-1,1]; a_ii = -(sum_j |a_ij| + uniform(0,1)).
DenseMatrix random_diag_dominant_matrix(int n, std::uint64_t seed);

}  // namespace mpimex
