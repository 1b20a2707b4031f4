#pragma once

#include <complex>
#include <span>
#include <vector>

namespace mpimex {

using Vector = std::vector<double>;
using Complex = std::complex<double>;

double norm_inf(std::span<const double> v);
// y += a*x
void axpy(double a, std::span<const double> x, std::span<double> y);

// Row-major dense matrix of 64-bit reals.
struct DenseMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return data[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<size_t>(i) * cols + j]; }

  static DenseMatrix identity(int n);
  bool finite() const;
};

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
Vector matvec(const DenseMatrix& a, std::span<const double> x);
// Max absolute row sum.
double norm_inf(const DenseMatrix& a);

// LU factorization with partial pivoting, reusable across right-hand sides.
class LuFactor {
 public:
  explicit LuFactor(DenseMatrix a);
  void solve_in_place(std::span<double> b) const;
  Vector solve(std::span<const double> b) const;
  DenseMatrix solve(const DenseMatrix& b) const;
  int size() const { return lu_.rows; }

 private:
  DenseMatrix lu_;
  std::vector<int> piv_;
};

// X with A X = B; throws SingularMatrix on an exactly singular pivot.
DenseMatrix lu_solve(const DenseMatrix& a, const DenseMatrix& b);
Vector lu_solve(const DenseMatrix& a, std::span<const double> b);

// All n complex eigenvalues, with multiplicity, of a real square matrix.
// Hessenberg reduction followed by shifted (Francis) QR; intended for the
// desk-scale matrices of this library (n up to a few dozen).
std::vector<Complex> eigenvalues(const DenseMatrix& a);

// max |lambda| over eigenvalues(a)
double spectral_radius(const DenseMatrix& a);

// Banded matrix in LAPACK-style band storage with room for pivoting fill-in:
// entry (i,j) with |i-j| <= bw lives at band(kl+ku + i - j, j) where
// kl = ku = bw and the storage holds 2*kl+ku+1 rows.
class BandedMatrix {
 public:
  BandedMatrix(int n, int bw);
  int size() const { return n_; }
  int bandwidth() const { return bw_; }
  double& at(int i, int j);
  double at(int i, int j) const;
  void zero();
  void scale(double s);
  void add_scaled(const BandedMatrix& other, double s);

  // Factor in place (partial pivoting) and solve; factor() invalidates at().
  void factor();
  void solve_in_place(std::span<double> b) const;

 private:
  int n_ = 0;
  int bw_ = 0;
  int stride_ = 0;  // rows in band storage = 3*bw+1
  bool factored_ = false;
  std::vector<double> a_;
  std::vector<int> piv_;
};

}  // namespace mpimex
