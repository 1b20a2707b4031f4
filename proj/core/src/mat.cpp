#include "mpimex/mat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mpimex/errors.hpp"

namespace mpimex {

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

bool DenseMatrix::finite() const {
  for (double x : data)
    if (!std::isfinite(x)) return false;
  return true;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows) throw RejectedInput("matrix product: inner dimensions differ");
  DenseMatrix c(a.rows, b.cols);
  for (int i = 0; i < a.rows; ++i)
    for (int k = 0; k < a.cols; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector matvec(const DenseMatrix& a, std::span<const double> x) {
  if (static_cast<int>(x.size()) != a.cols) throw RejectedInput("matvec: dimension mismatch");
  Vector y(a.rows, 0.0);
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols; ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double norm_inf(const DenseMatrix& a) {
  double m = 0.0;
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < a.cols; ++j) s += std::abs(a(i, j));
    m = std::max(m, s);
  }
  return m;
}

LuFactor::LuFactor(DenseMatrix a) : lu_(std::move(a)), piv_(lu_.rows) {
  if (lu_.rows != lu_.cols) throw RejectedInput("lu: matrix not square");
  if (!lu_.finite()) throw RejectedInput("lu: non-finite entries");
  const int n = lu_.rows;
  const double tiny = 1e-14 * std::max(norm_inf(lu_), std::numeric_limits<double>::min());
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(lu_(i, k)) > std::abs(lu_(p, k))) p = i;
    piv_[k] = p;
    if (p != k)
      for (int j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
    const double pivot = lu_(k, k);
    if (std::abs(pivot) < tiny) throw SingularMatrix("lu: singular pivot at column " + std::to_string(k));
    for (int i = k + 1; i < n; ++i) {
      const double m = lu_(i, k) / pivot;
      lu_(i, k) = m;
      if (m == 0.0) continue;
      for (int j = k + 1; j < n; ++j) lu_(i, j) -= m * lu_(k, j);
    }
  }
}

void LuFactor::solve_in_place(std::span<double> b) const {
  const int n = lu_.rows;
  if (static_cast<int>(b.size()) != n) throw RejectedInput("lu solve: dimension mismatch");
  for (int k = 0; k < n; ++k) {
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
    for (int i = k + 1; i < n; ++i) b[i] -= lu_(i, k) * b[k];
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= lu_(i, j) * b[j];
    b[i] = s / lu_(i, i);
  }
}

Vector LuFactor::solve(std::span<const double> b) const {
  Vector x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

DenseMatrix LuFactor::solve(const DenseMatrix& b) const {
  if (b.rows != lu_.rows) throw RejectedInput("lu solve: dimension mismatch");
  DenseMatrix x = b;
  Vector col(b.rows);
  for (int j = 0; j < b.cols; ++j) {
    for (int i = 0; i < b.rows; ++i) col[i] = b(i, j);
    solve_in_place(col);
    for (int i = 0; i < b.rows; ++i) x(i, j) = col[i];
  }
  return x;
}

DenseMatrix lu_solve(const DenseMatrix& a, const DenseMatrix& b) { return LuFactor(a).solve(b); }

Vector lu_solve(const DenseMatrix& a, std::span<const double> b) { return LuFactor(a).solve(b); }

namespace {

// Reduce to upper Hessenberg form by stabilized elementary similarity
// transformations (ELMHES).
void hessenberg(DenseMatrix& h) {
  const int n = h.rows;
  for (int m = 1; m < n - 1; ++m) {
    int p = m;
    for (int i = m + 1; i < n; ++i)
      if (std::abs(h(i, m - 1)) > std::abs(h(p, m - 1))) p = i;
    if (p != m) {
      for (int j = m - 1; j < n; ++j) std::swap(h(m, j), h(p, j));
      for (int i = 0; i < n; ++i) std::swap(h(i, m), h(i, p));
    }
    const double x = h(m, m - 1);
    if (x == 0.0) continue;
    for (int i = m + 1; i < n; ++i) {
      double y = h(i, m - 1);
      if (y == 0.0) continue;
      y /= x;
      h(i, m - 1) = 0.0;
      for (int j = m; j < n; ++j) h(i, j) -= y * h(m, j);
      for (int j = 0; j < n; ++j) h(j, m) += y * h(j, i);
    }
  }
  for (int i = 2; i < n; ++i)
    for (int j = 0; j < i - 1; ++j) h(i, j) = 0.0;
}

inline double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix (HQR).
std::vector<Complex> hqr(DenseMatrix& h, int max_sweeps) {
  const int n = h.rows;
  std::vector<Complex> ev(n);
  const double eps = std::numeric_limits<double>::epsilon();
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(h(i, j));
  if (anorm == 0.0) return ev;

  int en = n - 1;
  double t = 0.0;
  int itn = max_sweeps;
  while (en >= 0) {
    int its = 0;
    int l = 0;
    for (;;) {
      for (l = en; l >= 1; --l) {
        double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(h(l, l - 1)) <= eps * s) break;
      }
      double x = h(en, en);
      if (l == en) {
        ev[en] = Complex(x + t, 0.0);
        --en;
        break;
      }
      double y = h(en - 1, en - 1);
      double w = h(en, en - 1) * h(en - 1, en);
      if (l == en - 1) {
        double p = 0.5 * (y - x);
        double q = p * p + w;
        double zz = std::sqrt(std::abs(q));
        x += t;
        if (q >= 0.0) {
          zz = p + sign_of(zz, p);
          double r1 = x + zz;
          double r2 = (zz != 0.0) ? x - w / zz : r1;
          ev[en - 1] = Complex(r1, 0.0);
          ev[en] = Complex(r2, 0.0);
        } else {
          ev[en - 1] = Complex(x + p, zz);
          ev[en] = Complex(x + p, -zz);
        }
        en -= 2;
        break;
      }
      if (itn == 0) throw NumericFailure("eigenvalues: QR iteration did not converge");
      if (its == 10 || its == 20) {
        t += x;
        for (int i = 0; i <= en; ++i) h(i, i) -= x;
        double s = std::abs(h(en, en - 1)) + std::abs(h(en - 1, en - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      ++its;
      --itn;
      int m;
      double p = 0.0, q = 0.0, r = 0.0;
      for (m = en - 2; m >= l; --m) {
        double zz = h(m, m);
        double rr = x - zz;
        double ss = y - zz;
        p = (rr * ss - w) / h(m + 1, m) + h(m, m + 1);
        q = h(m + 1, m + 1) - zz - rr - ss;
        r = h(m + 2, m + 1);
        double sc = std::abs(p) + std::abs(q) + std::abs(r);
        p /= sc;
        q /= sc;
        r /= sc;
        if (m == l) break;
        double tst1 = std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(zz) + std::abs(h(m + 1, m + 1)));
        double tst2 = tst1 + std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
        if (tst2 == tst1) break;
      }
      for (int i = m + 2; i <= en; ++i) {
        h(i, i - 2) = 0.0;
        if (i > m + 2) h(i, i - 3) = 0.0;
      }
      for (int k = m; k <= en - 1; ++k) {
        const bool notlast = (k != en - 1);
        if (k != m) {
          p = h(k, k - 1);
          q = h(k + 1, k - 1);
          r = notlast ? h(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
        if (k != m)
          h(k, k - 1) = -s * x;
        else if (l != m)
          h(k, k - 1) = -h(k, k - 1);
        p += s;
        x = p / s;
        y = q / s;
        double zz = r / s;
        q /= p;
        r /= p;
        for (int j = k; j <= en; ++j) {
          double pp = h(k, j) + q * h(k + 1, j);
          if (notlast) {
            pp += r * h(k + 2, j);
            h(k + 2, j) -= pp * zz;
          }
          h(k + 1, j) -= pp * y;
          h(k, j) -= pp * x;
        }
        for (int i = l; i <= std::min(en, k + 3); ++i) {
          double pp = x * h(i, k) + y * h(i, k + 1);
          if (notlast) {
            pp += zz * h(i, k + 2);
            h(i, k + 2) -= pp * r;
          }
          h(i, k + 1) -= pp * q;
          h(i, k) -= pp;
        }
      }
    }
  }
  return ev;
}

}  // namespace

std::vector<Complex> eigenvalues(const DenseMatrix& a) {
  if (a.rows != a.cols) throw RejectedInput("eigenvalues: matrix not square");
  if (!a.finite()) throw RejectedInput("eigenvalues: non-finite entries");
  const int n = a.rows;
  if (n == 0) return {};
  if (n == 1) return {Complex(a(0, 0), 0.0)};
  DenseMatrix h = a;
  hessenberg(h);
  return hqr(h, 100 * n);
}

double spectral_radius(const DenseMatrix& a) {
  double r = 0.0;
  for (const Complex& z : eigenvalues(a)) r = std::max(r, std::abs(z));
  return r;
}

BandedMatrix::BandedMatrix(int n, int bw)
    : n_(n), bw_(bw), stride_(3 * bw + 1), a_(static_cast<size_t>(3 * bw + 1) * n, 0.0), piv_(n) {
  if (bw < 0 || n <= 0) throw RejectedInput("banded: bad dimensions");
}

double& BandedMatrix::at(int i, int j) {
  return a_[static_cast<size_t>(i - j + 2 * bw_) * n_ + j];
}

double BandedMatrix::at(int i, int j) const {
  if (i - j > bw_ || j - i > 2 * bw_) return 0.0;
  return a_[static_cast<size_t>(i - j + 2 * bw_) * n_ + j];
}

void BandedMatrix::zero() {
  std::fill(a_.begin(), a_.end(), 0.0);
  factored_ = false;
}

void BandedMatrix::scale(double s) {
  if (factored_) throw ContractViolation("banded scale after factor");
  for (double& x : a_) x *= s;
}

void BandedMatrix::add_scaled(const BandedMatrix& other, double s) {
  if (factored_) throw ContractViolation("banded add after factor");
  if (other.n_ != n_ || other.bw_ != bw_) throw RejectedInput("banded add: shape mismatch");
  for (size_t k = 0; k < a_.size(); ++k) a_[k] += s * other.a_[k];
}

void BandedMatrix::factor() {
  const int kl = bw_, ku2 = 2 * bw_;
  double amax = 0.0;
  for (double x : a_) amax = std::max(amax, std::abs(x));
  const double tiny = 1e-14 * std::max(amax, std::numeric_limits<double>::min());
  for (int j = 0; j < n_; ++j) {
    const int ilim = std::min(j + kl, n_ - 1);
    int p = j;
    for (int i = j + 1; i <= ilim; ++i)
      if (std::abs(at(i, j)) > std::abs(at(p, j))) p = i;
    piv_[j] = p;
    if (p != j) {
      const int jlim = std::min(j + ku2, n_ - 1);
      for (int k = j; k <= jlim; ++k) std::swap(at(j, k), at(p, k));
    }
    const double pivot = at(j, j);
    if (std::abs(pivot) < tiny) throw SingularMatrix("banded lu: singular pivot at column " + std::to_string(j));
    const int jlim = std::min(j + ku2, n_ - 1);
    for (int i = j + 1; i <= ilim; ++i) {
      const double m = at(i, j) / pivot;
      at(i, j) = m;
      if (m == 0.0) continue;
      for (int k = j + 1; k <= jlim; ++k) at(i, k) -= m * at(j, k);
    }
  }
  factored_ = true;
}

void BandedMatrix::solve_in_place(std::span<double> b) const {
  if (!factored_) throw ContractViolation("banded solve before factor");
  if (static_cast<int>(b.size()) != n_) throw RejectedInput("banded solve: dimension mismatch");
  for (int j = 0; j < n_; ++j) {
    if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
    const int ilim = std::min(j + bw_, n_ - 1);
    for (int i = j + 1; i <= ilim; ++i) b[i] -= at(i, j) * b[j];
  }
  for (int i = n_ - 1; i >= 0; --i) {
    double s = b[i];
    const int jlim = std::min(i + 2 * bw_, n_ - 1);
    for (int j = i + 1; j <= jlim; ++j) s -= at(i, j) * b[j];
    b[i] = s / at(i, i);
  }
}

}  // namespace mpimex
