#include "qsync/mat3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qsync {

namespace {

bool finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

}  // namespace

Mat3::Mat3(const std::array<Complex, 9>& entries) : e_(entries) {
  check_finite();
}

void Mat3::check_finite() const {
  for (const Complex& z : e_) {
    if (!finite(z)) throw std::invalid_argument("Mat3: non-finite entry");
  }
}

Mat3 Mat3::identity() {
  return Mat3({Complex(1), Complex(0), Complex(0),  //
               Complex(0), Complex(1), Complex(0),  //
               Complex(0), Complex(0), Complex(1)});
}

Mat3 Mat3::from_real(const std::array<std::array<double, 3>, 3>& rows) {
  std::array<Complex, 9> e;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) e[idx(i, j)] = Complex(rows[i][j]);
  return Mat3(e);
}

void Mat3::set(int i, int j, Complex v) {
  if (!finite(v)) throw std::invalid_argument("Mat3: non-finite entry");
  e_[idx(i, j)] = v;
}

Mat3 Mat3::operator+(const Mat3& o) const {
  std::array<Complex, 9> r;
  for (std::size_t k = 0; k < 9; ++k) r[k] = e_[k] + o.e_[k];
  return Mat3(r);
}

Mat3 Mat3::operator-(const Mat3& o) const {
  std::array<Complex, 9> r;
  for (std::size_t k = 0; k < 9; ++k) r[k] = e_[k] - o.e_[k];
  return Mat3(r);
}

Mat3 Mat3::operator*(const Mat3& o) const {
  std::array<Complex, 9> r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Complex s = 0;
      for (int k = 0; k < 3; ++k) s += e_[idx(i, k)] * o.e_[idx(k, j)];
      r[idx(i, j)] = s;
    }
  }
  return Mat3(r);
}

Mat3 Mat3::operator*(Complex s) const {
  std::array<Complex, 9> r;
  for (std::size_t k = 0; k < 9; ++k) r[k] = e_[k] * s;
  return Mat3(r);
}

Complex Mat3::det() const {
  return e_[0] * (e_[4] * e_[8] - e_[5] * e_[7]) -
         e_[1] * (e_[3] * e_[8] - e_[5] * e_[6]) +
         e_[2] * (e_[3] * e_[7] - e_[4] * e_[6]);
}

double Mat3::max_abs_entry() const {
  double m = 0.0;
  for (const Complex& z : e_) m = std::max(m, std::abs(z));
  return m;
}

bool Mat3::is_hermitian(double tol) const {
  return max_abs_diff(*this, adjoint(*this)) <= tol;
}

Mat3 adjoint(const Mat3& m) {
  std::array<Complex, 9> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r[static_cast<std::size_t>(3 * i + j)] = std::conj(m(j, i));
  return Mat3(r);
}

double max_abs_diff(const Mat3& a, const Mat3& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

namespace {

double frobenius_sq(const Mat3& m) {
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) s += std::norm(m(i, j));
  return s;
}

std::array<double, 3> sorted_desc(std::array<double, 3> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

// Cyclic Jacobi for a 3x3 Hermitian matrix. Each rotation diagonalizes one
// off-diagonal 2x2 block with a phased Givens rotation; quadratic convergence
// makes a handful of sweeps plenty at this size.
std::array<double, 3> jacobi_eigenvalues(Mat3 h) {
  const double scale = std::max(1.0, frobenius_sq(h));
  constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int sweep = 0; sweep < 40; ++sweep) {
    double off = std::norm(h(0, 1)) + std::norm(h(0, 2)) + std::norm(h(1, 2));
    if (off <= 1e-32 * scale) break;
    for (const auto& pq : pairs) {
      const int p = pq[0], q = pq[1];
      const Complex apq = h(p, q);
      const double a = std::abs(apq);
      if (a <= 1e-18 * scale) continue;
      const Complex phase = apq / a;
      const double app = h(p, p).real();
      const double aqq = h(q, q).real();
      const double tau = (aqq - app) / (2.0 * a);
      const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                    : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double s = t * c;
      // U = diag(1, e^{-i phi}) at (p, q) composed with the real rotation
      // [[c, s], [-s, c]]; conjugating by U zeroes the (p, q) entry.
      Mat3 u = Mat3::identity();
      u.set(p, p, Complex(c));
      u.set(p, q, Complex(s));
      u.set(q, p, std::conj(phase) * -s);
      u.set(q, q, std::conj(phase) * c);
      h = adjoint(u) * h * u;
    }
  }
  return sorted_desc({h(0, 0).real(), h(1, 1).real(), h(2, 2).real()});
}

}  // namespace

std::array<double, 3> hermitian_eigenvalues(const Mat3& m) {
  const double dev = max_abs_diff(m, adjoint(m));
  if (dev > kHermTol) {
    throw NotHermitianError("hermitian_eigenvalues: max |M - M^dagger| = " +
                            std::to_string(dev));
  }
  const Mat3 h = (m + adjoint(m)) * Complex(0.5);

  const double p1 =
      std::norm(h(0, 1)) + std::norm(h(0, 2)) + std::norm(h(1, 2));
  if (p1 == 0.0) {
    // Already diagonal; exact for basis projectors and their differences.
    return sorted_desc({h(0, 0).real(), h(1, 1).real(), h(2, 2).real()});
  }

  const double q = h.trace().real() / 3.0;
  const double fro2 = frobenius_sq(h);
  const double d00 = h(0, 0).real() - q;
  const double d11 = h(1, 1).real() - q;
  const double d22 = h(2, 2).real() - q;
  const double p2 = d00 * d00 + d11 * d11 + d22 * d22 + 2.0 * p1;
  if (p2 <= 1e-28 * std::max(1.0, fro2)) {
    return jacobi_eigenvalues(h);  // near-scalar: triple root
  }

  const double p = std::sqrt(p2 / 6.0);
  Mat3 shifted = h;
  for (int i = 0; i < 3; ++i) shifted.set(i, i, h(i, i) - Complex(q));
  const Mat3 b = shifted * Complex(1.0 / p);
  double r = b.det().real() / 2.0;
  r = std::clamp(r, -1.0, 1.0);
  if (1.0 - std::abs(r) < 1e-14) {
    return jacobi_eigenvalues(h);  // near-degenerate pair
  }

  const double phi = std::acos(r) / 3.0;
  const double two_thirds_pi = 2.0 * std::numbers::pi / 3.0;
  const double lam1 = q + 2.0 * p * std::cos(phi);
  const double lam3 = q + 2.0 * p * std::cos(phi + two_thirds_pi);
  const double lam2 = 3.0 * q - lam1 - lam3;
  return sorted_desc({lam1, lam2, lam3});
}

std::array<double, 3> singular_values(const Mat3& m) {
  // Eigenvalues of M^dagger M (never M M^dagger) for determinism; clamp the
  // tiny negatives that roundoff can produce before taking roots.
  const auto ev = hermitian_eigenvalues(adjoint(m) * m);
  std::array<double, 3> s;
  for (int i = 0; i < 3; ++i) s[i] = std::sqrt(std::max(0.0, ev[i]));
  return s;
}

double schatten_norm(const Mat3& m, SchattenOrder p) {
  switch (p) {
    case SchattenOrder::two:
      return std::sqrt(frobenius_sq(m));
    case SchattenOrder::one: {
      const auto s = singular_values(m);
      return s[0] + s[1] + s[2];
    }
    case SchattenOrder::inf:
      return singular_values(m)[0];
  }
  return 0.0;  // unreachable
}

}  // namespace qsync
