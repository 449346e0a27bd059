#pragma once

#include <array>
#include <complex>
#include <cstddef>

#include "qsync/error.hpp"

namespace qsync {

using Complex = std::complex<double>;

struct NotHermitianError : Error {
  explicit NotHermitianError(const std::string& detail)
      : Error("NotHermitian", detail) {}
};

// Max entrywise deviation from M = M^dagger tolerated by the Hermitian
// eigenvalue solver. Accumulated error over words of length <= 64 stays far
// below this.
inline constexpr double kHermTol = 1e-9;

/// Dense 3x3 complex matrix, row-major. Entries must be finite; every
/// construction path checks this.
class Mat3 {
 public:
  Mat3() : e_{} {}  // zero matrix
  explicit Mat3(const std::array<Complex, 9>& entries);

  static Mat3 identity();
  /// Convenience for real-valued matrices given as rows.
  static Mat3 from_real(const std::array<std::array<double, 3>, 3>& rows);

  Complex operator()(int i, int j) const { return e_[idx(i, j)]; }
  void set(int i, int j, Complex v);

  Mat3 operator+(const Mat3& o) const;
  Mat3 operator-(const Mat3& o) const;
  Mat3 operator*(const Mat3& o) const;
  Mat3 operator*(Complex s) const;

  Complex trace() const { return e_[0] + e_[4] + e_[8]; }
  Complex det() const;

  double max_abs_entry() const;
  bool is_hermitian(double tol = kHermTol) const;

 private:
  static constexpr std::size_t idx(int i, int j) {
    return static_cast<std::size_t>(3 * i + j);
  }
  void check_finite() const;

  std::array<Complex, 9> e_;
};

Mat3 adjoint(const Mat3& m);

/// max_ij |a_ij - b_ij|
double max_abs_diff(const Mat3& a, const Mat3& b);

enum class SchattenOrder { one, two, inf };

/// Eigenvalues of a Hermitian matrix, descending. The input is symmetrized
/// as (M + M^dagger)/2 before solving; throws NotHermitianError when the
/// entrywise deviation from Hermitian exceeds kHermTol.
///
/// Solver: closed-form trigonometric solution of the characteristic cubic,
/// falling back to cyclic Jacobi sweeps when the cubic's discriminant is
/// within 1e-14 of degenerate (repeated eigenvalues lose accuracy in the
/// closed form).
std::array<double, 3> hermitian_eigenvalues(const Mat3& m);

/// Schatten p-norm for p in {1, 2, inf}. p=2 is the Frobenius norm computed
/// entrywise; p=1 and p=inf go through the singular values, which are the
/// square roots of the eigenvalues of M^dagger M (clamped at zero).
double schatten_norm(const Mat3& m, SchattenOrder p);

/// Singular values, descending.
std::array<double, 3> singular_values(const Mat3& m);

}  // namespace qsync
