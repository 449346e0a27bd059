#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qsync/mat3.hpp"

namespace qsync {

struct InvalidChannelError : Error {
  explicit InvalidChannelError(const std::string& detail)
      : Error("InvalidChannel", detail) {}
};

/// Two-letter alphabet of the channel family.
enum class Letter : std::uint8_t { A = 0, B = 1 };

inline char to_char(Letter l) { return l == Letter::A ? 'A' : 'B'; }

/// Finite word over {A, B}; letters are applied left-to-right.
struct Word {
  std::vector<Letter> letters;

  Word() = default;
  explicit Word(std::vector<Letter> ls) : letters(std::move(ls)) {}

  /// Parses "ABA" (case-insensitive). Throws std::invalid_argument on any
  /// other character.
  static Word parse(std::string_view text);

  /// Word of `length` whose letters are the big-endian bits of `index`
  /// (A=0, B=1), so ascending index is lexicographic order with A < B.
  static Word from_index(std::size_t length, std::uint64_t index);

  std::string str() const;
  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  std::size_t count(Letter l) const;

  struct Run {
    Letter letter;
    std::size_t count;
  };
  /// Maximal runs of equal letters, in application order.
  std::vector<Run> runs() const;

  friend Word operator+(const Word& u, const Word& v);
  bool operator==(const Word&) const = default;
};

/// The family parameter n >= 1 with rotation angle theta = pi/(2n).
class ChannelFamilyParam {
 public:
  explicit ChannelFamilyParam(int n);
  int n() const { return n_; }
  double theta() const;

 private:
  int n_;
};

/// Hermitian, positive-semidefinite, trace-one 3x3 matrix. All three
/// invariants are checked on construction (trace within 1e-9 of 1,
/// eigenvalues >= -1e-9).
class DensityMatrix {
 public:
  explicit DensityMatrix(const Mat3& m);
  static DensityMatrix basis_projector(int i);  // |e_i><e_i|, i in {0,1,2}
  const Mat3& mat() const { return mat_; }

 private:
  Mat3 mat_;
};

/// Ordered Kraus factors K_i with a display label. Completeness
/// (sum K_i^dagger K_i = I) is measured, not enforced, at construction;
/// apply() rejects channels whose defect exceeds 1e-10.
class KrausChannel {
 public:
  KrausChannel(std::vector<Mat3> factors, std::string label);

  const std::vector<Mat3>& factors() const { return factors_; }
  const std::string& label() const { return label_; }

  /// ||sum K_i^dagger K_i - I||_inf, cached at construction.
  double completeness_defect() const { return defect_; }
  bool is_complete() const { return defect_ <= 1e-10; }

 private:
  std::vector<Mat3> factors_;
  std::string label_;
  double defect_;
};

/// The letter A: two Kraus factors with exact integer entries.
KrausChannel channel_a();

/// The letter B_n: one unitary factor rotating the (1,2) plane by
/// theta = pi/(2n) and fixing the third coordinate.
KrausChannel channel_b(ChannelFamilyParam param);

/// rho -> sum K_i rho K_i^dagger. Throws InvalidChannelError when the
/// channel's completeness defect exceeds 1e-10.
DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho);

/// Left fold of apply over the word's letters (the empty word is identity).
DensityMatrix apply_word(const Word& w, const DensityMatrix& rho,
                         ChannelFamilyParam param);

/// D(rho, sigma) = half the sum of |eigenvalues| of rho - sigma; in [0, 1].
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

/// Nine pure states that affinely span the trace-one Hermitian matrices:
/// the basis projectors, the real superpositions (e_i + e_j)/sqrt(2), and
/// the imaginary superpositions (e_i + i e_j)/sqrt(2), i < j. A word maps
/// every density matrix to one point iff it does so for these nine.
std::array<DensityMatrix, 9> affine_probe_states();

/// Channels A and B_n built once; lets hot loops apply letters without
/// reconstructing factors.
class ChannelPair {
 public:
  explicit ChannelPair(ChannelFamilyParam param)
      : a_(channel_a()), b_(channel_b(param)) {}
  const KrausChannel& letter(Letter l) const {
    return l == Letter::A ? a_ : b_;
  }

 private:
  KrausChannel a_;
  KrausChannel b_;
};

/// Number of trace renormalizations performed by apply() so far (drift above
/// 1e-13 triggers one; larger drift is left for validation to reject).
std::uint64_t apply_cleanup_count();

}  // namespace qsync
