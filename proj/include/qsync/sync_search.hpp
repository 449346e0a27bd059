#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "qsync/channels.hpp"

namespace qsync {

struct EmptyStateSetError : Error {
  explicit EmptyStateSetError(const std::string& detail)
      : Error("EmptyStateSet", detail) {}
};

struct EpsilonOutOfRangeError : Error {
  explicit EpsilonOutOfRangeError(const std::string& detail)
      : Error("EpsilonOutOfRange", detail) {}
};

/// Probe-image diameter below which a word counts as synchronizing. Witness
/// words land below 1e-13 numerically; non-synchronizing words at desk scale
/// stay above 1e-2, so the decision is robust.
inline constexpr double kSyncTol = 1e-9;

/// Execution policy for the search and check kernels. Both give bit-identical
/// results; `parallel` distributes disjoint prefix subtrees (or trials)
/// across OpenMP threads and falls back to serial when OpenMP is absent.
enum class Exec { serial, parallel };

struct SyncVerdict {
  bool synchronizing;
  double image_diameter;
  std::optional<DensityMatrix> common_image;  // present iff synchronizing
  Word word;
};

struct TheoremParams {
  int l;                 // max word length ruled out
  double epsilon;        // in (0, 1/2)
  double epsilon_prime;  // epsilon / (4l)
  long long n;           // smallest n with theta(n) <= epsilon_prime
  double theta() const;
};

struct NoSyncCertificate {
  long long n = 0;
  int l = 0;
  double theoretical_floor = 0.0;  // 1 - 2*epsilon with epsilon = 4*l*theta(n)
  double min_observed_distance = 0.0;
  std::uint64_t words_checked = 0;  // 2^(l+1) - 2
  bool floor_positive = false;      // floor <= 0 means report only
  bool validates = false;  // floor_positive && min >= floor - 1e-9
};

struct SearchResult {
  std::optional<Word> word;  // first synchronizing word, (length, lex) order
  std::uint64_t words_checked = 0;  // sequential enumeration position
  std::optional<std::size_t> length() const {
    return word ? std::optional(word->size()) : std::nullopt;
  }
};

/// Max pairwise trace distance between the images of `states` under `w`.
double image_diameter(const Word& w, ChannelFamilyParam param,
                      std::span<const DensityMatrix> states);

/// Diameter over the nine affine probe states; synchronizing when it is at
/// most `tol` (tol in (0, 0.1]). The common image is the image of
/// |e_1><e_1|.
SyncVerdict is_synchronizing(const Word& w, ChannelFamilyParam param,
                             double tol = kSyncTol);

/// Exhaustively enumerates nonempty words in (length, lexicographic A < B)
/// order up to max_len (<= 24) and returns the first synchronizing one.
/// Words are evaluated incrementally down a prefix tree, one channel
/// application per probe per letter; the parallel policy splits the tree at
/// a fixed depth and merges by minimum enumeration index, so the witness and
/// words_checked match serial enumeration exactly.
SearchResult minimal_sync_word(ChannelFamilyParam param, int max_len,
                               double tol = kSyncTol,
                               Exec exec = Exec::parallel);

/// Parameters ruling out synchronizing words of length <= l: epsilon' =
/// epsilon/(4l) and the least n with theta(n) <= epsilon'. Throws
/// EpsilonOutOfRangeError unless 0 < epsilon < 1/2.
TheoremParams n_for_no_sync_up_to(int l, double epsilon);

/// Brute-force certificate: the minimum of D(w(|e_2><e_2|), w(|e_3><e_3|))
/// over all nonempty words of length <= l (<= 20) must stay above the
/// theoretical floor 1 - 8*l*theta(n). A nonpositive floor downgrades the
/// certificate to report-only (floor_positive = false, never validates).
NoSyncCertificate no_sync_certificate(long long n, int l,
                                      Exec exec = Exec::parallel);

}  // namespace qsync
