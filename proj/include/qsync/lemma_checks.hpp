#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qsync/channels.hpp"
#include "qsync/sync_search.hpp"

namespace qsync {

struct DegenerateDrawError : Error {
  explicit DegenerateDrawError(const std::string& detail)
      : Error("DegenerateDraw", detail) {}
};

/// Counter-based deterministic generator: the k-th output is the SplitMix64
/// finalizer applied to seed + k*gamma, so any position in the stream can be
/// computed directly and substreams split off per trial reproduce the
/// sequential stream regardless of execution order. Gaussians use the
/// Box-Muller transform (one value per draw, no carried state).
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  double next_double();    // uniform [0, 1)
  double next_gaussian();  // standard normal
  Complex next_gaussian_complex();
  Complex next_unit_disc();  // uniform on |z| <= 1

  /// Independent substream for the given index; drawing from the substream
  /// does not advance this source.
  RandomSource split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

/// Outcome of one randomized inequality check. `worst_margin` is the
/// smallest bound-minus-observed value seen (recorded even when all trials
/// pass); a trial fails when some observed value exceeds its bound plus the
/// uniform 1e-10 slack.
struct CheckReport {
  std::string check_name;
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double worst_margin = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> params;

  std::string to_json() const;
};

inline constexpr double kCheckSlack = 1e-10;

/// GG^dagger / tr(GG^dagger) for G with iid standard-normal re/im entries.
DensityMatrix random_density(RandomSource& src);

/// k Kraus factors obtained by stacking k random 3x3 complex blocks into a
/// 3k x 3 matrix and orthonormalizing its columns (modified Gram-Schmidt,
/// two passes); completeness defect <= 1e-12. Throws DegenerateDrawError
/// after 100 rank-deficient draws (practically unreachable).
KrausChannel random_channel(RandomSource& src, int k);

/// D(Phi(rho), Phi(sigma)) <= D(rho, sigma) for random channels with
/// k in {1, 2, 3} factors and random state pairs.
CheckReport check_contraction(std::uint64_t trials, const RandomSource& src,
                              Exec exec = Exec::parallel);

/// ||MN||_1 <= ||M||_inf ||N||_1 and ||X||_inf <= ||X||_F <= 3 max|X_ij|
/// for matrices with entries uniform in the unit disc.
CheckReport check_holder(std::uint64_t trials, const RandomSource& src,
                         Exec exec = Exec::parallel);

/// Entry bound max|{(B_n - I)}_ij| <= theta, the one-step trace-distance
/// bounds D(rho, B rho B^dagger) <= 3*theta + 4.5*theta^2 (and <= 4*theta
/// whenever theta <= 2/9), and the intermediate product bound
/// ||B rho B^dagger - rho||_1 <= ||B - I||_inf (||B||_inf + 1).
CheckReport check_rotation_bounds(int n, std::uint64_t trials,
                                  const RandomSource& src,
                                  Exec exec = Exec::parallel);

/// D(B^s(rho), rho) <= s * delta for s = 0..s_max with the certified
/// one-step bound delta = 3*theta + 4.5*theta^2.
CheckReport check_power_bound(int n, int s_max, std::uint64_t trials,
                              const RandomSource& src,
                              Exec exec = Exec::parallel);

/// With j the total A-count of w and b its total B-count:
/// D(w(rho), A^j(rho)) <= delta * b. Reports the run-length decomposition
/// totals in params.
CheckReport check_word_decomposition(int n, const Word& w,
                                     std::uint64_t trials,
                                     const RandomSource& src,
                                     Exec exec = Exec::parallel);

/// check_word_decomposition over `num_words` random nonempty words of length
/// <= max_len, aggregated into a single report.
CheckReport check_word_decomposition_random(int n, int num_words, int max_len,
                                            std::uint64_t trials_per_word,
                                            const RandomSource& src,
                                            Exec exec = Exec::parallel);

}  // namespace qsync
