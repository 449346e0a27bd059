#include "qsync/sync_search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qsync {

namespace {

constexpr std::uint64_t kNoHit = std::numeric_limits<std::uint64_t>::max();

using ProbeImages = std::array<DensityMatrix, 9>;

ProbeImages step_probes(const ChannelPair& ch, const ProbeImages& in,
                        Letter l) {
  const KrausChannel& k = ch.letter(l);
  return {apply(k, in[0]), apply(k, in[1]), apply(k, in[2]),
          apply(k, in[3]), apply(k, in[4]), apply(k, in[5]),
          apply(k, in[6]), apply(k, in[7]), apply(k, in[8])};
}

bool images_coincide(const ProbeImages& im, double tol) {
  for (int i = 0; i < 9; ++i)
    for (int j = i + 1; j < 9; ++j)
      if (trace_distance(im[i], im[j]) > tol) return false;
  return true;
}

// First synchronizing leaf index (big-endian letter bits) in the subtree of
// height `remaining` below `images`, or kNoHit. Descends A before B, so the
// first hit is the lexicographically least. Interior prefixes need no
// re-check here: a synchronizing proper prefix would already have been
// returned at its own (shorter) level.
std::uint64_t first_sync_leaf(const ChannelPair& ch, const ProbeImages& images,
                              int remaining, double tol) {
  if (remaining == 0) return images_coincide(images, tol) ? 0 : kNoHit;
  for (int bit = 0; bit < 2; ++bit) {
    const ProbeImages next =
        step_probes(ch, images, bit ? Letter::B : Letter::A);
    const std::uint64_t sub = first_sync_leaf(ch, next, remaining - 1, tol);
    if (sub != kNoHit) {
      return (static_cast<std::uint64_t>(bit) << (remaining - 1)) | sub;
    }
  }
  return kNoHit;
}

std::uint64_t scan_level_serial(const ChannelPair& ch,
                                const ProbeImages& probes, int length,
                                double tol) {
  return first_sync_leaf(ch, probes, length, tol);
}

std::uint64_t scan_level_parallel(const ChannelPair& ch,
                                  const ProbeImages& probes, int length,
                                  double tol) {
  // Keep subtree height >= 10 so rebuilding a task's prefix images is
  // amortized over >= 1024 leaves; short levels collapse to one task.
  const int split = std::clamp(length - 10, 0, 12);
  const std::int64_t num_prefixes = std::int64_t{1} << split;
  std::atomic<std::uint64_t> best{kNoHit};
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t pi = 0; pi < num_prefixes; ++pi) {
    const std::uint64_t subtree_base = static_cast<std::uint64_t>(pi)
                                       << (length - split);
    if (subtree_base >= best.load(std::memory_order_relaxed)) continue;
    ProbeImages images = probes;
    for (int i = 0; i < split; ++i) {
      const bool b = (pi >> (split - 1 - i)) & 1;
      images = step_probes(ch, images, b ? Letter::B : Letter::A);
    }
    const std::uint64_t sub = first_sync_leaf(ch, images, length - split, tol);
    if (sub != kNoHit) {
      const std::uint64_t idx = subtree_base | sub;
      std::uint64_t cur = best.load(std::memory_order_relaxed);
      while (idx < cur && !best.compare_exchange_weak(cur, idx)) {
      }
    }
  }
  return best.load();
}

void check_tol(double tol) {
  if (!(tol > 0.0) || tol > 0.1) {
    throw std::invalid_argument("tol must be in (0, 0.1]");
  }
}

}  // namespace

double TheoremParams::theta() const {
  return std::numbers::pi / (2.0 * static_cast<double>(n));
}

double image_diameter(const Word& w, ChannelFamilyParam param,
                      std::span<const DensityMatrix> states) {
  if (states.empty()) {
    throw EmptyStateSetError("image_diameter: no states given");
  }
  std::vector<DensityMatrix> images;
  images.reserve(states.size());
  for (const DensityMatrix& s : states) images.push_back(apply_word(w, s, param));
  double diam = 0.0;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (std::size_t j = i + 1; j < images.size(); ++j)
      diam = std::max(diam, trace_distance(images[i], images[j]));
  return diam;
}

SyncVerdict is_synchronizing(const Word& w, ChannelFamilyParam param,
                             double tol) {
  check_tol(tol);
  const auto probes = affine_probe_states();
  const double diam = image_diameter(w, param, probes);
  SyncVerdict v{diam <= tol, diam, std::nullopt, w};
  if (v.synchronizing) {
    v.common_image = apply_word(w, probes[0], param);
  }
  return v;
}

SearchResult minimal_sync_word(ChannelFamilyParam param, int max_len,
                               double tol, Exec exec) {
  if (max_len < 1 || max_len > 24) {
    throw std::invalid_argument("minimal_sync_word: max_len must be in [1,24]");
  }
  check_tol(tol);
  const ChannelPair ch(param);
  const ProbeImages probes = affine_probe_states();
  for (int length = 1; length <= max_len; ++length) {
    const std::uint64_t hit =
        exec == Exec::serial ? scan_level_serial(ch, probes, length, tol)
                             : scan_level_parallel(ch, probes, length, tol);
    if (hit != kNoHit) {
      SearchResult r;
      r.word = Word::from_index(static_cast<std::size_t>(length), hit);
      // Sequential enumeration position: all shorter words plus the words of
      // this length up to and including the witness.
      r.words_checked = ((std::uint64_t{1} << length) - 2) + hit + 1;
      return r;
    }
  }
  SearchResult r;
  r.words_checked = (std::uint64_t{1} << (max_len + 1)) - 2;
  return r;
}

TheoremParams n_for_no_sync_up_to(int l, double epsilon) {
  if (l < 1) throw std::invalid_argument("n_for_no_sync_up_to: l must be >= 1");
  if (!(epsilon > 0.0) || epsilon >= 0.5) {
    throw EpsilonOutOfRangeError("epsilon must satisfy 0 < epsilon < 1/2, got " +
                                 std::to_string(epsilon));
  }
  const double epsilon_prime = epsilon / (4.0 * l);
  const double raw = std::numbers::pi / (2.0 * epsilon_prime);
  if (!(raw < 9.0e18)) {
    throw std::invalid_argument(
        "n_for_no_sync_up_to: required n exceeds the integer range");
  }
  auto n = static_cast<long long>(std::ceil(raw));
  while (std::numbers::pi / (2.0 * static_cast<double>(n)) > epsilon_prime) {
    ++n;  // guard against a low ceil from roundoff
  }
  return TheoremParams{l, epsilon, epsilon_prime, n};
}

namespace {

struct PairImages {
  DensityMatrix e2;
  DensityMatrix e3;
};

PairImages step_pair(const ChannelPair& ch, const PairImages& in, Letter l) {
  const KrausChannel& k = ch.letter(l);
  return {apply(k, in.e2), apply(k, in.e3)};
}

// Minimum pair distance over every nonempty word of length <= remaining
// appended below `cur`. Each tree node is visited exactly once.
double min_pair_distance(const ChannelPair& ch, const PairImages& cur,
                         int remaining) {
  double m = std::numeric_limits<double>::infinity();
  if (remaining == 0) return m;
  for (int bit = 0; bit < 2; ++bit) {
    const PairImages child = step_pair(ch, cur, bit ? Letter::B : Letter::A);
    m = std::min(m, trace_distance(child.e2, child.e3));
    m = std::min(m, min_pair_distance(ch, child, remaining - 1));
  }
  return m;
}

// Serial walk of depths 1..split that also records the 2^split prefix states,
// so the parallel phase can take over the deeper subtrees.
double min_pair_distance_to_split(const ChannelPair& ch, const PairImages& cur,
                                  int depth, int split,
                                  std::vector<PairImages>& at_split,
                                  std::uint64_t prefix) {
  if (depth == split) {
    at_split[prefix] = cur;
    return std::numeric_limits<double>::infinity();
  }
  double m = std::numeric_limits<double>::infinity();
  for (int bit = 0; bit < 2; ++bit) {
    const PairImages child = step_pair(ch, cur, bit ? Letter::B : Letter::A);
    m = std::min(m, trace_distance(child.e2, child.e3));
    m = std::min(m, min_pair_distance_to_split(
                        ch, child, depth + 1, split, at_split,
                        (prefix << 1) | static_cast<std::uint64_t>(bit)));
  }
  return m;
}

}  // namespace

NoSyncCertificate no_sync_certificate(long long n, int l, Exec exec) {
  if (n < 1 || n > std::numeric_limits<int>::max()) {
    throw std::invalid_argument("no_sync_certificate: n out of range");
  }
  if (l < 0 || l > 20) {
    throw std::invalid_argument("no_sync_certificate: l must be in [0,20]");
  }
  const ChannelFamilyParam param(static_cast<int>(n));
  const double theta = param.theta();
  const double epsilon = 4.0 * l * theta;

  NoSyncCertificate cert;
  cert.n = n;
  cert.l = l;
  cert.theoretical_floor = 1.0 - 2.0 * epsilon;
  cert.floor_positive = cert.theoretical_floor > 0.0;
  cert.words_checked = (std::uint64_t{1} << (l + 1)) - 2;

  const PairImages root{DensityMatrix::basis_projector(1),
                        DensityMatrix::basis_projector(2)};
  if (l == 0) {
    // No words to map; report the raw pair distance.
    cert.min_observed_distance = trace_distance(root.e2, root.e3);
  } else if (exec == Exec::serial) {
    const ChannelPair ch(param);
    cert.min_observed_distance = min_pair_distance(ch, root, l);
  } else {
    const ChannelPair ch(param);
    const int split = std::clamp(l - 10, 0, 8);
    std::vector<PairImages> at_split(std::size_t{1} << split, root);
    double m = min_pair_distance_to_split(ch, root, 0, split, at_split, 0);
    const auto num_prefixes = static_cast<std::int64_t>(at_split.size());
#pragma omp parallel for schedule(dynamic, 1) reduction(min : m)
    for (std::int64_t pi = 0; pi < num_prefixes; ++pi) {
      m = std::min(
          m, min_pair_distance(ch, at_split[static_cast<std::size_t>(pi)],
                               l - split));
    }
    cert.min_observed_distance = m;
  }

  cert.validates = cert.floor_positive &&
                   cert.min_observed_distance >= cert.theoretical_floor - 1e-9;
  return cert;
}

}  // namespace qsync
