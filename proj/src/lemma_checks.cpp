#include "qsync/lemma_checks.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "qsync/textfmt.hpp"

namespace qsync {

namespace {

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ull;

}  // namespace

std::uint64_t RandomSource::next_u64() {
  ++counter_;
  return mix64(seed_ + counter_ * kGamma);
}

double RandomSource::next_double() {
  // 53 top bits -> [0, 1)
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomSource::next_gaussian() {
  const double u = next_double();
  const double v = next_double();
  const double r = std::sqrt(-2.0 * std::log(1.0 - u));
  return r * std::cos(2.0 * std::numbers::pi * v);
}

Complex RandomSource::next_gaussian_complex() {
  const double re = next_gaussian();
  const double im = next_gaussian();
  return {re, im};
}

Complex RandomSource::next_unit_disc() {
  const double r = std::sqrt(next_double());
  const double phi = 2.0 * std::numbers::pi * next_double();
  return {r * std::cos(phi), r * std::sin(phi)};
}

RandomSource RandomSource::split(std::uint64_t stream) const {
  return RandomSource(mix64(seed_ + 0xbf58476d1ce4e5b9ull * (stream + 1)));
}

DensityMatrix random_density(RandomSource& src) {
  Mat3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g.set(i, j, src.next_gaussian_complex());
  const Mat3 gram = g * adjoint(g);
  const double tr = gram.trace().real();
  return DensityMatrix(gram * Complex(1.0 / tr));
}

KrausChannel random_channel(RandomSource& src, int k) {
  if (k < 1 || k > 9) {
    throw std::invalid_argument("random_channel: k must be in [1, 9]");
  }
  const int rows = 3 * k;
  for (int attempt = 0; attempt < 100; ++attempt) {
    // Columns of the stacked 3k x 3 matrix, drawn block row-major.
    std::vector<std::array<Complex, 3>> m(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < 3; ++c) m[r][c] = src.next_gaussian_complex();

    auto col_dot = [&](int a, int b) {  // <col_a, col_b>
      Complex s = 0;
      for (int r = 0; r < rows; ++r) s += std::conj(m[r][a]) * m[r][b];
      return s;
    };
    // Modified Gram-Schmidt, two passes.
    bool degenerate = false;
    for (int c = 0; c < 3 && !degenerate; ++c) {
      for (int pass = 0; pass < 2; ++pass) {
        for (int p = 0; p < c; ++p) {
          const Complex proj = col_dot(p, c);
          for (int r = 0; r < rows; ++r) m[r][c] -= proj * m[r][p];
        }
      }
      const double norm = std::sqrt(col_dot(c, c).real());
      if (norm < 1e-8) {
        degenerate = true;
        break;
      }
      for (int r = 0; r < rows; ++r) m[r][c] /= norm;
    }
    if (degenerate) continue;

    std::vector<Mat3> factors;
    factors.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
      Mat3 f;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) f.set(r, c, m[3 * i + r][c]);
      factors.push_back(f);
    }
    return KrausChannel(std::move(factors), "random_k" + std::to_string(k));
  }
  throw DegenerateDrawError("random_channel: rank < 3 after 100 draws");
}

namespace {

void add_param(CheckReport& r, const std::string& key, const std::string& v) {
  r.params.emplace_back(key, v);
}

// Runs trial t on substream src.split(t); the callback returns the smallest
// bound-minus-observed margin among the trial's inequalities. Aggregation
// (failure count, min margin) is order-independent, so the parallel path
// reproduces the serial report exactly.
template <typename TrialFn>
void run_trials(CheckReport& report, std::uint64_t trials,
                const RandomSource& src, Exec exec, TrialFn&& trial_fn) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  report.trials = trials;
  report.seed = src.seed();
  double worst = std::numeric_limits<double>::infinity();
  std::uint64_t failures = 0;
  if (exec == Exec::serial) {
    for (std::uint64_t t = 0; t < trials; ++t) {
      RandomSource sub = src.split(t);
      const double margin = trial_fn(sub);
      worst = std::min(worst, margin);
      if (margin < -kCheckSlack) ++failures;
    }
  } else {
    const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for schedule(static) reduction(min : worst) \
    reduction(+ : failures)
    for (std::int64_t t = 0; t < count; ++t) {
      RandomSource sub = src.split(static_cast<std::uint64_t>(t));
      const double margin = trial_fn(sub);
      worst = std::min(worst, margin);
      if (margin < -kCheckSlack) ++failures;
    }
  }
  report.failures = failures;
  report.worst_margin = worst;
}

double rotation_delta(double theta) { return 3.0 * theta + 4.5 * theta * theta; }

}  // namespace

std::string CheckReport::to_json() const {
  std::string out = "{\"check_name\":\"" + json_escape(check_name) + "\"";
  out += ",\"trials\":" + std::to_string(trials);
  out += ",\"failures\":" + std::to_string(failures);
  out += ",\"worst_margin\":" + fmt_double(worst_margin);
  out += ",\"seed\":" + std::to_string(seed);
  out += ",\"params\":{";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i > 0) out += ",";
    out += "\"" + json_escape(params[i].first) + "\":\"" +
           json_escape(params[i].second) + "\"";
  }
  out += "}}";
  return out;
}

CheckReport check_contraction(std::uint64_t trials, const RandomSource& src,
                              Exec exec) {
  CheckReport report;
  report.check_name = "contraction";
  add_param(report, "k_range", "1..3");
  run_trials(report, trials, src, exec, [](RandomSource& sub) {
    const int k = 1 + static_cast<int>(sub.next_u64() % 3);
    const KrausChannel ch = random_channel(sub, k);
    const DensityMatrix rho = random_density(sub);
    const DensityMatrix sigma = random_density(sub);
    const double before = trace_distance(rho, sigma);
    const double after = trace_distance(apply(ch, rho), apply(ch, sigma));
    return before - after;
  });
  return report;
}

CheckReport check_holder(std::uint64_t trials, const RandomSource& src,
                         Exec exec) {
  CheckReport report;
  report.check_name = "holder";
  add_param(report, "entry_distribution", "uniform unit disc");
  run_trials(report, trials, src, exec, [](RandomSource& sub) {
    Mat3 m, n;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        m.set(i, j, sub.next_unit_disc());
        n.set(i, j, sub.next_unit_disc());
      }
    }
    double margin = schatten_norm(m, SchattenOrder::inf) *
                        schatten_norm(n, SchattenOrder::one) -
                    schatten_norm(m * n, SchattenOrder::one);
    for (const Mat3* x : {&m, &n}) {
      const double inf = schatten_norm(*x, SchattenOrder::inf);
      const double fro = schatten_norm(*x, SchattenOrder::two);
      margin = std::min(margin, fro - inf);
      margin = std::min(margin, 3.0 * x->max_abs_entry() - fro);
    }
    return margin;
  });
  return report;
}

CheckReport check_rotation_bounds(int n, std::uint64_t trials,
                                  const RandomSource& src, Exec exec) {
  const ChannelFamilyParam param(n);
  const double theta = param.theta();
  const double delta = rotation_delta(theta);
  const bool four_theta = theta <= 2.0 / 9.0;
  const KrausChannel b = channel_b(param);
  const Mat3& bmat = b.factors()[0];
  const Mat3 e = bmat - Mat3::identity();
  const double entry_margin = theta - e.max_abs_entry();
  const double product_bound = schatten_norm(e, SchattenOrder::inf) *
                               (schatten_norm(bmat, SchattenOrder::inf) + 1.0);

  CheckReport report;
  report.check_name = "rotation_bounds";
  add_param(report, "n", std::to_string(n));
  add_param(report, "theta", fmt_double(theta));
  add_param(report, "delta", fmt_double(delta));
  add_param(report, "four_theta_asserted", four_theta ? "true" : "false");
  add_param(report, "entry_bound_margin", fmt_double(entry_margin));

  run_trials(report, trials, src, exec, [&](RandomSource& sub) {
    const DensityMatrix rho = random_density(sub);
    const DensityMatrix out = apply(b, rho);
    const double dist = trace_distance(rho, out);
    double margin = delta - dist;
    if (four_theta) margin = std::min(margin, 4.0 * theta - dist);
    const double lhs = schatten_norm(out.mat() - rho.mat(), SchattenOrder::one);
    margin = std::min(margin, product_bound - lhs);
    return margin;
  });
  // The entry bound is a single assertion, not a per-trial one; fold it in.
  report.worst_margin = std::min(report.worst_margin, entry_margin);
  if (entry_margin < -kCheckSlack) ++report.failures;
  return report;
}

CheckReport check_power_bound(int n, int s_max, std::uint64_t trials,
                              const RandomSource& src, Exec exec) {
  if (s_max < 0) throw std::invalid_argument("check_power_bound: s_max < 0");
  const ChannelFamilyParam param(n);
  const double theta = param.theta();
  const double delta = rotation_delta(theta);
  const KrausChannel b = channel_b(param);

  CheckReport report;
  report.check_name = "power_bound";
  add_param(report, "n", std::to_string(n));
  add_param(report, "s_max", std::to_string(s_max));
  add_param(report, "delta", fmt_double(delta));
  run_trials(report, trials, src, exec, [&](RandomSource& sub) {
    const DensityMatrix rho0 = random_density(sub);
    DensityMatrix cur = rho0;
    double margin = 0.0;  // s = 0: D(rho, rho) = 0 <= 0
    for (int s = 1; s <= s_max; ++s) {
      cur = apply(b, cur);
      margin = std::min(margin, s * delta - trace_distance(cur, rho0));
    }
    return margin;
  });
  return report;
}

CheckReport check_word_decomposition(int n, const Word& w,
                                     std::uint64_t trials,
                                     const RandomSource& src, Exec exec) {
  if (w.empty()) {
    throw std::invalid_argument("check_word_decomposition: word is empty");
  }
  const ChannelFamilyParam param(n);
  const double theta = param.theta();
  const double delta = rotation_delta(theta);
  const std::size_t sum_a = w.count(Letter::A);
  const std::size_t sum_b = w.count(Letter::B);
  const Word pure_a(std::vector<Letter>(sum_a, Letter::A));

  CheckReport report;
  report.check_name = "word_decomposition";
  add_param(report, "n", std::to_string(n));
  add_param(report, "word", w.str());
  add_param(report, "runs", std::to_string(w.runs().size()));
  add_param(report, "sum_a", std::to_string(sum_a));
  add_param(report, "sum_b", std::to_string(sum_b));
  add_param(report, "delta", fmt_double(delta));
  run_trials(report, trials, src, exec, [&](RandomSource& sub) {
    const DensityMatrix rho = random_density(sub);
    const DensityMatrix lhs = apply_word(w, rho, param);
    const DensityMatrix rhs = apply_word(pure_a, rho, param);
    return delta * static_cast<double>(sum_b) - trace_distance(lhs, rhs);
  });
  return report;
}

CheckReport check_word_decomposition_random(int n, int num_words, int max_len,
                                            std::uint64_t trials_per_word,
                                            const RandomSource& src,
                                            Exec exec) {
  if (num_words < 1 || max_len < 1) {
    throw std::invalid_argument("check_word_decomposition_random: bad sizes");
  }
  CheckReport total;
  total.check_name = "word_decomposition_random";
  total.seed = src.seed();
  total.worst_margin = std::numeric_limits<double>::infinity();
  add_param(total, "n", std::to_string(n));
  add_param(total, "num_words", std::to_string(num_words));
  add_param(total, "max_len", std::to_string(max_len));
  add_param(total, "trials_per_word", std::to_string(trials_per_word));
  for (int i = 0; i < num_words; ++i) {
    RandomSource word_src = src.split(0x776f7264ull + static_cast<std::uint64_t>(i));
    const auto len =
        1 + static_cast<std::size_t>(word_src.next_u64() %
                                     static_cast<std::uint64_t>(max_len));
    std::vector<Letter> ls(len);
    for (auto& l : ls) l = (word_src.next_u64() & 1) ? Letter::B : Letter::A;
    const CheckReport one = check_word_decomposition(n, Word(std::move(ls)),
                                                     trials_per_word, word_src,
                                                     exec);
    total.trials += one.trials;
    total.failures += one.failures;
    total.worst_margin = std::min(total.worst_margin, one.worst_margin);
  }
  return total;
}

}  // namespace qsync
