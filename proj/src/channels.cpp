#include "qsync/channels.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsync {

namespace {

std::atomic<std::uint64_t> g_cleanup_count{0};

}  // namespace

std::uint64_t apply_cleanup_count() {
  return g_cleanup_count.load(std::memory_order_relaxed);
}

Word Word::parse(std::string_view text) {
  std::vector<Letter> ls;
  ls.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case 'A':
      case 'a':
        ls.push_back(Letter::A);
        break;
      case 'B':
      case 'b':
        ls.push_back(Letter::B);
        break;
      default:
        throw std::invalid_argument(std::string("Word: invalid letter '") + c +
                                    "' (alphabet is {A, B})");
    }
  }
  return Word(std::move(ls));
}

Word Word::from_index(std::size_t length, std::uint64_t index) {
  std::vector<Letter> ls(length);
  for (std::size_t i = 0; i < length; ++i) {
    const std::uint64_t bit = (index >> (length - 1 - i)) & 1u;
    ls[i] = bit ? Letter::B : Letter::A;
  }
  return Word(std::move(ls));
}

std::string Word::str() const {
  std::string s;
  s.reserve(letters.size());
  for (Letter l : letters) s.push_back(to_char(l));
  return s;
}

std::size_t Word::count(Letter l) const {
  std::size_t c = 0;
  for (Letter x : letters)
    if (x == l) ++c;
  return c;
}

std::vector<Word::Run> Word::runs() const {
  std::vector<Run> rs;
  for (Letter l : letters) {
    if (!rs.empty() && rs.back().letter == l) {
      ++rs.back().count;
    } else {
      rs.push_back({l, 1});
    }
  }
  return rs;
}

Word operator+(const Word& u, const Word& v) {
  Word w = u;
  w.letters.insert(w.letters.end(), v.letters.begin(), v.letters.end());
  return w;
}

ChannelFamilyParam::ChannelFamilyParam(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("ChannelFamilyParam: n must be >= 1");
}

double ChannelFamilyParam::theta() const {
  return std::numbers::pi / (2.0 * n_);
}

DensityMatrix::DensityMatrix(const Mat3& m) : mat_(m) {
  if (!m.is_hermitian(kHermTol)) {
    throw std::invalid_argument("DensityMatrix: not Hermitian within 1e-9");
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > 1e-9) {
    throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) +
                                " not 1 within 1e-9");
  }
  const auto ev = hermitian_eigenvalues(m);
  if (ev[2] < -1e-9) {
    throw std::invalid_argument("DensityMatrix: eigenvalue " +
                                std::to_string(ev[2]) + " below -1e-9");
  }
}

DensityMatrix DensityMatrix::basis_projector(int i) {
  if (i < 0 || i > 2) {
    throw std::invalid_argument("basis_projector: index out of range");
  }
  Mat3 m;
  m.set(i, i, Complex(1));
  return DensityMatrix(m);
}

KrausChannel::KrausChannel(std::vector<Mat3> factors, std::string label)
    : factors_(std::move(factors)), label_(std::move(label)) {
  if (factors_.empty() || factors_.size() > 9) {
    throw std::invalid_argument("KrausChannel: factor count must be in [1,9]");
  }
  Mat3 sum;
  for (const Mat3& k : factors_) sum = sum + adjoint(k) * k;
  defect_ = schatten_norm(sum - Mat3::identity(), SchattenOrder::inf);
}

KrausChannel channel_a() {
  const Mat3 a1 = Mat3::from_real({{{0, 0, 0}, {1, 0, 0}, {0, 0, 0}}});
  const Mat3 a2 = Mat3::from_real({{{0, 0, 0}, {0, 0, -1}, {0, 1, 0}}});
  return KrausChannel({a1, a2}, "A");
}

KrausChannel channel_b(ChannelFamilyParam param) {
  const double th = param.theta();
  const double c = std::cos(th);
  const double s = std::sin(th);
  const Mat3 b = Mat3::from_real({{{c, -s, 0}, {s, c, 0}, {0, 0, 1}}});
  return KrausChannel({b}, "B_" + std::to_string(param.n()));
}

DensityMatrix apply(const KrausChannel& ch, const DensityMatrix& rho) {
  if (!ch.is_complete()) {
    throw InvalidChannelError("channel '" + ch.label() +
                              "' completeness defect " +
                              std::to_string(ch.completeness_defect()));
  }
  Mat3 out;
  for (const Mat3& k : ch.factors()) out = out + k * rho.mat() * adjoint(k);
  // Cleanup: re-symmetrize, and renormalize only small trace drift. Drift
  // beyond 1e-9 is not masked; DensityMatrix validation rejects it.
  out = (out + adjoint(out)) * Complex(0.5);
  const double tr = out.trace().real();
  const double drift = std::abs(tr - 1.0);
  if (drift > 1e-13 && drift <= 1e-9) {
    out = out * Complex(1.0 / tr);
    g_cleanup_count.fetch_add(1, std::memory_order_relaxed);
  }
  return DensityMatrix(out);
}

DensityMatrix apply_word(const Word& w, const DensityMatrix& rho,
                         ChannelFamilyParam param) {
  const ChannelPair channels(param);
  DensityMatrix state = rho;
  for (Letter l : w.letters) state = apply(channels.letter(l), state);
  return state;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const auto ev = hermitian_eigenvalues(rho.mat() - sigma.mat());
  return 0.5 * (std::abs(ev[0]) + std::abs(ev[1]) + std::abs(ev[2]));
}

std::array<DensityMatrix, 9> affine_probe_states() {
  auto projector = [](const std::array<Complex, 3>& v) {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m.set(i, j, v[i] * std::conj(v[j]));
    return DensityMatrix(m);
  };
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const Complex img(0, 1);

  auto unit = [](int i) {
    std::array<Complex, 3> v{};
    v[i] = Complex(1);
    return v;
  };
  auto real_sup = [&](int i, int j) {
    std::array<Complex, 3> v{};
    v[i] = inv_sqrt2;
    v[j] = inv_sqrt2;
    return v;
  };
  auto imag_sup = [&](int i, int j) {
    std::array<Complex, 3> v{};
    v[i] = inv_sqrt2;
    v[j] = img * inv_sqrt2;
    return v;
  };

  return {projector(unit(0)),        projector(unit(1)),
          projector(unit(2)),        projector(real_sup(0, 1)),
          projector(real_sup(0, 2)), projector(real_sup(1, 2)),
          projector(imag_sup(0, 1)), projector(imag_sup(0, 2)),
          projector(imag_sup(1, 2))};
}

}  // namespace qsync
