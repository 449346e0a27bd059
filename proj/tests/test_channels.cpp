#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "qsync/channels.hpp"
#include "qsync/lemma_checks.hpp"

using namespace qsync;

namespace {

DensityMatrix proj(int i) { return DensityMatrix::basis_projector(i); }

double dist_to(const DensityMatrix& rho, const Mat3& target) {
  return max_abs_diff(rho.mat(), target);
}

}  // namespace

TEST_CASE("word parsing and run decomposition") {
  const Word w = Word::parse("aBba");
  CHECK(w.str() == "ABBA");
  CHECK(w.size() == 4);
  CHECK(w.count(Letter::A) == 2);
  CHECK(w.count(Letter::B) == 2);
  const auto runs = w.runs();
  REQUIRE(runs.size() == 3);
  CHECK(runs[0].letter == Letter::A);
  CHECK(runs[0].count == 1);
  CHECK(runs[1].letter == Letter::B);
  CHECK(runs[1].count == 2);
  CHECK(runs[2].letter == Letter::A);
  CHECK(runs[2].count == 1);

  CHECK(Word::parse("").empty());
  CHECK_THROWS_AS(Word::parse("ABC"), std::invalid_argument);

  CHECK(Word::from_index(3, 0b010).str() == "ABA");
  CHECK(Word::from_index(2, 3).str() == "BB");
  CHECK((Word::parse("AB") + Word::parse("BA")).str() == "ABBA");
}

TEST_CASE("channel A has the fixed pair of integer factors") {
  const KrausChannel a = channel_a();
  REQUIRE(a.factors().size() == 2);
  CHECK(a.completeness_defect() <= 1e-15);
  CHECK(a.label() == "A");

  // The 1-cycle e1 -> e2 and the swap-like action on e2, e3.
  CHECK(dist_to(apply(a, proj(0)), proj(1).mat()) <= 1e-15);
  CHECK(dist_to(apply(a, proj(1)), proj(2).mat()) <= 1e-15);
  CHECK(dist_to(apply(a, proj(2)), proj(1).mat()) <= 1e-15);
}

TEST_CASE("channel B_n") {
  const KrausChannel b1 = channel_b(ChannelFamilyParam(1));
  REQUIRE(b1.factors().size() == 1);
  CHECK(b1.label() == "B_1");
  const Mat3 expected = Mat3::from_real({{{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}});
  CHECK(max_abs_diff(b1.factors()[0], expected) <= 1e-15);

  // B_n^n is the n = 1 factor for every n (a quarter turn).
  for (int n = 1; n <= 12; ++n) {
    const Mat3 bn = channel_b(ChannelFamilyParam(n)).factors()[0];
    Mat3 pow = Mat3::identity();
    for (int i = 0; i < n; ++i) pow = pow * bn;
    CHECK(max_abs_diff(pow, expected) <= 1e-13);
  }

  // e3 is fixed by the block structure.
  for (int n : {1, 2, 5, 64}) {
    const KrausChannel b = channel_b(ChannelFamilyParam(n));
    CHECK(dist_to(apply(b, proj(2)), proj(2).mat()) <= 1e-15);
    CHECK(b.completeness_defect() <= 1e-12);
  }

  CHECK_THROWS_AS(ChannelFamilyParam(0), std::invalid_argument);
  CHECK(ChannelFamilyParam(2).theta() ==
        doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-15));
}

TEST_CASE("density matrix invariants enforced") {
  CHECK_THROWS_AS(DensityMatrix(Mat3::identity()), std::invalid_argument);

  Mat3 not_herm;
  not_herm.set(0, 0, Complex(1));
  not_herm.set(0, 1, Complex(0.5));
  CHECK_THROWS_AS(DensityMatrix{not_herm}, std::invalid_argument);

  // Hermitian, trace one, but indefinite.
  Mat3 indef;
  indef.set(0, 0, Complex(2));
  indef.set(1, 1, Complex(-1));
  CHECK_THROWS_AS(DensityMatrix{indef}, std::invalid_argument);
}

TEST_CASE("apply rejects incomplete channels") {
  const KrausChannel half(std::vector<Mat3>{Mat3::identity() * Complex(0.5)},
                          "half");
  CHECK(half.completeness_defect() == doctest::Approx(0.75).epsilon(1e-14));
  CHECK_FALSE(half.is_complete());
  CHECK_THROWS_AS(apply(half, proj(0)), InvalidChannelError);
}

TEST_CASE("kraus factor count is bounded") {
  CHECK_THROWS_AS(KrausChannel({}, "empty"), std::invalid_argument);
  const std::vector<Mat3> ten(10, Mat3::identity());
  CHECK_THROWS_AS(KrausChannel(ten, "ten"), std::invalid_argument);
  CHECK_NOTHROW(KrausChannel(std::vector<Mat3>(9, Mat3()), "nine"));
}

TEST_CASE("long words stay numerically clean") {
  // 64 letters: trace drift and Hermiticity stay far inside the construction
  // tolerances, so no masking renormalization is needed.
  RandomSource src(64064);
  const ChannelFamilyParam param(7);
  for (int t = 0; t < 10; ++t) {
    std::vector<Letter> ls(64);
    for (auto& l : ls) l = (src.next_u64() & 1) ? Letter::B : Letter::A;
    const DensityMatrix out = apply_word(Word(std::move(ls)), random_density(src), param);
    CHECK(std::abs(out.mat().trace().real() - 1.0) <= 1e-12);
    CHECK(out.mat().is_hermitian(1e-14));
  }
}

TEST_CASE("B_2 maps e1 to the uniform plus state") {
  const DensityMatrix out = apply(channel_b(ChannelFamilyParam(2)), proj(0));
  const Mat3 expected =
      Mat3::from_real({{{0.5, 0.5, 0}, {0.5, 0.5, 0}, {0, 0, 0}}});
  CHECK(max_abs_diff(out.mat(), expected) <= 1e-15);

  // And A sends that state to diag(0, 1, 1)/2.
  const DensityMatrix next = apply(channel_a(), out);
  const Mat3 expected2 = Mat3::from_real({{{0, 0, 0}, {0, 0.5, 0}, {0, 0, 0.5}}});
  CHECK(max_abs_diff(next.mat(), expected2) <= 1e-15);
}

TEST_CASE("apply_word folds left to right") {
  const ChannelFamilyParam n1(1);
  // ABA maps e1 via e2, e1 back to e2.
  const DensityMatrix out = apply_word(Word::parse("ABA"), proj(0), n1);
  CHECK(dist_to(out, proj(1).mat()) <= 1e-14);

  // Empty word is the identity.
  RandomSource src(3);
  const DensityMatrix rho = random_density(src);
  CHECK(max_abs_diff(apply_word(Word(), rho, n1).mat(), rho.mat()) == 0.0);

  // AA fixes e2 (A swaps e2 and e3).
  CHECK(dist_to(apply_word(Word::parse("AA"), proj(1), n1), proj(1).mat()) <=
        1e-14);

  // Composition: applying u then v equals applying uv.
  RandomSource wsrc(17);
  for (int t = 0; t < 20; ++t) {
    const auto len_u = 1 + wsrc.next_u64() % 5;
    const auto len_v = 1 + wsrc.next_u64() % 5;
    std::vector<Letter> u, v;
    for (std::uint64_t i = 0; i < len_u; ++i)
      u.push_back((wsrc.next_u64() & 1) ? Letter::B : Letter::A);
    for (std::uint64_t i = 0; i < len_v; ++i)
      v.push_back((wsrc.next_u64() & 1) ? Letter::B : Letter::A);
    const DensityMatrix r = random_density(wsrc);
    const ChannelFamilyParam n3(3);
    const DensityMatrix lhs = apply_word(Word(u) + Word(v), r, n3);
    const DensityMatrix rhs = apply_word(Word(v), apply_word(Word(u), r, n3), n3);
    CHECK(max_abs_diff(lhs.mat(), rhs.mat()) <= 1e-12);
  }
}

TEST_CASE("trace distance") {
  CHECK(trace_distance(proj(1), proj(2)) == 1.0);
  CHECK(trace_distance(proj(1), proj(1)) == 0.0);

  // Diagonal mixture: eigenvalues of the difference are +-1/2 and 0.
  Mat3 half_mix;
  half_mix.set(0, 0, Complex(0.5));
  half_mix.set(1, 1, Complex(0.5));
  CHECK(trace_distance(proj(0), DensityMatrix(half_mix)) ==
        doctest::Approx(0.5).epsilon(1e-14));

  RandomSource src(8);
  for (int t = 0; t < 50; ++t) {
    const DensityMatrix rho = random_density(src);
    const DensityMatrix sigma = random_density(src);
    const double d = trace_distance(rho, sigma);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0 + 1e-12);
    // Negating the difference takes a different closed-form path; symmetric
    // up to roundoff, not bitwise.
    CHECK(std::abs(d - trace_distance(sigma, rho)) <= 1e-13);
  }
}

TEST_CASE("trace preservation and cleanup bounds") {
  RandomSource src(21);
  for (int t = 0; t < 100; ++t) {
    const DensityMatrix rho = random_density(src);
    const KrausChannel ch = random_channel(src, 1 + static_cast<int>(src.next_u64() % 3));
    const DensityMatrix out = apply(ch, rho);
    CHECK(std::abs(out.mat().trace().real() - 1.0) <= 1e-12);
  }
}

TEST_CASE("unitary letters preserve trace distance") {
  RandomSource src(31);
  for (int n : {1, 2, 8}) {
    const KrausChannel b = channel_b(ChannelFamilyParam(n));
    for (int t = 0; t < 30; ++t) {
      const DensityMatrix rho = random_density(src);
      const DensityMatrix sigma = random_density(src);
      const double before = trace_distance(rho, sigma);
      const double after = trace_distance(apply(b, rho), apply(b, sigma));
      CHECK(std::abs(before - after) <= 1e-10);
    }
  }
}

TEST_CASE("channel contraction property") {
  RandomSource src(55);
  for (int t = 0; t < 200; ++t) {
    const KrausChannel ch = random_channel(src, 1 + static_cast<int>(src.next_u64() % 3));
    const DensityMatrix rho = random_density(src);
    const DensityMatrix sigma = random_density(src);
    CHECK(trace_distance(apply(ch, rho), apply(ch, sigma)) <=
          trace_distance(rho, sigma) + 1e-10);
  }
}

TEST_CASE("probe states: contents and affine span") {
  const auto probes = affine_probe_states();
  CHECK(probes.size() == 9);
  CHECK(max_abs_diff(probes[0].mat(), proj(0).mat()) == 0.0);
  CHECK(max_abs_diff(probes[1].mat(), proj(1).mat()) == 0.0);
  CHECK(max_abs_diff(probes[2].mat(), proj(2).mat()) == 0.0);

  // Solve the 9x9 real system sum_k c_k pi_k = I/3 by Gaussian elimination
  // over the Hermitian coordinates (3 diagonal, 3 real off-diagonal, 3
  // imaginary off-diagonal). The solution must be affine: sum c_k = 1.
  auto coords = [](const Mat3& m) {
    return std::array<double, 9>{
        m(0, 0).real(), m(1, 1).real(), m(2, 2).real(),
        m(0, 1).real(), m(0, 2).real(), m(1, 2).real(),
        m(0, 1).imag(), m(0, 2).imag(), m(1, 2).imag()};
  };
  double aug[9][10];
  for (int k = 0; k < 9; ++k) {
    const auto col = coords(probes[k].mat());
    for (int r = 0; r < 9; ++r) aug[r][k] = col[r];
  }
  const auto target = coords(Mat3::identity() * Complex(1.0 / 3.0));
  for (int r = 0; r < 9; ++r) aug[r][9] = target[r];

  for (int col = 0; col < 9; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 9; ++r)
      if (std::abs(aug[r][col]) > std::abs(aug[pivot][col])) pivot = r;
    REQUIRE(std::abs(aug[pivot][col]) > 1e-12);  // the probes span
    for (int c = 0; c <= 9; ++c) std::swap(aug[col][c], aug[pivot][c]);
    for (int r = 0; r < 9; ++r) {
      if (r == col) continue;
      const double f = aug[r][col] / aug[col][col];
      for (int c = col; c <= 9; ++c) aug[r][c] -= f * aug[col][c];
    }
  }
  double coeff_sum = 0.0;
  Mat3 recombined;
  for (int k = 0; k < 9; ++k) {
    const double ck = aug[k][9] / aug[k][k];
    coeff_sum += ck;
    recombined = recombined + probes[k].mat() * Complex(ck);
  }
  CHECK(std::abs(coeff_sum - 1.0) <= 1e-10);
  CHECK(max_abs_diff(recombined, Mat3::identity() * Complex(1.0 / 3.0)) <= 1e-10);
}

TEST_CASE("word action is affine over probe combinations") {
  // rho = sum c_k pi_k with sum c_k = 1 implies w(rho) = sum c_k w(pi_k).
  const auto probes = affine_probe_states();
  RandomSource src(77);
  const ChannelFamilyParam param(2);
  for (int t = 0; t < 20; ++t) {
    // Affine coefficients around the barycenter stay PSD for small spread.
    std::array<double, 9> c{};
    double sum = 0.0;
    for (double& x : c) {
      x = 1.0 + 0.2 * (src.next_double() - 0.5);
      sum += x;
    }
    for (double& x : c) x /= sum;

    Mat3 combo;
    for (int k = 0; k < 9; ++k) combo = combo + probes[k].mat() * Complex(c[k]);
    const DensityMatrix rho(combo);

    const auto len = 1 + src.next_u64() % 6;
    std::vector<Letter> ls;
    for (std::uint64_t i = 0; i < len; ++i)
      ls.push_back((src.next_u64() & 1) ? Letter::B : Letter::A);
    const Word w{std::move(ls)};

    Mat3 expected;
    for (int k = 0; k < 9; ++k) {
      expected = expected + apply_word(w, probes[k], param).mat() * Complex(c[k]);
    }
    CHECK(max_abs_diff(apply_word(w, rho, param).mat(), expected) <= 1e-10);
  }
}
