#include <doctest.h>

#include <cmath>

#include "anosovlab/errors.hpp"
#include "anosovlab/families.hpp"
#include "anosovlab/gapscan.hpp"
#include "anosovlab/matgap.hpp"
#include "anosovlab/rng.hpp"

using namespace anosov;
using namespace anosov::matgap;
using anosov::words::Presentation;
using anosov::words::Word;
using anosov::words::parse_word;

namespace {

Representation diag_rep(double lambda) {
  const Presentation p = Presentation::free_group(1);
  Matrix g(2, 2);
  g << lambda, 0, 0, 1.0 / lambda;
  return Representation(p.alphabet, 2, {{"a", g}});
}

}  // namespace

TEST_CASE("evaluate with scaling window") {
  const Presentation p = Presentation::free_group(1);
  Representation rep = diag_rep(2.0);
  const Word empty;
  ScaledMatrix id = evaluate(rep, empty);
  CHECK(id.log_scale == 0.0);
  CHECK((id.mat - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);

  CHECK((evaluate(rep, parse_word(p.alphabet, "a a^-1")).dense() - Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() < 1e-12);

  // a^100 = diag(2^100, 2^-100): top entry recovered from log_scale
  const Word a100 = words::power(p.alphabet, parse_word(p.alphabet, "a"), 100);
  const ScaledMatrix g = evaluate(rep, a100);
  CHECK(g.mat.cwiseAbs().maxCoeff() >= 0.5);
  CHECK(g.mat.cwiseAbs().maxCoeff() <= 2.0);
  CHECK(std::log(g.mat(0, 0)) + g.log_scale == doctest::Approx(100.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(std::log(std::fabs(g.mat(1, 1))) + g.log_scale ==
        doctest::Approx(-100.0 * std::log(2.0)).epsilon(1e-10));
}

TEST_CASE("singular values of small matrices") {
  Matrix d3(2, 2);
  d3 << 3, 0, 0, 1.0 / 3.0;
  auto s = singular_values(ScaledMatrix::from(d3));
  CHECK(s[0] == doctest::Approx(std::log(3.0)).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(-std::log(3.0)).epsilon(1e-12));

  Matrix rot(2, 2);
  const double th = 0.7;
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  s = singular_values(ScaledMatrix::from(rot));
  CHECK(std::fabs(s[0]) < 1e-12);
  CHECK(std::fabs(s[1]) < 1e-12);

  // J1 = [[1,1],[0,1]]: eigenvalues of J1 J1^T are (3 +- sqrt5)/2
  Matrix j1(2, 2);
  j1 << 1, 1, 0, 1;
  s = singular_values(ScaledMatrix::from(j1));
  CHECK(std::exp(s[0]) == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
  CHECK(std::exp(2 * s[0]) == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));
}

TEST_CASE("eigen moduli of small matrices") {
  Matrix d(2, 2);
  d << 2, 0, 0, 0.5;
  auto e = eigen_moduli(ScaledMatrix::from(d));
  CHECK(e[0] == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(e[1] == doctest::Approx(-std::log(2.0)).epsilon(1e-12));

  Matrix j(2, 2);
  j << 1, 0.3, 0, 1;  // unipotent: both moduli 1
  e = eigen_moduli(ScaledMatrix::from(j));
  CHECK(std::fabs(e[0]) < 1e-9);
  CHECK(std::fabs(e[1]) < 1e-9);

  Matrix rot(2, 2);
  rot << std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0);
  e = eigen_moduli(ScaledMatrix::from(rot));
  CHECK(std::fabs(e[0]) < 1e-12);
  CHECK(std::fabs(e[1]) < 1e-12);
}

TEST_CASE("first gaps") {
  const Presentation p = Presentation::free_group(1);
  Matrix g(3, 3);
  g << 4, 0, 0, 0, 2, 0, 0, 0, 1;
  Representation rep(p.alphabet, 3, {{"a", g}});
  auto [sg, eg] = first_gaps(rep, parse_word(p.alphabet, "a"));
  CHECK(sg == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(eg == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  auto [sg0, eg0] = first_gaps(rep, Word{});
  CHECK(sg0 == 0.0);
  CHECK(eg0 == 0.0);
}

TEST_CASE("functors on diagonal matrices") {
  const Presentation p = Presentation::free_group(1);
  const double lam = 1.7;
  Representation rep = diag_rep(lam);

  Representation s3 = sym_power(rep, 3);
  CHECK(s3.degree() == 4);
  const Matrix m = s3.image(0);
  for (int i = 0; i < 4; ++i)
    CHECK(m(i, i) == doctest::Approx(std::pow(lam, 3 - 2 * i)).epsilon(1e-12));

  Matrix d3(3, 3);
  d3 << 2, 0, 0, 0, 3, 0, 0, 0, 5;
  Representation r3(p.alphabet, 3, {{"a", d3}});
  Representation w2 = exterior_square(r3);
  CHECK(w2.degree() == 3);
  const Matrix w = w2.image(0);
  CHECK(w(0, 0) == doctest::Approx(6.0));   // ab
  CHECK(w(1, 1) == doctest::Approx(10.0));  // ac
  CHECK(w(2, 2) == doctest::Approx(15.0));  // bc

  Representation ds = direct_sum_trivial(rep, 1);
  CHECK(ds.degree() == 3);
  auto e = ladder_eigen_moduli(ds, parse_word(p.alphabet, "a"));
  CHECK(e[0] == doctest::Approx(std::log(lam)).epsilon(1e-12));
  CHECK(std::fabs(e[1]) < 1e-12);
  CHECK(e[2] == doctest::Approx(-std::log(lam)).epsilon(1e-12));

  CHECK_THROWS_AS(sym_power(r3, 2), InputError);
}

TEST_CASE("representation inverse consistency is checked") {
  const Presentation p = Presentation::free_group(1);
  Matrix bad(2, 2);
  bad << 1, 1, 1, 1;  // singular
  CHECK_THROWS(Representation(p.alphabet, 2, {{"a", bad}}));
}

TEST_CASE("ladder matches direct decompositions on short words") {
  auto fam = families::fuchsian_octagon();
  const auto reps = families::derived_examples(fam);
  const auto& sym3 = reps[0].rep;
  const auto& alphabet = fam.model.presentation().alphabet;
  for (const char* text : {"a1", "a1 b1", "a2 b1^-1 a1", "b2 b2 a1^-1"}) {
    const Word w = parse_word(alphabet, text);
    const ScaledMatrix g = evaluate(sym3, w);
    const auto direct_s = singular_values(g);
    const auto ladder_s = ladder_singular_values(sym3, w);
    const auto direct_e = eigen_moduli(g);
    const auto ladder_e = ladder_eigen_moduli(sym3, w);
    for (int i = 0; i < 4; ++i) {
      CHECK(ladder_s[i] == doctest::Approx(direct_s[i]).epsilon(1e-9));
      CHECK(ladder_e[i] == doctest::Approx(direct_e[i]).epsilon(1e-8));
    }
  }
}

TEST_CASE("exterior square identity log s1(^2 g) = log s1 + log s2") {
  auto fam = families::fuchsian_octagon();
  const auto& alphabet = fam.model.presentation().alphabet;
  const auto reps = families::derived_examples(fam);
  const auto& sym3 = reps[0].rep;
  Representation w2 = exterior_square(sym3);
  for (const char* text : {"a1", "b2 a1", "a1 b1 a2^-1"}) {
    const Word w = parse_word(alphabet, text);
    const auto s = singular_values(evaluate(sym3, w));
    const auto s2 = singular_values(evaluate(w2, w));
    CHECK(s2[0] == doctest::Approx(s[0] + s[1]).epsilon(1e-8));
  }
}

TEST_CASE("det consistency and homogeneity") {
  auto fam = families::fuchsian_octagon();
  const auto& alphabet = fam.model.presentation().alphabet;
  const auto reps = families::derived_examples(fam);
  const auto& sym3 = reps[0].rep;

  // sum log sigma = log |det| = 0 on a long word (ladder path)
  Word w;
  CounterRng rng(4242);
  while (w.length() < 30) {
    const auto l = static_cast<words::Letter>(rng.next_below(alphabet.size()));
    if (!w.letters.empty() && w.letters.back() == alphabet.inv(l)) continue;
    w.letters.push_back(l);
  }
  const auto s = ladder_singular_values(sym3, w);
  const auto e = ladder_eigen_moduli(sym3, w);
  double sum_s = 0, sum_e = 0;
  for (double v : s) sum_s += v;
  for (double v : e) sum_e += v;
  CHECK(std::fabs(sum_s) < 1e-7);
  CHECK(std::fabs(sum_e) < 1e-7);

  // log-domain homogeneity of eigen moduli under powers
  const Word base = parse_word(alphabet, "a1 b2");
  const auto e1 = ladder_eigen_moduli(sym3, base);
  for (int n = 2; n <= 6; ++n) {
    const auto en = ladder_eigen_moduli(sym3, words::power(alphabet, base, n));
    for (int i = 0; i < 4; ++i) CHECK(std::fabs(en[i] - n * e1[i]) < 1e-7 * n);
  }
}

TEST_CASE("scale invariance of gaps") {
  auto fam = families::fuchsian_octagon();
  const auto& alphabet = fam.model.presentation().alphabet;
  const auto reps = families::derived_examples(fam);
  const Representation& sym3 = reps[0].rep;
  const Representation scaled = sym3.scaled(3.7);
  for (const char* text : {"a1", "a1 b1 a2", "b2^-1 a1 a1"}) {
    const Word w = parse_word(alphabet, text);
    auto [sg1, eg1] = first_gaps(sym3, w);
    auto [sg2, eg2] = first_gaps(scaled, w);
    CHECK(std::fabs(sg1 - sg2) < 1e-10);
    CHECK(std::fabs(eg1 - eg2) < 1e-10);
  }
}

TEST_CASE("sigma_1 submultiplicativity on sampled pairs") {
  auto fam = families::fuchsian_octagon();
  const auto& alphabet = fam.model.presentation().alphabet;
  CounterRng rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    Word u, v;
    while (u.length() < 4) {
      const auto l = static_cast<words::Letter>(rng.next_below(alphabet.size()));
      if (!u.letters.empty() && u.letters.back() == alphabet.inv(l)) continue;
      u.letters.push_back(l);
    }
    while (v.length() < 4) {
      const auto l = static_cast<words::Letter>(rng.next_below(alphabet.size()));
      if (!v.letters.empty() && v.letters.back() == alphabet.inv(l)) continue;
      v.letters.push_back(l);
    }
    const auto su = ladder_singular_values(fam.rep, u);
    const auto sv = ladder_singular_values(fam.rep, v);
    const auto suv = ladder_singular_values(fam.rep, words::concat(alphabet, u, v));
    CHECK(suv[0] <= su[0] + sv[0] + 1e-9);
  }
}

TEST_CASE("ams witness") {
  auto fam = families::fuchsian_octagon();
  const auto& alphabet = fam.model.presentation().alphabet;

  // trivial word: the empty witness is exact
  auto best = ams_witness(fam.rep, fam.model, Word{}, 2);
  CHECK(best.f.empty());
  CHECK(best.discrepancy < 1e-9);

  // long conjugate: discrepancy at f = e is ~ 2|u|, the search improves it
  const Word u = parse_word(alphabet, "a1 a1 a1");
  const Word v = parse_word(alphabet, "b1");
  const Word w = words::concat(alphabet, words::concat(alphabet, u, v),
                               words::inverse(alphabet, u));
  auto only_trivial = ams_witness(fam.rep, fam.model, w, 0);
  auto searched = ams_witness(fam.rep, fam.model, w, 2);
  CHECK(only_trivial.discrepancy > 5.0);
  CHECK(searched.discrepancy < only_trivial.discrepancy);
}

TEST_CASE("anosov gap scan on rho1") {
  auto fam = families::fuchsian_octagon();
  auto res = anosov_gap_scan(fam.rep, fam.model, 1, 4);
  // log s1/s2 = 2 log s1 = |gamma|_X exactly for rho1 at basepoint i
  CHECK(res.epsilon == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::fabs(res.R) < 1e-9);
  CHECK(res.anosov_flag);
}
