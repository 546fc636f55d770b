#include <doctest.h>

#include <cmath>
#include <numbers>

#include "anosovlab/errors.hpp"
#include "anosovlab/families.hpp"
#include "anosovlab/limitmap.hpp"
#include "anosovlab/rng.hpp"

using namespace anosov;
using namespace anosov::limitmap;
using anosov::words::parse_word;
using anosov::words::Presentation;
using anosov::words::Word;

namespace {

Eigen::VectorXd unit(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<int>(xs.size()));
  int i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

}  // namespace

TEST_CASE("fubini study distance") {
  const auto e1 = ProjectivePoint::from(unit({1, 0, 0}));
  const auto e2 = ProjectivePoint::from(unit({0, 1, 0}));
  CHECK(fubini_study(e1, e1) == 0.0);
  CHECK(fubini_study(e1, e2) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  const auto diag = ProjectivePoint::from(unit({1, 1, 0}));
  CHECK(fubini_study(e1, diag) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-12));
  // sign convention: representative has first significant coordinate positive
  CHECK(ProjectivePoint::from(unit({-1, 2, 0})).v[0] > 0.0);

  // triangle inequality on random triples (exact metric)
  CounterRng rng(606);
  for (int trial = 0; trial < 10000; ++trial) {
    Eigen::VectorXd a(4), b(4), c(4);
    for (int i = 0; i < 4; ++i) {
      a[i] = rng.next_gaussian();
      b[i] = rng.next_gaussian();
      c[i] = rng.next_gaussian();
    }
    const auto pa = ProjectivePoint::from(a), pb = ProjectivePoint::from(b),
               pc = ProjectivePoint::from(c);
    CHECK(fubini_study(pa, pc) <= fubini_study(pa, pb) + fubini_study(pb, pc) + 1e-12);
  }
}

TEST_CASE("limit point basics") {
  const Presentation p = Presentation::free_group(1);
  matgap::Matrix d(3, 3);
  d << 3, 0, 0, 0, 2, 0, 0, 0, 1;
  matgap::Representation rep(p.alphabet, 3, {{"a", d}});
  const auto pt = limit_point(rep, parse_word(p.alphabet, "a"));
  CHECK(pt.v[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(pt.v[1]) < 1e-12);

  // non-proximal: rotation has |l1| = |l2|
  matgap::Matrix rot(2, 2);
  rot << std::cos(1.0), -std::sin(1.0), std::sin(1.0), std::cos(1.0);
  matgap::Representation rrot(p.alphabet, 2, {{"a", rot}});
  CHECK_THROWS_AS(limit_point(rrot, parse_word(p.alphabet, "a")), NotProximalError);
}

TEST_CASE("limit point eigenvector residual") {
  auto fam = families::fuchsian_octagon();
  const auto reps = families::derived_examples(fam);
  const auto& sym3 = reps[0].rep;
  const auto& a = fam.model.presentation().alphabet;
  for (const char* text : {"a1", "a1 b1", "b2 a1 a2"}) {
    const Word w = parse_word(a, text);
    const matgap::Matrix g = matgap::evaluate(sym3, w).mat;
    const Eigen::VectorXd v = limit_point(sym3, w).v;
    const Eigen::VectorXd gv = g * v;
    const double lambda = v.dot(gv);
    CHECK((gv - lambda * v).norm() / std::fabs(lambda) < 1e-8);
  }
}

TEST_CASE("limit point equivariance under conjugation") {
  auto fam = families::fuchsian_octagon();
  const auto reps = families::derived_examples(fam);
  const auto& sym3 = reps[0].rep;
  const auto res = equivariance_suite(sym3, 1000, 12345);
  CHECK(res.pass);
  CHECK(res.worst < 1e-8);
  CHECK(res.trials > 500);
}

TEST_CASE("limit plane") {
  const Presentation p = Presentation::free_group(1);
  matgap::Matrix d(4, 4);
  d.setZero();
  d.diagonal() << 4, 3, 2, 1;
  matgap::Representation rep(p.alphabet, 4, {{"a", d}});
  const auto q = limit_plane(rep, parse_word(p.alphabet, "a"), 2);
  // span{e1, e2}
  CHECK(std::fabs(q.col(0)[2]) + std::fabs(q.col(0)[3]) < 1e-10);
  CHECK(std::fabs(q.col(1)[2]) + std::fabs(q.col(1)[3]) < 1e-10);
  CHECK((q.transpose() * q - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  // Sym3 of diag(lam, 1/lam): top-2 subspace is the span of weights 3,1
  matgap::Matrix g2(2, 2);
  g2 << 2, 0, 0, 0.5;
  matgap::Representation r2(p.alphabet, 2, {{"a", g2}});
  const auto s3 = matgap::sym_power(r2, 3);
  const auto qs = limit_plane(s3, parse_word(p.alphabet, "a"), 2);
  CHECK(std::fabs(qs.col(0)[2]) + std::fabs(qs.col(0)[3]) < 1e-10);
}

TEST_CASE("limit plane compatibility") {
  auto fam = families::fuchsian_octagon();
  const auto reps = families::derived_examples(fam);
  const auto res = compatibility_suite(reps[0].rep, fam.model, 3);
  CHECK(res.pass);
  CHECK(res.worst < 1e-8);
}

TEST_CASE("dictionary on rho1 agrees with the circle through the double cover") {
  auto fam = families::fuchsian_octagon();
  const auto dict = build_dictionary(fam.rep, fam.model, 4);
  CHECK(dict.samples.size() > 50);
  for (const auto& s : dict.samples) {
    // P(R^2) double-covers the circle: the eigenline of rho1(w) maps to the
    // attracting fixed point; compare through the Mobius fixed-point angle
    const double vx = s.point.v[0], vy = s.point.v[1];
    // line direction (vx, vy) in the upper half-plane boundary chart: the
    // fixed point is x = vx / vy (or infinity); Cayley to the disc circle
    std::complex<double> z;
    if (std::fabs(vy) < 1e-14) {
      z = 1.0;
    } else {
      const std::complex<double> i(0, 1);
      const double x = vx / vy;
      z = (x - i) / (x + i);
    }
    const double angle_diff =
        std::fabs(std::remainder(std::arg(z) - s.boundary.angle, 2 * std::numbers::pi));
    CHECK(angle_diff < 1e-7);
  }
}

TEST_CASE("sym3 dictionary lies on the veronese image of rho1") {
  auto fam = families::fuchsian_octagon();
  const auto reps = families::derived_examples(fam);
  const auto dict1 = build_dictionary(fam.rep, fam.model, 3);
  const auto dict3 = build_dictionary(reps[0].rep, fam.model, 3);
  REQUIRE(dict1.samples.size() == dict3.samples.size());
  for (std::size_t i = 0; i < dict1.samples.size(); ++i) {
    const Eigen::VectorXd& v = dict1.samples[i].point.v;
    Eigen::VectorXd ver(4);  // Sym3 of (x, y): x^3, x^2 y, x y^2, y^3
    ver << v[0] * v[0] * v[0], v[0] * v[0] * v[1], v[0] * v[1] * v[1], v[1] * v[1] * v[1];
    const auto expected = ProjectivePoint::from(ver);
    CHECK(fubini_study(expected, dict3.samples[i].point) < 1e-7);
  }
}

TEST_CASE("spanning ranks of derived examples") {
  auto fam = families::fuchsian_octagon();
  const auto reps = families::derived_examples(fam);
  const auto d1 = build_dictionary(reps[1].rep, fam.model, 3);  // rho1 + trivial
  CHECK(spanning_rank(d1) == 2);
  const auto d3 = build_dictionary(reps[0].rep, fam.model, 3);  // sym3
  CHECK(spanning_rank(d3) == 4);
  // max_len 1 on Free(2) Schottky: four samples
  auto sch = families::schottky(3.0);
  const auto ds = build_dictionary(sch.rep, sch.model, 1);
  CHECK(ds.samples.size() == 4);
}

TEST_CASE("hyperconvexity of sym3 and failure of the reducible example") {
  auto fam = families::fuchsian_octagon();
  const auto reps = families::derived_examples(fam);
  const auto dict = build_dictionary(reps[0].rep, fam.model, 5, /*with_planes=*/true);
  const auto res = hyperconvex_check(dict, fam.model, 300, 0.1, 99);
  CHECK(res.min_abs_det > 1e-6);
  CHECK(res.triples_checked == 300);

  // dsum2 (d = 4): l2/l3 == 1, so no (d-2)-planes exist
  const auto dict2 = build_dictionary(reps[2].rep, fam.model, 4, /*with_planes=*/true);
  CHECK_THROWS_AS(hyperconvex_check(dict2, fam.model, 100, 0.1, 99), InputError);

  // degenerate triples are rejected by min_sep: demand an impossible count
  CHECK_THROWS_AS(hyperconvex_check(dict, fam.model, 1000000000, 0.1, 99), InputError);
}

TEST_CASE("lemma 3.2 margin") {
  // identity: margin = d_P (1 - 2/pi) >= 0
  const Eigen::VectorXd v1 = unit({1, 0, 0, 0});
  const Eigen::VectorXd v2 = unit({0, 1, 0, 0});
  const matgap::Matrix id = matgap::Matrix::Identity(4, 4);
  CHECK(lemma32_margin(id, v1, v2) ==
        doctest::Approx((std::numbers::pi / 2) * (1 - 2 / std::numbers::pi)).epsilon(1e-12));

  matgap::Matrix d(4, 4);
  d.setZero();
  d.diagonal() << 4, 2, 1, 0.5;
  // e1, e2 stay orthogonal; bound is (2/pi)(0.5/16)(pi/2)
  const double margin = lemma32_margin(d, v1, v2);
  CHECK(margin > 0.0);
  CHECK(margin == doctest::Approx(std::numbers::pi / 2 - (2 / std::numbers::pi) *
                                                             (0.5 * 1.0 / 16.0) *
                                                             (std::numbers::pi / 2))
                      .epsilon(1e-10));

  auto r3 = lemma32_suite(3, 20000, 314);
  CHECK(r3.pass);
  auto r4 = lemma32_suite(4, 20000, 314);
  CHECK(r4.pass);
}

TEST_CASE("transversality of sym3 samples") {
  auto fam = families::fuchsian_octagon();
  const auto reps = families::derived_examples(fam);
  const auto res = transversality_suite(reps[0].rep, fam.model, 3, 0.05);
  CHECK(res.pass);
  CHECK(res.trials > 100);
}
