#include "anosovlab/families.hpp"

#include <cmath>
#include <numbers>

#include "anosovlab/errors.hpp"
#include "anosovlab/gapscan.hpp"

namespace anosov::families {

namespace {

using Eigen::Matrix2d;

Matrix2d rotation_conjugate(const Matrix2d& m, double half_angle) {
  Matrix2d r;
  r << std::cos(half_angle), std::sin(half_angle), -std::sin(half_angle), std::cos(half_angle);
  return r * m * r.transpose();
}

void check_short_words_hyperbolic(const models::ModelSpace& model, int max_len) {
  words::enumerate(model.presentation(), max_len, words::EnumMode::CyclicClasses,
                   [&](const words::Word& w) {
                     if (!model.is_hyperbolic(w))
                       throw NumericError("family self-check: non-hyperbolic word " +
                                          words::format_word(model.presentation().alphabet, w));
                   });
}

double relator_residual(const matgap::Representation& rep, const words::Word& relator) {
  const matgap::Matrix m = matgap::evaluate(rep, relator).dense();
  return (m - matgap::Matrix::Identity(rep.degree(), rep.degree())).cwiseAbs().maxCoeff();
}

}  // namespace

FuchsianFamily fuchsian_octagon() {
  const double l0_half = std::acosh(1.0 + std::sqrt(2.0));
  Matrix2d axis_translation;
  axis_translation << std::exp(l0_half), 0.0, 0.0, std::exp(-l0_half);
  // side-pairing translations, axes through the basepoint at angles k pi/4
  Matrix2d T[4];
  for (int k = 0; k < 4; ++k)
    T[k] = rotation_conjugate(axis_translation, k * std::numbers::pi / 8.0);
  // the pairings satisfy T0 T3 T2^-1 T1 T0^-1 T3^-1 T2 T1^-1 = I; the change
  // of generators below turns that relation into [a1,b1][a2,b2] = I
  std::map<std::string, matgap::Matrix> gens;
  gens["a1"] = T[0];
  gens["b1"] = T[3];
  gens["a2"] = T[3] * T[0] * T[2].inverse();
  gens["b2"] = T[1] * T[0].inverse() * T[3].inverse();

  words::Presentation p = words::Presentation::surface_genus2();
  std::map<std::string, Matrix2d> model_gens;
  for (const auto& [name, m] : gens) model_gens[name] = m;
  models::ModelSpace model = models::ModelSpace::fuchsian(p, model_gens);
  matgap::Representation rep(p.alphabet, 2, gens);

  const double res = relator_residual(rep, p.relators.at(0));
  if (res >= 1e-8)
    throw NumericError("fuchsian_octagon: relator residual " + std::to_string(res));
  check_short_words_hyperbolic(model, 6);
  return {std::move(rep), std::move(model)};
}

FuchsianFamily schottky(double lambda) {
  if (!(lambda >= 3.0)) throw InputError("schottky: lambda must be >= 3");
  Matrix2d g1, g2;
  g1 << lambda, 0.0, 0.0, 1.0 / lambda;
  const double c = 0.5 * (lambda + 1.0 / lambda), s = 0.5 * (lambda - 1.0 / lambda);
  g2 << c, s, s, c;
  words::Presentation p = words::Presentation::free_group(2);
  std::map<std::string, matgap::Matrix> gens{{"a", g1}, {"b", g2}};
  matgap::Representation rep(p.alphabet, 2, gens);
  models::ModelSpace model = models::ModelSpace::tree(p);
  // ping-pong margin proxy: short cyclic words must already be hyperbolic
  std::map<std::string, Matrix2d> mg{{"a", g1}, {"b", g2}};
  models::ModelSpace h2 = models::ModelSpace::fuchsian(p, mg);
  check_short_words_hyperbolic(h2, 6);
  return {std::move(rep), std::move(model)};
}

matgap::Representation family_st(const FuchsianFamily& fuchsian, const FamilyParams& p) {
  const auto& alphabet = fuchsian.model.presentation().alphabet;
  if (fuchsian.model.presentation().kind != words::Presentation::Kind::SurfaceGenus2)
    throw InputError("family_st: requires the genus-2 Fuchsian family");
  if (std::fabs(p.X.determinant()) < 1e-12) throw InputError("family_st: X must be invertible");
  const auto& rho1 = fuchsian.rep;
  auto r1 = [&](const char* word_text) {
    return matgap::evaluate(rho1, words::parse_word(alphabet, word_text)).dense();
  };
  Matrix2d Jt;
  Jt << 1.0, p.t, 0.0, 1.0;
  const Matrix2d I2 = Matrix2d::Identity();
  const Matrix2d a2_inv_minus_id = Matrix2d(r1("a2^-1")) - I2;
  if (std::fabs(a2_inv_minus_id.determinant()) < 1e-12)
    throw NumericError("family_st: rho1(a2^-1) - I is singular");
  // zero condition for the relator cocycle (the quoted closed form, with the
  // rho1(b1^-1) factor restored on the X term)
  const Matrix2d Xst = p.s *
                       (p.X * Matrix2d(r1("b1^-1")) - Jt * p.X * Matrix2d(r1("a1^-1 b1^-1"))) *
                       Matrix2d(r1("a2 b2 a2^-1")) * a2_inv_minus_id.inverse();

  auto block = [&](const Matrix2d& psi, const Matrix2d& upper, const matgap::Matrix& lower) {
    matgap::Matrix m = matgap::Matrix::Zero(4, 4);
    m.topLeftCorner(2, 2) = psi;
    m.topRightCorner(2, 2) = upper;
    m.bottomRightCorner(2, 2) = lower;
    return m;
  };
  const Matrix2d Z2 = Matrix2d::Zero();
  std::map<std::string, matgap::Matrix> gens;
  gens["a1"] = block(Jt, Z2, r1("a1"));
  gens["a2"] = block(I2, Z2, r1("a2"));
  gens["b1"] = block(I2, p.s * p.X, r1("b1"));
  gens["b2"] = block(I2, Xst, r1("b2"));
  matgap::Representation rep(alphabet, 4, gens);

  const double res =
      relator_residual(rep, fuchsian.model.presentation().relators.at(0));
  if (res >= 1e-9)
    throw NumericError("family_st: relator residual " + std::to_string(res));
  return rep;
}

std::vector<NamedRep> derived_examples(const FuchsianFamily& fuchsian) {
  std::vector<NamedRep> out;
  out.push_back({"sym3", matgap::sym_power(fuchsian.rep, 3), 1.0, 1.0});
  out.push_back({"dsum1", matgap::direct_sum_trivial(fuchsian.rep, 1), 0.5, 0.5});
  out.push_back({"dsum2", matgap::direct_sum_trivial(fuchsian.rep, 2), 0.5, 0.5});
  return out;
}

}  // namespace anosov::families
