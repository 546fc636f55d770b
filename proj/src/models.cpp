#include "anosovlab/models.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "anosovlab/errors.hpp"

namespace anosov::models {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kTreeEndPrefixLen = 96;
constexpr double kTraceTol = 1e-9;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0) a += kTwoPi;
  return a;
}

// shorter arc between two angles, in [0, pi]
double angle_distance(double a, double b) {
  double d = std::fabs(wrap_angle(a) - wrap_angle(b));
  return d > std::numbers::pi ? kTwoPi - d : d;
}

int common_prefix(const words::Word& u, const words::Word& v) {
  const int n = std::min(u.length(), v.length());
  for (int i = 0; i < n; ++i)
    if (u.letters[i] != v.letters[i]) return i;
  return n;
}

}  // namespace

BoundaryPoint BoundaryPoint::circle(double angle) {
  return BoundaryPoint{Kind::Circle, wrap_angle(angle), {}};
}

BoundaryPoint BoundaryPoint::tree_end(words::Word prefix) {
  return BoundaryPoint{Kind::TreeEnd, 0.0, std::move(prefix)};
}

ModelSpace::ModelSpace(Kind kind, words::Presentation presentation, double delta,
                       double visual_base)
    : kind_(kind), presentation_(std::move(presentation)), delta_(delta),
      visual_base_(visual_base) {
  if (delta_ < 0) throw InputError("model: delta must be >= 0");
  if (visual_base_ <= 1.0) throw InputError("model: visual base must exceed 1");
}

ModelSpace ModelSpace::fuchsian(words::Presentation presentation,
                                const std::map<std::string, Eigen::Matrix2d>& rho1,
                                double delta, double visual_base) {
  ModelSpace m(Kind::Fuchsian, presentation, delta, visual_base);
  std::map<std::string, matgap::Matrix> images;
  for (const auto& [name, g] : rho1) {
    if (std::fabs(g.determinant() - 1.0) > 1e-10)
      throw InputError("fuchsian model: generator " + name + " is not unimodular");
    images[name] = g;
  }
  m.rho1_.emplace(m.presentation_.alphabet, 2, images);
  // disc-model matrices: conjugate by the Cayley map z -> (z - i)/(z + i)
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix2cd cayley, cayley_inv;
  cayley << 1.0, -i, 1.0, i;
  cayley_inv = cayley.inverse();
  m.disc_.resize(m.presentation_.alphabet.size());
  for (int l = 0; l < m.presentation_.alphabet.size(); ++l) {
    const matgap::Matrix& g = m.rho1_->image(static_cast<words::Letter>(l));
    Eigen::Matrix2cd gc = g.cast<std::complex<double>>();
    Eigen::Matrix2cd d = cayley * gc * cayley_inv;
    d /= std::sqrt(d.determinant());
    // enforce the SU(1,1) form [[a, b], [conj b, conj a]] exactly; products in
    // the (a, b) parametrization then keep it, which the cancellation-free
    // Busemann formula below relies on
    const std::complex<double> alpha = 0.5 * (d(0, 0) + std::conj(d(1, 1)));
    const std::complex<double> beta = 0.5 * (d(0, 1) + std::conj(d(1, 0)));
    d(0, 0) = alpha;
    d(0, 1) = beta;
    d(1, 0) = std::conj(beta);
    d(1, 1) = std::conj(alpha);
    m.disc_[l] = d;
  }
  return m;
}

// product of disc generator matrices in the (alpha, beta) parametrization
ModelSpace::DiscPair ModelSpace::disc_eval(const words::Word& w) const {
  if (kind_ != Kind::Fuchsian) throw InputError("disc_eval: requires the Fuchsian model");
  std::complex<double> alpha = 1.0, beta = 0.0;
  for (words::Letter l : w.letters) {
    const std::complex<double> a2 = disc_[l](0, 0), b2 = disc_[l](0, 1);
    const std::complex<double> na = alpha * a2 + beta * std::conj(b2);
    const std::complex<double> nb = alpha * b2 + beta * std::conj(a2);
    alpha = na;
    beta = nb;
  }
  return {alpha, beta};
}

ModelSpace ModelSpace::tree(words::Presentation presentation, double delta,
                            double visual_base) {
  if (presentation.kind != words::Presentation::Kind::Free)
    throw InputError("tree model requires a free presentation");
  return ModelSpace(Kind::Tree, std::move(presentation), delta, visual_base);
}

const matgap::Representation& ModelSpace::fuchsian_rep() const {
  if (!rho1_) throw InputError("model is not Fuchsian");
  return *rho1_;
}

matgap::ScaledMatrix ModelSpace::eval2(const words::Word& w) const {
  return matgap::evaluate(fuchsian_rep(), w);
}

double ModelSpace::length(const words::Word& w) const {
  if (kind_ == Kind::Tree) return w.length();
  // 2 log sigma_1, exact at basepoint i; sigma_1 of the normalized 2x2 via
  // the Frobenius closed form (sigma_1 sigma_2 = |det|)
  const matgap::ScaledMatrix g = eval2(w);
  const double f2 = g.mat.squaredNorm();
  const double det = std::fabs(g.mat.determinant());
  const double s1sq = 0.5 * (f2 + std::sqrt(std::max(0.0, f2 * f2 - 4.0 * det * det)));
  return 2.0 * (0.5 * std::log(s1sq) + g.log_scale);
}

namespace {

// log of the larger eigenvalue modulus of a unimodular 2x2 given
// log |trace|; requires |trace| > 2
double log_ell1_from_trace(double log_tr) {
  // l1 = (|t| + sqrt(t^2 - 4))/2
  if (log_tr > 40.0) return log_tr;  // sqrt(1 - 4/t^2) == 1 in doubles
  const double t = std::exp(log_tr);
  return std::log(0.5 * (t + std::sqrt(t * t - 4.0)));
}

}  // namespace

bool ModelSpace::is_hyperbolic(const words::Word& w) const {
  if (kind_ == Kind::Tree) return !words::cyclic_reduce(presentation_.alphabet, w).core.empty();
  if (w.empty()) return false;
  const matgap::ScaledMatrix g = eval2(w);
  const double tr = std::fabs(g.mat.trace());
  if (tr <= 0.0) return false;
  return std::log(tr) + g.log_scale > std::log(2.0 + kTraceTol);
}

double ModelSpace::stable_length(const words::Word& w) const {
  if (w.empty()) return 0.0;
  if (kind_ == Kind::Tree)
    return words::cyclic_reduce(presentation_.alphabet, w).core.length();
  const matgap::ScaledMatrix g = eval2(w);
  const double tr = std::fabs(g.mat.trace());
  const double log_tr = tr > 0.0 ? std::log(tr) + g.log_scale
                                 : -std::numeric_limits<double>::infinity();
  if (!(log_tr > std::log(2.0 + kTraceTol)))
    throw NonHyperbolicError("stable_length: element is not hyperbolic");
  return 2.0 * log_ell1_from_trace(log_tr);
}

double ModelSpace::stable_length_or_zero(const words::Word& w) const {
  if (kind_ == Kind::Tree) return stable_length(w);
  if (!is_hyperbolic(w)) return 0.0;
  return stable_length(w);
}

BoundaryPoint ModelSpace::attracting_point(const words::Word& w) const {
  if (kind_ == Kind::Tree) {
    auto [core, conj] = words::cyclic_reduce(presentation_.alphabet, w);
    if (core.empty()) throw NonHyperbolicError("attracting_point: trivial cyclic core");
    words::Word prefix = conj;
    while (prefix.length() < kTreeEndPrefixLen)
      prefix.letters.insert(prefix.letters.end(), core.letters.begin(), core.letters.end());
    prefix.letters.resize(kTreeEndPrefixLen);
    return BoundaryPoint::tree_end(std::move(prefix));
  }
  if (!is_hyperbolic(w)) throw NonHyperbolicError("attracting_point: element not hyperbolic");
  // fixed points of the Mobius action on the real line: c x^2 + (d - a) x - b = 0
  // (coefficients from the normalized matrix; the map is scale invariant)
  const matgap::ScaledMatrix g = eval2(w);
  const double a = g.mat(0, 0), b = g.mat(0, 1), c = g.mat(1, 0), d = g.mat(1, 1);
  const double det = g.mat.determinant();
  double roots[2];
  int n_roots = 0;
  bool has_inf = false;
  if (std::fabs(c) < 1e-300) {
    has_inf = true;
    if (std::fabs(d - a) > 0.0) roots[n_roots++] = b / (d - a);
  } else {
    const double disc = (a + d) * (a + d) - 4.0 * det;
    if (disc <= 0.0) throw NonHyperbolicError("attracting_point: no real axis");
    const double sq = std::sqrt(disc);
    double r1 = ((a - d) + sq) / (2.0 * c);
    double r2 = ((a - d) - sq) / (2.0 * c);
    // refine the smaller root through Vieta (r1 r2 = -b/c) against cancellation
    if (std::fabs(r1) >= std::fabs(r2) && r1 != 0.0) r2 = -b / (c * r1);
    else if (r2 != 0.0) r1 = -b / (c * r2);
    roots[n_roots++] = r1;
    roots[n_roots++] = r2;
  }
  auto deriv_abs = [&](double x) { return std::fabs(det) / ((c * x + d) * (c * x + d)); };
  double x_att = 0.0;
  bool att_inf = false;
  if (has_inf) {
    // derivative at infinity in the chart 1/x is (d/a)^2
    const double dinf = (d * d) / (a * a);
    if (dinf < 1.0) {
      att_inf = true;
    } else {
      if (n_roots == 0) throw NonHyperbolicError("attracting_point: degenerate fixed points");
      x_att = roots[0];
    }
  } else {
    x_att = deriv_abs(roots[0]) < deriv_abs(roots[1]) ? roots[0] : roots[1];
  }
  // Cayley image of the real boundary point
  std::complex<double> z;
  if (att_inf) {
    z = 1.0;
  } else {
    const std::complex<double> i(0.0, 1.0);
    z = (x_att - i) / (x_att + i);
  }
  return BoundaryPoint::circle(std::arg(z));
}

double ModelSpace::gromov_product(const BoundaryPoint& x, const BoundaryPoint& y) const {
  if (kind_ == Kind::Fuchsian) {
    if (x.kind != BoundaryPoint::Kind::Circle || y.kind != BoundaryPoint::Kind::Circle)
      throw InputError("gromov_product: boundary point from a different model");
    const double d = angle_distance(x.angle, y.angle);
    if (d < 1e-15) return std::numeric_limits<double>::infinity();
    return -std::log(std::sin(0.5 * d));
  }
  if (x.kind != BoundaryPoint::Kind::TreeEnd || y.kind != BoundaryPoint::Kind::TreeEnd)
    throw InputError("gromov_product: boundary point from a different model");
  const int p = common_prefix(x.prefix, y.prefix);
  if (p >= std::min(x.prefix.length(), y.prefix.length()))
    return std::numeric_limits<double>::infinity();
  return p;
}

double ModelSpace::visual_metric(const BoundaryPoint& x, const BoundaryPoint& y) const {
  const double g = gromov_product(x, y);
  if (std::isinf(g)) return 0.0;
  return std::exp(-g * std::log(visual_base_));
}

double ModelSpace::log_visual_metric(const BoundaryPoint& x, const BoundaryPoint& y) const {
  return -gromov_product(x, y) * std::log(visual_base_);
}

BoundaryPoint ModelSpace::translate(const words::Word& w, const BoundaryPoint& x) const {
  return translate_with_logderiv(w, x).first;
}

std::pair<BoundaryPoint, double> ModelSpace::translate_with_logderiv(
    const words::Word& w, const BoundaryPoint& x) const {
  if (kind_ != Kind::Fuchsian || x.kind != BoundaryPoint::Kind::Circle)
    throw InputError("translate: requires the Fuchsian model");
  std::complex<double> z = std::polar(1.0, x.angle);
  double log_deriv = 0.0;
  // w = l_1 ... l_n acts as the composition rho(l_1) o ... o rho(l_n)
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    const Eigen::Matrix2cd& m = disc_[*it];
    const std::complex<double> den = m(1, 0) * z + m(1, 1);
    log_deriv += -2.0 * std::log(std::abs(den));
    z = (m(0, 0) * z + m(0, 1)) / den;
    z /= std::abs(z);
  }
  return {BoundaryPoint::circle(std::arg(z)), log_deriv};
}

std::complex<double> ModelSpace::orbit_point(const words::Word& w) const {
  const DiscPair m = disc_eval(w);
  return m.beta / std::conj(m.alpha);
}

double ModelSpace::gromov_product_interior(const BoundaryPoint& x,
                                           std::complex<double> p) const {
  if (kind_ != Kind::Fuchsian || x.kind != BoundaryPoint::Kind::Circle)
    throw InputError("gromov_product_interior: requires the Fuchsian model");
  const double r2 = std::norm(p);
  if (r2 >= 1.0) throw NumericError("gromov_product_interior: point not inside the disc");
  const std::complex<double> xi = std::polar(1.0, x.angle);
  const double dist = std::log((1.0 + std::sqrt(r2)) / (1.0 - std::sqrt(r2)));
  const double log_poisson = std::log(1.0 - r2) - 2.0 * std::log(std::abs(p - xi));
  return 0.5 * (dist + log_poisson);
}

double ModelSpace::product_interior(const BoundaryPoint& x, const DiscPair& m) const {
  // (x . m(0))_{x0} = log(|alpha| + |beta|) - log |beta - xi conj(alpha)|,
  // exact for det = 1; avoids the 1 - |p|^2 cancellation near the boundary
  if (x.kind != BoundaryPoint::Kind::Circle)
    throw InputError("product_interior: boundary point from a different model");
  const std::complex<double> xi = std::polar(1.0, x.angle);
  const double denom = std::abs(m.beta - xi * std::conj(m.alpha));
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return std::log(std::abs(m.alpha) + std::abs(m.beta)) - std::log(denom);
}

double ModelSpace::lemma21_residual(const words::Word& w, const BoundaryPoint& x,
                                    const BoundaryPoint& y) const {
  const BoundaryPoint gx = translate(w, x);
  const BoundaryPoint gy = translate(w, y);
  const double pxy = gromov_product(x, y);
  const double pgxy = gromov_product(gx, gy);
  if (std::isinf(pxy) || std::isinf(pgxy))
    throw InputError("lemma21_residual: degenerate configuration");
  const DiscPair p = disc_eval(words::inverse(presentation_.alphabet, w));
  const double px = product_interior(x, p);
  const double py = product_interior(y, p);
  if (std::isinf(px) || std::isinf(py))
    throw InputError("lemma21_residual: degenerate configuration");
  return std::fabs(pgxy - length(w) - pxy + px + py);
}

double ModelSpace::lemma22_residual(const words::Word& w) const {
  const BoundaryPoint plus = attracting_point(w);
  const DiscPair p = disc_eval(words::inverse(presentation_.alphabet, w));
  const double prod = product_interior(plus, p);
  return std::fabs(2.0 * prod - (length(w) - stable_length(w)));
}

double ModelSpace::disc_distance(std::complex<double> z, std::complex<double> w) {
  const double num = 2.0 * std::norm(z - w);
  const double den = (1.0 - std::norm(z)) * (1.0 - std::norm(w));
  return std::acosh(1.0 + num / den);
}

}  // namespace anosov::models
