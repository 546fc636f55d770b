#include "anosovlab/limitmap.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "anosovlab/errors.hpp"

namespace anosov::limitmap {

namespace {

constexpr double kProximalLogGap = 9.9999995000e-07;  // log(1 + 1e-6)

}  // namespace

ProjectivePoint ProjectivePoint::from(const Eigen::VectorXd& raw) {
  const double n = raw.norm();
  if (!(n > 0.0) || !raw.allFinite()) throw NumericError("projective point: bad vector");
  Eigen::VectorXd v = raw / n;
  for (int i = 0; i < v.size(); ++i) {
    if (std::fabs(v[i]) > 1e-12) {
      if (v[i] < 0) v = -v;
      break;
    }
  }
  return ProjectivePoint{std::move(v)};
}

double fubini_study(const ProjectivePoint& p, const ProjectivePoint& q) {
  const double c = std::fabs(p.v.dot(q.v));
  const double s = matgap::wedge2(p.v, q.v).norm();
  return std::atan2(s, c);
}

namespace {

// Top eigenvector by power iteration from the top singular direction, driven
// to a small eigen-residual.  A dense eigensolve can misorder or smear the
// eigenvectors of badly conditioned products, while the power limit is the
// dominant eigvector of the stored matrix itself, which is exactly what the
// equivariance identities reference.
Eigen::VectorXd top_eigenvector(const matgap::Matrix& m) {
  Eigen::JacobiSVD<matgap::Matrix> svd(m, Eigen::ComputeThinU);
  Eigen::VectorXd v = svd.matrixU().col(0);
  double residual = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 600; ++it) {
    Eigen::VectorXd w = m * v;
    const double n = w.norm();
    if (!(n > 0.0)) throw NumericError("limit_point: power iteration collapsed");
    w /= n;
    if (w.dot(v) < 0) w = -w;
    v = w;
    if (it % 8 == 7) {
      const Eigen::VectorXd mv = m * v;
      const double lambda = v.dot(mv);
      residual = (mv - lambda * v).norm() / std::max(1e-300, std::fabs(lambda));
      if (residual < 1e-13) break;
    }
  }
  return v;
}

}  // namespace

ProjectivePoint limit_point(const matgap::Representation& rep, const words::Word& w) {
  matgap::LadderStack ladder(rep, 2);
  ladder.push_word(w);
  if (ladder.eig_gap() < kProximalLogGap)
    throw NotProximalError("limit_point: l1/l2 gap below threshold");
  return ProjectivePoint::from(top_eigenvector(matgap::evaluate(rep, w).mat));
}

Eigen::MatrixXd limit_plane(const matgap::Representation& rep, const words::Word& w, int k) {
  const int d = rep.degree();
  if (k < 1 || k >= d) throw InputError("limit_plane: k out of range");
  const std::vector<double> ells = matgap::ladder_eigen_moduli(rep, w);
  if (ells[k - 1] - ells[k] < kProximalLogGap)
    throw NotProximalError("limit_plane: l_k/l_{k+1} gap below threshold");

  // orthogonal (subspace) iteration from the top-k singular frame, driven to
  // a small invariance residual; converges at rate l_{k+1}/l_k
  const matgap::Matrix m = matgap::evaluate(rep, w).mat;
  Eigen::JacobiSVD<matgap::Matrix> svd(m, Eigen::ComputeThinU);
  Eigen::MatrixXd q = svd.matrixU().leftCols(k);
  const double scale = svd.singularValues()[0];
  for (int it = 0; it < 600; ++it) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(m * q);
    q = qr.householderQ() * Eigen::MatrixXd::Identity(d, k);
    if (it % 8 == 7) {
      const Eigen::MatrixXd mq = m * q;
      const double residual = (mq - q * (q.transpose() * mq)).norm() / scale;
      if (residual < 1e-13) break;
    }
  }
  return q;
}

LimitDictionary build_dictionary(const matgap::Representation& rep,
                                 const models::ModelSpace& model, int max_len,
                                 bool with_planes) {
  LimitDictionary dict;
  dict.degree = rep.degree();
  const int d = rep.degree();
  // angle key -> sample index, for proximity merging on the circle
  std::map<double, int> by_angle;
  std::map<std::vector<words::Letter>, int> by_prefix;
  auto is_duplicate = [&](const models::BoundaryPoint& b) {
    if (b.kind == models::BoundaryPoint::Kind::Circle) {
      auto it = by_angle.lower_bound(b.angle - 1e-10);
      if (it != by_angle.end() && std::fabs(it->first - b.angle) < 1e-10) return true;
      // wraparound
      if (!by_angle.empty()) {
        const double two_pi = 2.0 * std::numbers::pi;
        if (b.angle < 1e-10 && two_pi - by_angle.rbegin()->first + b.angle < 1e-10) return true;
        if (two_pi - b.angle < 1e-10 && by_angle.begin()->first + two_pi - b.angle < 1e-10)
          return true;
      }
      return false;
    }
    return by_prefix.count(b.prefix.letters) > 0;
  };

  matgap::LadderStack gap_ladder(rep, 2, &model.presentation());
  words::enumerate(model.presentation(), max_len, words::EnumMode::CyclicClasses,
                   [&](const words::Word& w) {
                     matgap::LadderStack& ladder = gap_ladder;
                     ladder.reset();
                     ladder.push_word(w);
                     if (ladder.eig_gap() < kProximalLogGap || !model.is_hyperbolic(w)) {
                       ++dict.skipped_non_proximal;
                       return;
                     }
                     models::BoundaryPoint b = model.attracting_point(w);
                     if (is_duplicate(b)) return;
                     LimitSample sample{w, b, limit_point(rep, w), std::nullopt};
                     if (with_planes && d > 2) {
                       try {
                         sample.plane_d_minus_2 = limit_plane(rep, w, d - 2);
                       } catch (const NotProximalError&) {
                       }
                     }
                     if (b.kind == models::BoundaryPoint::Kind::Circle)
                       by_angle.emplace(b.angle, static_cast<int>(dict.samples.size()));
                     else
                       by_prefix.emplace(b.prefix.letters, static_cast<int>(dict.samples.size()));
                     dict.samples.push_back(std::move(sample));
                   });
  return dict;
}

int spanning_rank(const LimitDictionary& dict) {
  if (static_cast<int>(dict.samples.size()) < dict.degree)
    throw InputError("spanning_rank: need at least d samples");
  Eigen::MatrixXd m(dict.degree, dict.samples.size());
  for (std::size_t i = 0; i < dict.samples.size(); ++i) m.col(i) = dict.samples[i].point.v;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const double top = svd.singularValues()[0];
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()[i] > 1e-8 * top) ++rank;
  return rank;
}

HyperconvexResult hyperconvex_check(const LimitDictionary& dict,
                                    const models::ModelSpace& model, long n_triples,
                                    double min_sep, std::uint64_t seed) {
  const int d = dict.degree;
  std::vector<int> with_planes;
  for (std::size_t i = 0; i < dict.samples.size(); ++i)
    if (dict.samples[i].plane_d_minus_2) with_planes.push_back(static_cast<int>(i));
  if (with_planes.size() < 3 || dict.samples.size() < 3)
    throw InputError("hyperconvex_check: no usable (d-2)-planes in the dictionary");

  CounterRng rng(seed, 0x68797063);
  HyperconvexResult out;
  long attempts = 0;
  const long max_attempts = n_triples * 64;
  while (out.triples_checked < n_triples && attempts < max_attempts) {
    ++attempts;
    const int i = static_cast<int>(rng.next_below(dict.samples.size()));
    const int j = static_cast<int>(rng.next_below(dict.samples.size()));
    const int k = with_planes[rng.next_below(with_planes.size())];
    if (i == j || i == k || j == k) continue;
    const auto& si = dict.samples[i];
    const auto& sj = dict.samples[j];
    const auto& sk = dict.samples[k];
    if (model.visual_metric(si.boundary, sj.boundary) < min_sep) continue;
    if (model.visual_metric(si.boundary, sk.boundary) < min_sep) continue;
    if (model.visual_metric(sj.boundary, sk.boundary) < min_sep) continue;
    Eigen::MatrixXd m(d, d);
    m.col(0) = si.point.v;
    m.col(1) = sj.point.v;
    m.rightCols(d - 2) = *sk.plane_d_minus_2;
    const double det = std::fabs(m.determinant());
    ++out.triples_checked;
    if (det < out.min_abs_det) {
      out.min_abs_det = det;
      out.worst_triple = {i, j, k};
    }
  }
  if (out.triples_checked < n_triples)
    throw InputError("hyperconvex_check: not enough separated triples");
  return out;
}

double lemma32_margin(const matgap::Matrix& g, const Eigen::VectorXd& v1,
                      const Eigen::VectorXd& v2) {
  if (v1.norm() == 0.0 || v2.norm() == 0.0) throw InputError("lemma32_margin: zero vector");
  const ProjectivePoint p1 = ProjectivePoint::from(v1);
  const ProjectivePoint p2 = ProjectivePoint::from(v2);
  const ProjectivePoint q1 = ProjectivePoint::from(g * v1);
  const ProjectivePoint q2 = ProjectivePoint::from(g * v2);
  Eigen::JacobiSVD<matgap::Matrix> svd(g);
  const auto& s = svd.singularValues();
  const int d = static_cast<int>(g.rows());
  const double factor = (2.0 / std::numbers::pi) * (s[d - 1] / s[0]) * (s[d - 2] / s[0]);
  return fubini_study(q1, q2) - factor * fubini_study(p1, p2);
}

SuiteResult lemma32_suite(int dim, long trials, std::uint64_t seed) {
  SuiteResult out;
  out.trials = trials;
  out.worst = std::numeric_limits<double>::infinity();
  for (long i = 0; i < trials; ++i) {
    CounterRng rng(seed, 0x6c656d33320000ULL + static_cast<std::uint64_t>(i));
    matgap::Matrix g(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) g(r, c) = rng.next_gaussian();
    Eigen::VectorXd v1(dim), v2(dim);
    for (int r = 0; r < dim; ++r) v1[r] = rng.next_gaussian();
    for (int r = 0; r < dim; ++r) v2[r] = rng.next_gaussian();
    if (v1.norm() < 1e-6 || v2.norm() < 1e-6) continue;
    const double margin = lemma32_margin(g, v1, v2);
    out.worst = std::min(out.worst, margin);
    if (margin < -1e-12) ++out.violations;
  }
  out.pass = out.violations == 0;
  return out;
}

namespace {

words::Word random_reduced_word(const words::Alphabet& a, int len, CounterRng& rng,
                                bool cyclically_reduced) {
  words::Word w;
  while (w.length() < len) {
    const words::Letter l = static_cast<words::Letter>(rng.next_below(a.size()));
    if (!w.letters.empty() && w.letters.back() == a.inv(l)) continue;
    if (cyclically_reduced && w.length() == len - 1 && !w.letters.empty() &&
        a.inv(l) == w.letters.front())
      continue;
    w.letters.push_back(l);
  }
  return w;
}

}  // namespace

SuiteResult equivariance_suite(const matgap::Representation& rep, long trials,
                               std::uint64_t seed) {
  SuiteResult out;
  const auto& a = rep.alphabet();
  for (long i = 0; i < trials; ++i) {
    CounterRng rng(seed, 0x65717576ULL + static_cast<std::uint64_t>(i));
    const words::Word w = random_reduced_word(a, 2 + static_cast<int>(rng.next_below(3)), rng, true);
    const words::Word u = random_reduced_word(a, 1 + static_cast<int>(rng.next_below(3)), rng, false);
    const words::Word conj = words::concat(a, words::concat(a, u, w), words::inverse(a, u));
    ProjectivePoint lhs, rhs;
    try {
      lhs = limit_point(rep, conj);
      rhs = ProjectivePoint::from(matgap::evaluate(rep, u).mat * limit_point(rep, w).v);
    } catch (const NotProximalError&) {
      continue;
    }
    ++out.trials;
    const double res = fubini_study(lhs, rhs);
    out.worst = std::max(out.worst, res);
    if (res >= 1e-8) ++out.violations;
  }
  out.pass = out.violations == 0;
  return out;
}

SuiteResult compatibility_suite(const matgap::Representation& rep,
                                const models::ModelSpace& model, int max_len) {
  SuiteResult out;
  const int d = rep.degree();
  words::enumerate(model.presentation(), max_len, words::EnumMode::CyclicClasses,
                   [&](const words::Word& w) {
                     ProjectivePoint p;
                     try {
                       p = limit_point(rep, w);
                     } catch (const NotProximalError&) {
                       return;
                     }
                     for (int k = 1; k < d; ++k) {
                       Eigen::MatrixXd q;
                       try {
                         q = limit_plane(rep, w, k);
                       } catch (const NotProximalError&) {
                         continue;
                       }
                       ++out.trials;
                       const double res = (p.v - q * (q.transpose() * p.v)).norm();
                       out.worst = std::max(out.worst, res);
                       if (res >= 1e-8) ++out.violations;
                     }
                   });
  out.pass = out.violations == 0;
  return out;
}

SuiteResult transversality_suite(const matgap::Representation& rep,
                                 const models::ModelSpace& model, int max_len,
                                 double min_sep) {
  SuiteResult out;
  const int d = rep.degree();
  LimitDictionary dict = build_dictionary(rep, model, max_len);
  std::vector<Eigen::MatrixXd> hyperplanes(dict.samples.size());
  std::vector<bool> ok(dict.samples.size(), false);
  for (std::size_t i = 0; i < dict.samples.size(); ++i) {
    try {
      hyperplanes[i] = limit_plane(rep, dict.samples[i].word, d - 1);
      ok[i] = true;
    } catch (const NotProximalError&) {
    }
  }
  out.worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < dict.samples.size(); ++i) {
    for (std::size_t j = 0; j < dict.samples.size(); ++j) {
      if (i == j || !ok[j]) continue;
      if (model.visual_metric(dict.samples[i].boundary, dict.samples[j].boundary) < min_sep)
        continue;
      Eigen::MatrixXd m(d, d);
      m.col(0) = dict.samples[i].point.v;
      m.rightCols(d - 1) = hyperplanes[j];
      ++out.trials;
      const double det = std::fabs(m.determinant());
      out.worst = std::min(out.worst, det);
      if (det <= 1e-10) ++out.violations;
    }
  }
  out.pass = out.violations == 0;
  return out;
}

}  // namespace anosov::limitmap
