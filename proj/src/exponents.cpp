#include "anosovlab/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "anosovlab/errors.hpp"

namespace anosov::exponents {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ExponentReport ratio_scan(const models::ModelSpace& model, int max_len, Direction dir,
                          const std::function<bool(const words::Word&, double&)>& ratio_of) {
  ExponentReport out;
  out.direction = dir;
  const double sign = dir == Direction::Inf ? 1.0 : -1.0;
  // per-length extrema, folded into a monotone curve afterwards
  std::vector<double> best_by_len(max_len + 1, sign * kInf);
  std::vector<words::Word> witness_by_len(max_len + 1);
  words::enumerate(model.presentation(), max_len, words::EnumMode::CyclicClasses,
                   [&](const words::Word& w) {
                     double q;
                     if (!ratio_of(w, q)) {
                       ++out.skipped;
                       return;
                     }
                     ++out.counted;
                     double& best = best_by_len[w.length()];
                     if (sign * q < sign * best) {
                       best = q;
                       witness_by_len[w.length()] = w;
                     }
                   });
  if (out.counted == 0) throw InputError("exponent scan: no valid words");
  double running = sign * kInf;
  for (int len = 1; len <= max_len; ++len) {
    if (sign * best_by_len[len] < sign * running) {
      running = best_by_len[len];
      out.witness = witness_by_len[len];
    }
    if (std::isfinite(running)) out.curve.emplace_back(len, running);
  }
  out.estimate = running;
  return out;
}

}  // namespace

ExponentReport alpha_rho(const matgap::Representation& rep, const models::ModelSpace& model,
                         int max_len) {
  matgap::LadderStack ladder(rep, 2, &model.presentation());
  return ratio_scan(model, max_len, Direction::Inf, [&](const words::Word& w, double& q) {
    if (!model.is_hyperbolic(w)) return false;  // group-trivial class
    const double stable = model.stable_length(w);
    if (stable <= 0.0) return false;
    ladder.reset();
    ladder.push_word(w);
    q = ladder.eig_gap() / stable;
    return true;
  });
}

ExponentReport beta_rho(const matgap::Representation& rep, const models::ModelSpace& model,
                        int max_len) {
  matgap::LadderStack ladder(rep, 2, &model.presentation());
  return ratio_scan(model, max_len, Direction::Sup, [&](const words::Word& w, double& q) {
    if (!model.is_hyperbolic(w)) return false;
    const double stable = model.stable_length(w);
    if (stable <= 0.0) return false;
    ladder.reset();
    ladder.push_word(w);
    q = ladder.eig_gap() / stable;
    return true;
  });
}

ExponentReport conj_exponent(const matgap::Representation& rep1,
                             const matgap::Representation& rep2,
                             const models::ModelSpace& model, int max_len) {
  matgap::LadderStack l1(rep1, 2, &model.presentation());
  matgap::LadderStack l2(rep2, 2, &model.presentation());
  return ratio_scan(model, max_len, Direction::Inf, [&](const words::Word& w, double& q) {
    l1.reset();
    l1.push_word(w);
    l2.reset();
    l2.push_word(w);
    const double g1 = l1.eig_gap(), g2 = l2.eig_gap();
    if (g1 <= 0.0 && g2 <= 0.0) return false;  // trivial in both: skip
    if (g1 <= 0.0)
      throw NumericError("conj_exponent: zero denominator gap at word " +
                         words::format_word(model.presentation().alphabet, w));
    q = g2 / g1;
    return true;
  });
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Bounded: return "Bounded";
    case Verdict::Growing: return "Growing";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

Verdict classify_curve(const std::vector<std::pair<int, double>>& curve) {
  if (curve.size() < 3) return Verdict::Inconclusive;
  const double last = curve.back().second;
  const double mid1 = curve[curve.size() - 2].second;
  const double mid2 = curve[curve.size() - 3].second;
  const bool stable = last <= 1.05 * mid1 && mid1 <= 1.05 * mid2 && mid1 > 0.0 && mid2 > 0.0;
  // growth measured from the half-depth entry
  const int half_depth = curve.back().first / 2;
  double half_val = 0.0;
  for (const auto& [depth, val] : curve)
    if (depth <= half_depth) half_val = val;
  if (stable) return Verdict::Bounded;
  if (half_val > 0.0 && last > 1.5 * half_val) return Verdict::Growing;
  return Verdict::Inconclusive;
}

HolderScan pair_scan(const limitmap::LimitDictionary& dict, const models::ModelSpace& model,
                     double alpha, const std::vector<int>& depth_schedule,
                     int m, bool log_corrected) {
  if (dict.samples.size() < 2) throw InputError("pair scan: need at least 2 samples");
  HolderScan out;
  out.alpha = alpha;
  const auto& s = dict.samples;
  for (int depth : depth_schedule) {
    double best = 0.0;
    long pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i].word.length() > depth) continue;
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        if (s[j].word.length() > depth) continue;
        const double log_dv = model.log_visual_metric(s[i].boundary, s[j].boundary);
        if (std::isinf(log_dv)) continue;
        if (log_corrected && log_dv >= -1.0) continue;  // need |log d_v| > 1
        const double dP = limitmap::fubini_study(s[i].point, s[j].point);
        if (dP <= 0.0) continue;
        double log_q = std::log(dP) - alpha * log_dv;
        if (log_corrected) log_q -= m * std::log(-log_dv);
        best = std::max(best, std::exp(log_q));
        ++pairs;
      }
    }
    if (pairs >= 1) out.curve.emplace_back(depth, best);
  }
  out.verdict = classify_curve(out.curve);
  return out;
}

}  // namespace

HolderScan holder_scan(const limitmap::LimitDictionary& dict, const models::ModelSpace& model,
                       double alpha, const std::vector<int>& depth_schedule) {
  return pair_scan(dict, model, alpha, depth_schedule, 0, false);
}

HolderScan cor14_check(const limitmap::LimitDictionary& dict, const models::ModelSpace& model,
                       double alpha, int m, const std::vector<int>& depth_schedule) {
  return pair_scan(dict, model, alpha, depth_schedule, m, true);
}

NonattainmentSeries nonattainment_series(const matgap::Representation& rep,
                                         const models::ModelSpace& model,
                                         const words::Word& x_word, const words::Word& y_word,
                                         int n_max) {
  if (n_max < 0) throw InputError("nonattainment_series: n_max must be >= 0");
  const auto& alphabet = model.presentation().alphabet;
  const words::Word a1{std::vector<words::Letter>{alphabet.parse_letter("a1")}};
  const models::BoundaryPoint x = model.attracting_point(x_word);
  const models::BoundaryPoint y = model.attracting_point(y_word);
  const models::BoundaryPoint a1_rep =
      model.attracting_point(words::inverse(alphabet, a1));
  if (model.visual_metric(x, y) < 1e-9)
    throw InputError("nonattainment_series: x and y must be distinct");
  for (const auto& b : {x, y})
    if (model.visual_metric(b, a1_rep) < 1e-9)
      throw InputError("nonattainment_series: point coincides with the repelling end of a1");

  const Eigen::VectorXd u0 = limitmap::limit_point(rep, x_word).v;
  const Eigen::VectorXd v0 = limitmap::limit_point(rep, y_word).v;
  const matgap::Matrix g = rep.image(a1.letters[0]);
  const matgap::Matrix g2 = matgap::exterior_power(g, 2);

  NonattainmentSeries out;
  Eigen::VectorXd u = u0, v = v0, w = matgap::wedge2(u0, v0);
  double log_u = 0.0, log_v = 0.0, log_w = std::log(w.norm());
  w /= w.norm();
  models::BoundaryPoint xn = x, yn = y;
  double log_dv = model.log_visual_metric(x, y);
  for (int n = 0; n <= n_max; ++n) {
    const double log_sin = log_w - log_u - log_v;
    const double dP = std::asin(std::min(1.0, std::exp(log_sin)));
    const double log_dP = std::log(dP);
    out.rows.push_back(SeriesRow{n, std::exp(log_dP - 0.5 * log_dv), log_dP, log_dv});
    if (n == n_max) break;
    u = g * u;
    log_u += std::log(u.norm());
    u /= u.norm();
    v = g * v;
    log_v += std::log(v.norm());
    v /= v.norm();
    w = g2 * w;
    log_w += std::log(w.norm());
    w /= w.norm();
    // d_v(gx, gy) = d_v(x, y) |g'(x)|^1/2 |g'(y)|^1/2 for disc Mobius maps
    auto [xn1, ldx] = model.translate_with_logderiv(a1, xn);
    auto [yn1, ldy] = model.translate_with_logderiv(a1, yn);
    xn = xn1;
    yn = yn1;
    log_dv += 0.5 * (ldx + ldy);
  }
  // verdict on r_n over the second half of the series
  std::vector<std::pair<int, double>> curve;
  for (const auto& row : out.rows) curve.emplace_back(row.n, row.r);
  out.verdict = classify_curve(curve);
  return out;
}

std::pair<BoundFit, BoundFit> thm13_fit(const matgap::Representation& rep,
                                        const models::ModelSpace& model, int max_len,
                                        double alpha, double beta,
                                        const std::vector<words::Word>& extra_words) {
  struct Point {
    double len_x;
    double log_ratio;
  };
  std::vector<Point> pts;
  matgap::scan_gaps(rep, model, max_len, words::EnumMode::AllReduced,
                    [&](const matgap::ScanRow& row) {
                      pts.push_back({row.len_x, -row.log_s1s2});
                    });
  matgap::LadderStack ladder(rep, 2, &model.presentation());
  for (const auto& w : extra_words) {
    ladder.reset();
    ladder.push_word(w);
    pts.push_back({model.length(w), -ladder.sigma_gap()});
  }
  if (pts.empty()) throw InputError("thm13_fit: no data");

  double min_len = kInf, max_len_x = -kInf;
  for (const auto& p : pts) {
    min_len = std::min(min_len, p.len_x);
    max_len_x = std::max(max_len_x, p.len_x);
  }
  const double mid = 0.5 * (min_len + max_len_x);

  BoundFit upper;
  const int d = rep.degree();
  const int m_max = std::max(0, d * (d - 1) / 2 - 2);
  for (int m = 0; m <= m_max; ++m) {
    // residual y = log(s2/s1) + alpha |g|_X - m log(max(|g|_X, 1))
    double lo = -kInf, hi = -kInf, all = -kInf;
    for (const auto& p : pts) {
      const double y = p.log_ratio + alpha * p.len_x - m * std::log(std::max(p.len_x, 1.0));
      all = std::max(all, y);
      (p.len_x <= mid ? lo : hi) = std::max(p.len_x <= mid ? lo : hi, y);
    }
    const bool stable = hi <= lo + 0.1;
    if (stable || m == m_max) {
      upper.m = m;
      upper.C = std::max(1.0, std::exp(all));
      upper.stable = stable;
      for (const auto& p : pts) {
        const double y = p.log_ratio + alpha * p.len_x - m * std::log(std::max(p.len_x, 1.0));
        upper.residual_table.push_back({p.len_x, p.log_ratio, std::log(upper.C) - y});
      }
      break;
    }
  }

  BoundFit lower;
  lower.m = 0;
  double worst = -kInf;
  for (const auto& p : pts) worst = std::max(worst, -p.log_ratio - beta * p.len_x);
  lower.C = std::max(1.0, std::exp(worst));
  for (const auto& p : pts)
    lower.residual_table.push_back(
        {p.len_x, p.log_ratio, std::log(lower.C) + p.log_ratio + beta * p.len_x});
  return {upper, lower};
}

std::vector<Cor43Row> cor43_compare(const matgap::Representation& rep,
                                    const models::ModelSpace& model, int max_len,
                                    const std::vector<double>& n_grid, double alpha) {
  struct Point {
    double len_x;
    double quotient;
  };
  std::vector<Point> pts;
  matgap::scan_gaps(rep, model, max_len, words::EnumMode::AllReduced,
                    [&](const matgap::ScanRow& row) {
                      if (row.len_x > 1e-6) pts.push_back({row.len_x, row.log_s1s2 / row.len_x});
                    });
  std::vector<Cor43Row> out;
  for (double n : n_grid) {
    double inf = kInf;
    long used = 0;
    for (const auto& p : pts) {
      if (p.len_x < n) continue;
      inf = std::min(inf, p.quotient);
      ++used;
    }
    if (used == 0) continue;
    out.push_back({n, inf, std::fabs(inf - alpha), used});
  }
  return out;
}

GrowthEstimate growth_entropy(const models::ModelSpace& model, int max_len) {
  std::vector<double> lengths;
  words::enumerate(model.presentation(), max_len, words::EnumMode::AllReduced,
                   [&](const words::Word& w) { lengths.push_back(model.length(w)); });
  std::sort(lengths.begin(), lengths.end());
  GrowthEstimate out;
  if (lengths.size() < 16 || max_len < 3) {
    out.inconclusive = true;
    return out;
  }
  const double r_max = lengths.back();
  const double r_lo = 0.5 * r_max;
  // log-count curve on an even grid over the largest half of the range
  const int grid = 24;
  std::vector<double> xs, ys;
  for (int i = 0; i < grid; ++i) {
    const double r = r_lo + (r_max - r_lo) * (i + 1) / grid;
    const auto count =
        std::upper_bound(lengths.begin(), lengths.end(), r) - lengths.begin();
    if (count < 2) continue;
    xs.push_back(r);
    ys.push_back(std::log(static_cast<double>(count)));
  }
  if (xs.size() < 3) {
    out.inconclusive = true;
    return out;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - slope * xs[i] - intercept;
    ss += e * e;
  }
  out.estimate = slope;
  out.fit_residual = std::sqrt(ss / n);
  return out;
}

}  // namespace anosov::exponents
