#pragma once

#include <utility>
#include <vector>

#include "anosovlab/gapscan.hpp"
#include "anosovlab/limitmap.hpp"
#include "anosovlab/models.hpp"

namespace anosov::exponents {

enum class Direction { Inf, Sup };

// Running extremum of a ratio over the cyclic-class enumeration.  The curve
// records (max_len, extremum so far) per length, so stabilization can be
// judged; the finite scan only bounds the true inf/sup.
struct ExponentReport {
  double estimate = 0.0;
  words::Word witness;
  std::vector<std::pair<int, double>> curve;
  Direction direction = Direction::Inf;
  long skipped = 0;  // group-trivial (non-hyperbolic) classes
  long counted = 0;
};

// inf over cyclic classes of log(l1/l2)(rho(w)) / |w|_{X,inf}
ExponentReport alpha_rho(const matgap::Representation& rep, const models::ModelSpace& model,
                         int max_len);
// same ratio, sup
ExponentReport beta_rho(const matgap::Representation& rep, const models::ModelSpace& model,
                        int max_len);
// inf over cyclic classes of log(l1/l2)(rho2(w)) / log(l1/l2)(rho1(w))
ExponentReport conj_exponent(const matgap::Representation& rep1,
                             const matgap::Representation& rep2,
                             const models::ModelSpace& model, int max_len);

enum class Verdict { Bounded, Growing, Inconclusive };
const char* verdict_name(Verdict v);

// Per-depth running maximum of d_P(xi x, xi y) / d_v(x, y)^alpha over sample
// pairs.  Bounded: last three maxima within ratio 1.05; Growing: full-depth
// maximum exceeds half-depth maximum by more than 1.5x.
struct HolderScan {
  double alpha = 0.0;
  std::vector<std::pair<int, double>> curve;
  Verdict verdict = Verdict::Inconclusive;
};
HolderScan holder_scan(const limitmap::LimitDictionary& dict, const models::ModelSpace& model,
                       double alpha, const std::vector<int>& depth_schedule);

// Cor 1.4 variant: quotient d_P / (d_v^alpha |log d_v|^m) over pairs with
// d_v < 1/e
HolderScan cor14_check(const limitmap::LimitDictionary& dict, const models::ModelSpace& model,
                       double alpha, int m, const std::vector<int>& depth_schedule);

// Translated-pair series r_n = d_P(xi(a^n x), xi(a^n y)) / d_v(a^n x, a^n y)^{1/2}
// along the first generator, evaluated in the log domain (the exterior-square
// iteration for d_P, the Mobius derivative identity for d_v).
struct SeriesRow {
  int n;
  double r;
  double log_dP;
  double log_dv;
};
struct NonattainmentSeries {
  std::vector<SeriesRow> rows;
  Verdict verdict = Verdict::Inconclusive;  // Growing = exponent not attained
};
NonattainmentSeries nonattainment_series(const matgap::Representation& rep,
                                         const models::ModelSpace& model,
                                         const words::Word& x_word, const words::Word& y_word,
                                         int n_max);

// Two-sided fit of C^-1 e^{-beta |g|_X} <= s2/s1 <= C e^{-alpha |g|_X} |g|_X^m.
struct BoundFit {
  double C = 1.0;
  int m = 0;
  bool stable = true;  // residual running-max stabilized over the upper half-range
  struct Row {
    double len_x;
    double log_ratio;  // log s2/s1
    double slack;      // log C - residual, >= -1e-9 by construction
  };
  std::vector<Row> residual_table;
};
std::pair<BoundFit, BoundFit> thm13_fit(const matgap::Representation& rep,
                                        const models::ModelSpace& model, int max_len,
                                        double alpha, double beta,
                                        const std::vector<words::Word>& extra_words = {});

// Cor 4.3 comparator: per threshold n, inf over words with |g|_X >= n of
// log(s1/s2)/|g|_X, against the eigenvalue-side alpha estimate.
struct Cor43Row {
  double n;
  double sigma_inf;
  double gap;  // |sigma_inf - alpha|
  long words_used;
};
std::vector<Cor43Row> cor43_compare(const matgap::Representation& rep,
                                    const models::ModelSpace& model, int max_len,
                                    const std::vector<double>& n_grid, double alpha);

// growth exponent of |{gamma : |gamma|_X <= R}| by least squares over the
// largest half of the sampled range
struct GrowthEstimate {
  double estimate = 0.0;
  double fit_residual = 0.0;
  bool inconclusive = false;
};
GrowthEstimate growth_entropy(const models::ModelSpace& model, int max_len);

}  // namespace anosov::exponents
