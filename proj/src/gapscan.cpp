#include "anosovlab/gapscan.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "anosovlab/errors.hpp"

namespace anosov::matgap {

namespace {
constexpr double kGapFloor = 1e-12;
}

LadderStack::LadderStack(const Representation& rep, int max_level,
                         const words::Presentation* presentation)
    : rep_(&rep), presentation_(presentation), degree_(rep.degree()) {
  max_level_ = max_level < 0 ? degree_ : std::min(max_level, degree_);
  // level d is the determinant rung, carried exactly
  const int top = std::min(max_level_, degree_ - 1);
  level_images_.resize(top + 1);
  level_tails_.resize(top + 1);
  level_has_tails_.assign(top + 1, false);
  stacks_.resize(top + 1);
  for (int k = 1; k <= top; ++k) {
    level_images_[k].resize(rep.alphabet().size());
    level_tails_[k].resize(rep.alphabet().size());
    for (int l = 0; l < rep.alphabet().size(); ++l) {
      std::tie(level_images_[k][l], level_tails_[k][l]) = exterior_power_dd(
          rep.image(static_cast<words::Letter>(l)),
          rep.image_lo(static_cast<words::Letter>(l)), k);
      if (level_tails_[k][l].cwiseAbs().maxCoeff() != 0.0) level_has_tails_[k] = true;
    }
    stacks_[k].push_back(ScaledMatrix::identity(static_cast<int>(level_images_[k][0].rows())));
  }
  det_stack_.push_back(0.0);
}

void LadderStack::push(words::Letter l) {
  for (int k = 1; k < static_cast<int>(stacks_.size()); ++k)
    stacks_[k].push_back(stacks_[k].back().rmul(level_images_[k][l]));
  det_stack_.push_back(det_stack_.back() + rep_->log_det_image(l));
  path_.push_back(l);
  short_valid_ = false;
}

void LadderStack::pop() {
  for (int k = 1; k < static_cast<int>(stacks_.size()); ++k) stacks_[k].pop_back();
  det_stack_.pop_back();
  path_.pop_back();
  short_valid_ = false;
}

void LadderStack::push_word(const words::Word& w) {
  for (words::Letter l : w.letters) push(l);
}

void LadderStack::reset() {
  while (!path_.empty()) pop();
}

double LadderStack::log_abs_det() const { return det_stack_.back(); }

double LadderStack::log_sigma1(int level) const {
  if (level == 0) return 0.0;
  if (level == degree_) return log_abs_det();
  const ScaledMatrix& g = stacks_[level].back();
  Eigen::JacobiSVD<Matrix> svd(g.mat);
  return std::log(svd.singularValues()[0]) + g.log_scale;
}

namespace {

double log_sigma1_of(const ScaledMatrix& g) {
  Eigen::JacobiSVD<Matrix> svd(g.mat);
  return std::log(svd.singularValues()[0]) + g.log_scale;
}

// log spectral radius via the Gelfand limit with repeated squaring.  The
// second difference over three dyadic points cancels the eigenvector constant
// and any polynomial (Jordan) prefactor exactly, so the estimator is unbiased
// even for defective tops.  Its floor is the formation error of the stored
// matrix: eps * exp(2 (log sigma_1 - log l_1)).
struct SquaringGelfand {
  double value = 0.0;
  double poly_degree = 0.0;  // degree of the n^k prefactor; ~1+ flags a Jordan top
};

SquaringGelfand gelfand_squaring(const ScaledMatrix& g) {
  constexpr int kSquarings = 38;
  ScaledMatrix p = g;
  for (int j = 0; j < kSquarings - 2; ++j) p = p * p;
  const double s0 = log_sigma1_of(p);
  p = p * p;
  const double s1 = log_sigma1_of(p);
  p = p * p;
  const double s2 = log_sigma1_of(p);
  const double n = std::exp2(kSquarings - 2);
  SquaringGelfand out;
  out.value = (s2 - 2.0 * s1 + s0) / n;
  // with s(n) = n L + k log n + c: (s1 - s0) - n L = k log 2
  out.poly_degree = ((s1 - s0) - n * out.value) / std::log(2.0);
  return out;
}

// ---- double-double scalars for the escalated trajectory ----
// Semisimple tops with a badly conditioned eigenbasis keep the l_1 signal
// about e^(excursion) below the within-period peak of the partial products;
// once that gap crosses 1/eps no f64 trajectory retains it, so the escalated
// path carries the running product in ~32 significant digits.
struct DD {
  double hi = 0.0, lo = 0.0;
};

inline DD two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline DD two_prod(double a, double b) {
  const double p = a * b;
  constexpr double split = 134217729.0;  // 2^27 + 1
  const double ca = split * a;
  const double ahi = ca - (ca - a), alo = a - ahi;
  const double cb = split * b;
  const double bhi = cb - (cb - b), blo = b - bhi;
  const double err = ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo;
  return {p, err};
}

inline DD dd_add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  const double lo = s.lo + a.lo + b.lo;
  const double hi = s.hi + lo;
  return {hi, lo - (hi - s.hi)};
}

inline DD dd_mul_d(DD a, double b) {
  DD p = two_prod(a.hi, b);
  const double lo = p.lo + a.lo * b;
  const double hi = p.hi + lo;
  return {hi, lo - (hi - p.hi)};
}

inline DD dd_mul(DD a, DD b) {
  DD p = two_prod(a.hi, b.hi);
  const double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
  const double hi = p.hi + lo;
  return {hi, lo - (hi - p.hi)};
}

// running word-power product in double-double with a log-scale accumulator
class DDScaled {
 public:
  explicit DDScaled(int dim) : dim_(dim), e_(dim * dim) {
    for (int i = 0; i < dim; ++i) e_[i * dim + i] = {1.0, 0.0};
  }

  void rmul(const Matrix& g_hi, const Matrix& g_lo) {
    std::vector<DD> out(dim_ * dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        DD acc{0.0, 0.0};
        for (int k = 0; k < dim_; ++k)
          acc = dd_add(acc, dd_mul(e_[i * dim_ + k], DD{g_hi(k, j), g_lo(k, j)}));
        out[i * dim_ + j] = acc;
      }
    e_.swap(out);
    renormalize();
  }

  void square() {
    std::vector<DD> out(dim_ * dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) {
        DD acc{0.0, 0.0};
        for (int k = 0; k < dim_; ++k)
          acc = dd_add(acc, dd_mul(e_[i * dim_ + k], e_[k * dim_ + j]));
        out[i * dim_ + j] = acc;
      }
    e_.swap(out);
    log_scale_ *= 2.0;
    renormalize();
  }

  double log_sigma1() const {
    Matrix m(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j) m(i, j) = e_[i * dim_ + j].hi;
    Eigen::JacobiSVD<Matrix> svd(m);
    return std::log(svd.singularValues()[0]) + log_scale_;
  }

 private:
  void renormalize() {
    double norm = 0.0;
    for (const DD& v : e_) norm = std::max(norm, std::fabs(v.hi));
    if (norm < 0.5 || norm > 2.0) {
      const double inv = 1.0 / norm;
      for (DD& v : e_) v = dd_mul_d(v, inv);
      log_scale_ += std::log(norm);
    }
  }

  int dim_;
  std::vector<DD> e_;
  double log_scale_ = 0.0;
};

// squaring D2 on a double-double product: sound up to formation error
// eps_dd * e^(2 nonnormality), and the second difference cancels Jordan
// polynomial prefactors exactly
double gelfand_squaring_dd(DDScaled p) {
  constexpr int kSquarings = 38;
  for (int j = 0; j < kSquarings - 2; ++j) p.square();
  const double s0 = p.log_sigma1();
  p.square();
  const double s1 = p.log_sigma1();
  p.square();
  const double s2 = p.log_sigma1();
  return (s2 - 2.0 * s1 + s0) / std::exp2(kSquarings - 2);
}

// Gelfand limit along word powers evaluated letter by letter, which never
// materializes an ill-conditioned matrix.  Geometric D2 windows with window
// doubling and one Richardson step; converges fast for semisimple tops of any
// conditioning, while a defective top leaves a 1/n tail that fails the
// agreement test.
struct IncrementalGelfand {
  double value = 0.0;
  bool converged = false;
};

template <class Product>
IncrementalGelfand gelfand_incremental(const std::vector<Matrix>& images,
                                       const std::vector<Matrix>& tails,
                                       const words::Word& w, Product p, int max_periods,
                                       double agree_tol, bool richardson = true) {
  int periods = 0;
  auto advance = [&](int target) {
    while (periods < target) {
      for (words::Letter l : w.letters) p.rmul(images[l], tails[l]);
      ++periods;
    }
  };
  constexpr int kBase = 8;
  std::vector<double> s;  // s[k] = log sigma_1 at kBase * 2^k periods
  auto reading = [&](int k) {
    while (static_cast<int>(s.size()) <= k) {
      advance(kBase << s.size());
      s.push_back(p.log_sigma1());
    }
    return s[k];
  };
  double prev_r = 0.0;
  bool have_prev = false;
  IncrementalGelfand out;
  for (int k = 0; kBase << (k + 3) <= max_periods; ++k) {
    const double est_k =
        (reading(k + 2) - 2.0 * reading(k + 1) + reading(k)) / (kBase << k);
    const double est_k1 =
        (reading(k + 3) - 2.0 * reading(k + 2) + reading(k + 1)) / (kBase << (k + 1));
    // the Richardson step kills a residual c/n term; classification passes
    // want the raw window values, where a defective top's 1/n tail is loud
    const double r = richardson ? 2.0 * est_k1 - est_k : est_k1;
    out.value = r;
    if (have_prev && std::fabs(r - prev_r) <= agree_tol * std::max(1.0, std::fabs(r))) {
      out.converged = true;
      return out;
    }
    prev_r = r;
    have_prev = true;
  }
  return out;
}

struct F64Product {
  ScaledMatrix p;
  explicit F64Product(int dim) : p(ScaledMatrix::identity(dim)) {}
  void rmul(const Matrix& g, const Matrix&) { p = p.rmul(g); }
  double log_sigma1() const { return log_sigma1_of(p); }
};

}  // namespace

const words::Word& LadderStack::shortened() const {
  if (!short_valid_) {
    words::Word w{path_};
    if (presentation_) {
      short_cache_ = words::conjugacy_shorten(*presentation_, w);
    } else {
      words::Presentation free_p{rep_->alphabet(), {}, words::Presentation::Kind::Free};
      short_cache_ = words::conjugacy_shorten(free_p, w);
    }
    // reduce to the primitive root: l-data of u^m is m times that of u, and
    // the shorter word is much better conditioned
    short_power_ = 1;
    const int n = short_cache_.length();
    for (int p = 1; p <= n / 2; ++p) {
      if (n % p != 0) continue;
      bool periodic = true;
      for (int i = p; i < n && periodic; ++i)
        periodic = short_cache_.letters[i] == short_cache_.letters[i - p];
      if (periodic) {
        short_power_ = n / p;
        short_cache_.letters.resize(p);
        break;
      }
    }
    short_valid_ = true;
  }
  return short_cache_;
}

int LadderStack::shortened_power() const {
  shortened();
  return short_power_;
}

ScaledMatrix LadderStack::compound_of(const words::Word& w, int level) const {
  const int dim = static_cast<int>(level_images_[level][0].rows());
  ScaledMatrix p = ScaledMatrix::identity(dim);
  for (words::Letter l : w.letters) p = p.rmul(level_images_[level][l]);
  return p;
}

double LadderStack::log_ell1(int level) const {
  if (level == 0) return 0.0;
  if (level == degree_) return log_abs_det();
  const words::Word& w = shortened();
  if (w.empty()) return 0.0;
  const double power = shortened_power();
  const auto& images = level_images_[level];
  const auto& tails = level_tails_[level];
  const int dim = static_cast<int>(images[0].rows());

  // fast path for tail-free letters (the base and block-built families, and
  // any user-supplied representation): squaring D2 in f64 on the word and two
  // rotated conjugates.  All three share the exact spectral radius but carry
  // independent evaluation-order roundoff, so tight agreement certifies the
  // value.  Functor-derived letters carry double-double tails whose f64
  // truncation shifts every rotation alike, so they skip straight to the
  // double-double route.
  if (!level_has_tails_[level]) {
    double lo = 0.0, hi = 0.0, sum = 0.0;
    int count = 0;
    int prev_shift = -1;
    for (int shift : {0, (w.length() + 1) / 2, std::max(1, w.length() / 3)}) {
      if (shift == prev_shift || shift >= w.length()) continue;
      prev_shift = shift;
      words::Word rot = w;
      std::rotate(rot.letters.begin(), rot.letters.begin() + shift, rot.letters.end());
      const double v = gelfand_squaring(compound_of(rot, level)).value;
      lo = count ? std::min(lo, v) : v;
      hi = count ? std::max(hi, v) : v;
      sum += v;
      ++count;
    }
    const int needed = w.length() <= 2 ? 2 : 3;
    if (count >= needed && hi - lo <= 2e-12 * std::max(1.0, std::fabs(sum / count)))
      return power * sum / count;
  }

  // double-double squaring: formation floor eps_dd * e^(2 nonnormality), and
  // the second difference cancels defective-top polynomials exactly
  DDScaled q_dd(dim);
  for (words::Letter l : w.letters) q_dd.rmul(images[l], tails[l]);
  const double by_squaring = gelfand_squaring_dd(q_dd);
  const double nonnormality = q_dd.log_sigma1() - by_squaring;
  if (nonnormality <= 17.0) return power * by_squaring;

  // extreme conditioning: follow word powers letter by letter (no
  // materialized matrix at all); an unconverged 1/n tail means a defective
  // top, for which the squaring value is the unbiased one
  const IncrementalGelfand inc =
      gelfand_incremental(images, tails, w, DDScaled(dim), 1024, 1e-11);
  return power * (inc.converged ? inc.value : by_squaring);
}

std::vector<double> LadderStack::ladder_sigmas() const {
  std::vector<double> out(degree_);
  double prev = 0.0;
  for (int k = 1; k <= degree_; ++k) {
    const double cur = log_sigma1(k);
    out[k - 1] = cur - prev;
    prev = cur;
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<double> LadderStack::ladder_ells() const {
  std::vector<double> out(degree_);
  double prev = 0.0;
  for (int k = 1; k <= degree_; ++k) {
    const double cur = log_ell1(k);
    out[k - 1] = cur - prev;
    prev = cur;
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double LadderStack::sigma_gap() const {
  const double g = 2.0 * log_sigma1(1) - log_sigma1(2);
  return g < kGapFloor ? 0.0 : g;
}

double LadderStack::eig_gap() const {
  const double g = 2.0 * log_ell1(1) - log_ell1(2);
  return g < kGapFloor ? 0.0 : g;
}

GapData gap_data(const Representation& rep, const models::ModelSpace& model,
                 const words::Word& w) {
  LadderStack ladder(rep, -1, &model.presentation());
  ladder.push_word(w);
  GapData out;
  out.log_sigma = ladder.ladder_sigmas();
  out.log_ell = ladder.ladder_ells();
  out.word_len = w.length();
  out.model_len = model.length(w);
  out.model_stable_len = model.stable_length_or_zero(w);
  return out;
}

std::vector<double> ladder_singular_values(const Representation& rep, const words::Word& w) {
  LadderStack ladder(rep);
  ladder.push_word(w);
  return ladder.ladder_sigmas();
}

std::vector<double> ladder_eigen_moduli(const Representation& rep, const words::Word& w) {
  LadderStack ladder(rep);
  ladder.push_word(w);
  return ladder.ladder_ells();
}

std::pair<double, double> first_gaps(const Representation& rep, const words::Word& w) {
  if (rep.degree() < 2) throw InputError("first_gaps: degree must be >= 2");
  LadderStack ladder(rep, 2);
  ladder.push_word(w);
  return {ladder.sigma_gap(), ladder.eig_gap()};
}

namespace {

// DFS over freely reduced words with a ladder for the representation and a
// 2x2 stack for the Fuchsian model length (tree lengths are just depths).
class ScanDriver {
 public:
  ScanDriver(const Representation& rep, const models::ModelSpace& model, int max_level)
      : rep_(rep), model_(model), ladder_(rep, max_level, &model.presentation()),
        fuchsian_(model.kind() == models::ModelSpace::Kind::Fuchsian) {
    if (fuchsian_) model_stack_.push_back(ScaledMatrix::identity(2));
  }

  void run(int max_len, words::EnumMode mode,
           const std::function<void(LadderStack&, double, double, const words::Word&)>& leaf) {
    if (max_len < 1) throw InputError("scan: max_len must be >= 1");
    mode_ = mode;
    max_len_ = max_len;
    leaf_ = &leaf;
    word_.letters.clear();
    descend();
  }

 private:
  void descend() {
    const auto& a = rep_.alphabet();
    if (!word_.letters.empty()) visit_current();
    if (word_.length() == max_len_) return;
    for (words::Letter l = 0; l < a.size(); ++l) {
      if (!word_.letters.empty() && word_.letters.back() == a.inv(l)) continue;
      word_.letters.push_back(l);
      ladder_.push(l);
      if (fuchsian_) model_stack_.push_back(model_stack_.back().rmul(model_.fuchsian_rep().image(l)));
      descend();
      if (fuchsian_) model_stack_.pop_back();
      ladder_.pop();
      word_.letters.pop_back();
    }
  }

  void visit_current() {
    const auto& a = rep_.alphabet();
    if (mode_ == words::EnumMode::CyclicClasses) {
      if (word_.length() >= 2 && word_.letters.front() == a.inv(word_.letters.back())) return;
      if (words::canonical_rotation(word_) != word_) return;
    }
    (*leaf_)(ladder_, model_length(), model_stable_length(), word_);
  }

  double model_length() const {
    if (!fuchsian_) return word_.length();
    const ScaledMatrix& g = model_stack_.back();
    const double f2 = g.mat.squaredNorm();
    const double det = std::fabs(g.mat.determinant());
    const double s1sq = 0.5 * (f2 + std::sqrt(std::max(0.0, f2 * f2 - 4.0 * det * det)));
    return std::log(s1sq) + 2.0 * g.log_scale;
  }

  double model_stable_length() const {
    if (!fuchsian_) {
      // cyclically reduced words are their own cores; general words reduce
      if (words::is_cyclically_reduced(model_.presentation().alphabet, word_))
        return word_.length();
      return words::cyclic_reduce(model_.presentation().alphabet, word_).core.length();
    }
    const ScaledMatrix& g = model_stack_.back();
    const double tr = std::fabs(g.mat.trace());
    if (tr <= 0.0) return 0.0;
    const double log_tr = std::log(tr) + g.log_scale;
    if (log_tr <= std::log(2.0 + 1e-9)) return 0.0;
    if (log_tr > 40.0) return 2.0 * log_tr;
    const double t = std::exp(log_tr);
    return 2.0 * std::log(0.5 * (t + std::sqrt(t * t - 4.0)));
  }

  const Representation& rep_;
  const models::ModelSpace& model_;
  LadderStack ladder_;
  bool fuchsian_;
  std::vector<ScaledMatrix> model_stack_;
  words::Word word_;
  words::EnumMode mode_ = words::EnumMode::AllReduced;
  int max_len_ = 0;
  const std::function<void(LadderStack&, double, double, const words::Word&)>* leaf_ = nullptr;
};

}  // namespace

void scan_gaps(const Representation& rep, const models::ModelSpace& model, int max_len,
               words::EnumMode mode, const std::function<void(const ScanRow&)>& visit) {
  ScanDriver driver(rep, model, 2);
  driver.run(max_len, mode,
             [&](LadderStack& ladder, double len_x, double stable, const words::Word& w) {
               visit(ScanRow{w, len_x, stable, ladder.sigma_gap(), ladder.eig_gap()});
             });
}

GapScanResult anosov_gap_scan(const Representation& rep, const models::ModelSpace& model,
                              int k, int max_len,
                              const std::function<void(const words::Word&, double, double)>&
                                  row_visit) {
  if (k < 1 || k >= rep.degree()) throw InputError("anosov_gap_scan: k out of range");
  GapScanResult out;
  // pass 1: epsilon = min y/x; pass 2: R = max(0, eps*x - y)
  double eps = std::numeric_limits<double>::infinity();
  {
    ScanDriver driver(rep, model, k + 1);
    driver.run(max_len, words::EnumMode::AllReduced,
               [&](LadderStack& ladder, double len_x, double, const words::Word& w) {
                 const double y = 2.0 * ladder.log_sigma1(k) - ladder.log_sigma1(k - 1) -
                                  ladder.log_sigma1(k + 1);
                 ++out.word_count;
                 if (len_x > 1e-6) eps = std::min(eps, y / len_x);
                 if (row_visit) row_visit(w, len_x, y);
               });
  }
  if (!std::isfinite(eps)) eps = 0.0;
  double worst = 0.0;
  {
    ScanDriver driver(rep, model, k + 1);
    driver.run(max_len, words::EnumMode::AllReduced,
               [&](LadderStack& ladder, double len_x, double, const words::Word&) {
                 const double y = 2.0 * ladder.log_sigma1(k) - ladder.log_sigma1(k - 1) -
                                  ladder.log_sigma1(k + 1);
                 worst = std::max(worst, eps * len_x - y);
               });
  }
  out.epsilon = eps;
  out.R = worst;
  out.anosov_flag = eps > 1e-6;
  return out;
}

AmsWitness ams_witness(const Representation& rep, const models::ModelSpace& model,
                       const words::Word& w, int radius) {
  if (radius < 0 || radius > 4) throw InputError("ams_witness: radius must be in [0, 4]");
  LadderStack ladder(rep, 2, &model.presentation());
  ladder.push_word(w);
  const double len = model.length(w);
  const double ls1 = ladder.log_sigma1(1);
  const double ls2 = ladder.log_sigma1(2) - ls1;

  const auto& a = rep.alphabet();
  AmsWitness best;
  bool first = true;
  auto consider = [&](const words::Word& f) {
    const words::Word wf = words::concat(a, w, f);
    LadderStack lf(rep, 2, &model.presentation());
    lf.push_word(wf);
    const double le1 = lf.log_ell1(1);
    const double le2 = lf.log_ell1(2) - le1;
    const double stable = model.stable_length_or_zero(wf);
    const double disc = std::max({std::fabs(len - stable), std::fabs(ls1 - le1),
                                  std::fabs(ls2 - le2)});
    if (first || disc < best.discrepancy) {
      best = {f, disc};
      first = false;
    }
  };
  consider(words::Word{});
  if (radius >= 1) {
    words::Presentation p{a, {}, words::Presentation::Kind::Free};
    words::enumerate(p, radius, words::EnumMode::AllReduced, consider);
  }
  return best;
}

}  // namespace anosov::matgap
