#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "anosovlab/matgap.hpp"
#include "anosovlab/models.hpp"

namespace anosov::matgap {

// Cartan/Lyapunov data of one group element, log-domain, descending.
struct GapData {
  std::vector<double> log_sigma;
  std::vector<double> log_ell;
  int word_len = 0;
  double model_len = 0.0;
  double model_stable_len = 0.0;
};

// Singular values and eigenvalue moduli of long products via the compound
// ladder: log sigma_k(g) = log sigma_1(^k g) - log sigma_1(^{k-1} g), with
// each exterior power evaluated as its own scaled product of compound
// generator images.  Top values of each compound are well conditioned, so the
// whole list stays accurate where a direct SVD of the assembled product would
// lose everything below machine precision times sigma_1.
class LadderStack {
 public:
  // levels 1..max_level get compound products (max_level < d suffices when
  // only the first few gaps are needed); the determinant rung is always exact.
  // Eigenvalue data is evaluated on a conjugacy-shortened representative of
  // the current word (relator-aware when a presentation is supplied), since
  // moduli are class functions and materialized products of badly conjugated
  // words carry no l_1 information below eps * e^(|w|_X - |w|_{X,inf}).
  LadderStack(const Representation& rep, int max_level = -1,
              const words::Presentation* presentation = nullptr);

  void push(words::Letter l);
  void pop();
  void push_word(const words::Word& w);
  void reset();
  int depth() const { return static_cast<int>(path_.size()); }
  const std::vector<words::Letter>& path() const { return path_; }

  int degree() const { return degree_; }
  int max_level() const { return max_level_; }

  double log_sigma1(int level) const;  // log sigma_1 of ^level(product)
  double log_ell1(int level) const;    // log l_1 of ^level(product)
  double log_abs_det() const;

  std::vector<double> ladder_sigmas() const;  // needs max_level >= d-1
  std::vector<double> ladder_ells() const;
  double sigma_gap() const;  // log s1/s2, clamped at 0 below 1e-12
  double eig_gap() const;    // log l1/l2, same clamp

 private:
  const words::Word& shortened() const;  // primitive root of the short conjugate
  int shortened_power() const;           // multiplicity of that root
  ScaledMatrix compound_of(const words::Word& w, int level) const;

  const Representation* rep_;
  const words::Presentation* presentation_;
  int degree_;
  int max_level_;
  std::vector<std::vector<Matrix>> level_images_;   // [level][letter], hi parts
  std::vector<std::vector<Matrix>> level_tails_;    // [level][letter], lo parts
  std::vector<bool> level_has_tails_;
  std::vector<std::vector<ScaledMatrix>> stacks_;   // [level][depth]
  std::vector<double> det_stack_;
  std::vector<words::Letter> path_;
  mutable words::Word short_cache_;
  mutable int short_power_ = 1;
  mutable bool short_valid_ = false;
};

// One-off evaluations backed by the ladder.
GapData gap_data(const Representation& rep, const models::ModelSpace& model,
                 const words::Word& w);
std::vector<double> ladder_singular_values(const Representation& rep, const words::Word& w);
std::vector<double> ladder_eigen_moduli(const Representation& rep, const words::Word& w);

// (log s1/s2, log l1/l2), both >= 0
std::pair<double, double> first_gaps(const Representation& rep, const words::Word& w);

// Streaming per-word gap rows over an enumeration (DFS with incremental
// compound products; deterministic order).
struct ScanRow {
  const words::Word& word;
  double len_x;
  double stable_len;
  double log_s1s2;
  double log_l1l2;
};
void scan_gaps(const Representation& rep, const models::ModelSpace& model, int max_len,
               words::EnumMode mode, const std::function<void(const ScanRow&)>& visit);

// Thm 2.3-style scan: fit the best eps, R with
// log sigma_k/sigma_{k+1}(rho(w)) >= eps |w|_X - R over all enumerated words.
struct GapScanResult {
  double epsilon = 0.0;  // min over words of y/x (x >= 1e-6)
  double R = 0.0;        // max(0, max eps*x - y)
  long word_count = 0;
  bool anosov_flag = false;  // epsilon above the desk-scale threshold 1e-6
};
GapScanResult anosov_gap_scan(const Representation& rep, const models::ModelSpace& model,
                              int k, int max_len,
                              const std::function<void(const words::Word&, double, double)>&
                                  row_visit = nullptr);

// Prop 2.7-style witness search: the f of length <= radius minimizing
// max(| |g|_X - |gf|_{X,inf} |, |log s1(g) - log l1(gf)|, |log s2(g) - log l2(gf)|).
struct AmsWitness {
  words::Word f;
  double discrepancy = 0.0;
};
AmsWitness ams_witness(const Representation& rep, const models::ModelSpace& model,
                       const words::Word& w, int radius);

}  // namespace anosov::matgap
