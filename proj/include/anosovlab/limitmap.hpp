#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "anosovlab/gapscan.hpp"
#include "anosovlab/matgap.hpp"
#include "anosovlab/models.hpp"
#include "anosovlab/rng.hpp"

namespace anosov::limitmap {

// Point of P(R^d): unit vector with the first coordinate above 1e-12 in
// absolute value made positive, so serialization is reproducible.
struct ProjectivePoint {
  Eigen::VectorXd v;

  static ProjectivePoint from(const Eigen::VectorXd& raw);
};

// Fubini-Study distance, in [0, pi/2].  Computed as atan2(|u ^ v|, |<u,v>|)
// which agrees with acos of the clamped inner product but keeps full
// precision near 0.
double fubini_study(const ProjectivePoint& p, const ProjectivePoint& q);

// attracting eigenline of rho(w); requires l1/l2 >= 1 + 1e-6
ProjectivePoint limit_point(const matgap::Representation& rep, const words::Word& w);

// orthonormal frame of the top-k spectral subspace; requires l_k/l_{k+1} gap
Eigen::MatrixXd limit_plane(const matgap::Representation& rep, const words::Word& w, int k);

struct LimitSample {
  words::Word word;
  models::BoundaryPoint boundary;
  ProjectivePoint point;
  std::optional<Eigen::MatrixXd> plane_d_minus_2;
};

struct LimitDictionary {
  std::vector<LimitSample> samples;
  int skipped_non_proximal = 0;
  int degree = 0;
};

// Samples the limit map at attracting fixed points of cyclic-class words up
// to max_len; samples closer than 1e-10 on the boundary are merged (first in
// enumeration order wins).  Non-proximal words are skipped and counted.
LimitDictionary build_dictionary(const matgap::Representation& rep,
                                 const models::ModelSpace& model, int max_len,
                                 bool with_planes = false);

// numerical rank of the span of sample vectors (threshold 1e-8 relative)
int spanning_rank(const LimitDictionary& dict);

struct HyperconvexResult {
  double min_abs_det = 1.0;
  std::array<int, 3> worst_triple{0, 0, 0};
  long triples_checked = 0;
};

// min over sampled triples (pairwise visual distance >= min_sep) of
// |det[v1 | v2 | frame3]|; near-zero indicates a hyperconvexity failure
HyperconvexResult hyperconvex_check(const LimitDictionary& dict,
                                    const models::ModelSpace& model, long n_triples,
                                    double min_sep, std::uint64_t seed);

// margin of d_P([gv1],[gv2]) >= (2/pi) (s_d s_{d-1} / s_1^2) d_P([v1],[v2])
double lemma32_margin(const matgap::Matrix& g, const Eigen::VectorXd& v1,
                      const Eigen::VectorXd& v2);

struct SuiteResult {
  long trials = 0;
  long violations = 0;
  double worst = 0.0;  // worst margin (lemma32) or worst residual (others)
  bool pass = false;
};

SuiteResult lemma32_suite(int dim, long trials, std::uint64_t seed);
// d_P(limit_point(u w u^-1), rho(u) limit_point(w)) over random conjugations
SuiteResult equivariance_suite(const matgap::Representation& rep, long trials,
                               std::uint64_t seed);
// projection residual of limit_point(w) onto limit_plane(w, k), all k with gaps
SuiteResult compatibility_suite(const matgap::Representation& rep,
                                const models::ModelSpace& model, int max_len);
// |det[v_1 | plane_{d-1}(w_2)]| > 1e-10 on separated pairs
SuiteResult transversality_suite(const matgap::Representation& rep,
                                 const models::ModelSpace& model, int max_len,
                                 double min_sep);

}  // namespace anosov::limitmap
