#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <optional>
#include <string>

#include "anosovlab/matgap.hpp"
#include "anosovlab/words.hpp"

namespace anosov::models {

// Boundary point of the model space: an angle on the circle at infinity of H^2
// (disc model), or an end of the Cayley tree given by a reduced prefix.
struct BoundaryPoint {
  enum class Kind { Circle, TreeEnd };

  Kind kind;
  double angle = 0.0;  // normalized to [0, 2*pi)
  words::Word prefix;

  static BoundaryPoint circle(double angle);
  static BoundaryPoint tree_end(words::Word prefix);
};

// Geometry carrier.  Fuchsian: H^2 via a discrete 2x2 representation with the
// basepoint at i (disc center), which makes |gamma|_X = 2 log sigma_1 and
// d_v = chord/2 exact (visual base a = e, r = 1).  Tree: the Cayley tree of a
// free presentation with the word metric.
class ModelSpace {
 public:
  enum class Kind { Fuchsian, Tree };

  static ModelSpace fuchsian(words::Presentation presentation,
                             const std::map<std::string, Eigen::Matrix2d>& rho1,
                             double delta = 1.0, double visual_base = 2.718281828459045235);
  static ModelSpace tree(words::Presentation presentation, double delta = 0.0,
                         double visual_base = 2.718281828459045235);

  Kind kind() const { return kind_; }
  const words::Presentation& presentation() const { return presentation_; }
  double delta() const { return delta_; }
  double visual_base() const { return visual_base_; }
  const matgap::Representation& fuchsian_rep() const;

  // |gamma|_X = d_X(gamma x0, x0)
  double length(const words::Word& w) const;
  // |gamma|_{X,infty}; throws NonHyperbolicError for elliptic/parabolic images
  double stable_length(const words::Word& w) const;
  bool is_hyperbolic(const words::Word& w) const;
  // stable length with non-hyperbolic (group-trivial) words reported as 0
  double stable_length_or_zero(const words::Word& w) const;

  BoundaryPoint attracting_point(const words::Word& w) const;

  // Gromov product (x.y)_{x0}; +inf iff the points coincide
  double gromov_product(const BoundaryPoint& x, const BoundaryPoint& y) const;
  // a^{-(x.y)}; equals chord/2 for the Fuchsian model at a = e
  double visual_metric(const BoundaryPoint& x, const BoundaryPoint& y) const;
  double log_visual_metric(const BoundaryPoint& x, const BoundaryPoint& y) const;

  // boundary action of a word (Fuchsian only)
  BoundaryPoint translate(const words::Word& w, const BoundaryPoint& x) const;
  // translated point plus log |gamma'(x)| accumulated by the chain rule,
  // so collapsing pairs stay resolvable in the log domain
  std::pair<BoundaryPoint, double> translate_with_logderiv(const words::Word& w,
                                                           const BoundaryPoint& x) const;

  // orbit point w . x0 in the disc (Fuchsian only)
  std::complex<double> orbit_point(const words::Word& w) const;
  // Gromov product of a boundary point with an interior point, via the
  // Busemann evaluation (x.p) = (d(p,0) + log P(p,x)) / 2
  double gromov_product_interior(const BoundaryPoint& x, std::complex<double> p) const;

  // Lemma residual |(gx.gy) - |g| - (x.y) + (x.g^-1 x0) + (y.g^-1 x0)|
  double lemma21_residual(const words::Word& w, const BoundaryPoint& x,
                          const BoundaryPoint& y) const;
  // Lemma residual |2(g^+ . g^-1 x0) - (|g| - |g|_infty)|
  double lemma22_residual(const words::Word& w) const;

  // hyperbolic distance between disc points (test oracle support)
  static double disc_distance(std::complex<double> z, std::complex<double> w);

 private:
  ModelSpace(Kind kind, words::Presentation presentation, double delta, double visual_base);

  // SU(1,1) disc matrix [[alpha, beta], [conj beta, conj alpha]]
  struct DiscPair {
    std::complex<double> alpha, beta;
  };
  DiscPair disc_eval(const words::Word& w) const;
  double product_interior(const BoundaryPoint& x, const DiscPair& m) const;
  matgap::ScaledMatrix eval2(const words::Word& w) const;

  Kind kind_;
  words::Presentation presentation_;
  double delta_;
  double visual_base_;
  std::optional<matgap::Representation> rho1_;
  std::vector<Eigen::Matrix2cd> disc_;  // Cayley-conjugated generator images
};

}  // namespace anosov::models
