#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "anosovlab/words.hpp"

namespace anosov::matgap {

using Matrix = Eigen::MatrixXd;

// Dense matrix kept at sup-norm in [1/2, 2] with the remaining magnitude in a
// log-scale accumulator, so products of arbitrarily long words never overflow.
// Represented element = exp(log_scale) * mat.
struct ScaledMatrix {
  Matrix mat;
  double log_scale = 0.0;

  static ScaledMatrix identity(int d);
  static ScaledMatrix from(const Matrix& m);  // renormalized copy

  int dim() const { return static_cast<int>(mat.rows()); }
  void renormalize();
  ScaledMatrix rmul(const Matrix& rhs) const;  // this * rhs, renormalized
  ScaledMatrix operator*(const ScaledMatrix& rhs) const;
  Matrix dense() const;  // exp(log_scale)*mat; may overflow for long words
};

// Generator images of rho: Gamma -> GL_d(R); inverse letters carry the
// precomputed matrix inverses (checked against identity to 1e-10).
//
// Functor-derived representations also carry a low-order correction to each
// image (a double-double tail), because eigenvalue data of long products is
// sensitive to the bare f64 rounding of the images at the level of
// eps * exp(word nonnormality); plain constructors leave the tails zero.
class Representation {
 public:
  Representation(words::Alphabet alphabet, int degree,
                 const std::map<std::string, Matrix>& generator_images);

  int degree() const { return degree_; }
  const words::Alphabet& alphabet() const { return alphabet_; }
  const Matrix& image(words::Letter l) const { return images_[l]; }
  const Matrix& image_lo(words::Letter l) const { return images_lo_[l]; }
  double log_det_image(words::Letter l) const { return log_dets_[l]; }

  Representation scaled(double factor) const;  // every image times factor

  // functor internals: images given as hi + lo pairs
  static Representation with_tails(words::Alphabet alphabet, int degree,
                                   std::vector<Matrix> hi, std::vector<Matrix> lo);

 private:
  struct RawTag {};
  Representation(RawTag, words::Alphabet alphabet, int degree, std::vector<Matrix> images);
  void finish_init();

  words::Alphabet alphabet_;
  int degree_;
  std::vector<Matrix> images_;
  std::vector<Matrix> images_lo_;
  std::vector<double> log_dets_;
};

ScaledMatrix evaluate(const Representation& rep, const words::Word& w);

// log singular values / log eigenvalue moduli, descending, absolute
// (log_scale included).  Direct Eigen decompositions: accurate for moderate
// spectral spreads; gap scans use the compound ladder in gapscan.hpp instead.
std::vector<double> singular_values(const ScaledMatrix& g);
std::vector<double> eigen_moduli(const ScaledMatrix& g);

// representation functors
struct FunctorSpec {
  enum class Kind { DirectSumTrivial, SymPower, ExteriorSquare };
  Kind kind;
  int k = 1;  // block size / symmetric power
};
Representation apply_functor(const Representation& rep, const FunctorSpec& f);

Representation direct_sum_trivial(const Representation& rep, int k);
Representation sym_power(const Representation& rep, int k);  // degree 2 input
Representation exterior_square(const Representation& rep);

// k-th compound: rows/cols indexed by k-subsets in lexicographic order,
// entries the k x k minors.  exterior_power(m, 1) = m.
Matrix exterior_power(const Matrix& m, int k);
// compound of a hi+lo image pair, returned as a hi+lo pair
std::pair<Matrix, Matrix> exterior_power_dd(const Matrix& hi, const Matrix& lo, int k);
Eigen::VectorXd wedge2(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

}  // namespace anosov::matgap
