#include "anosovlab/matgap.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <tuple>

#include "anosovlab/errors.hpp"

namespace anosov::matgap {

namespace {

double sup_norm(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

void check_finite(const Matrix& m, const char* where) {
  if (!m.allFinite()) throw NumericError(std::string(where) + ": non-finite entries");
}

}  // namespace

namespace {

// compensated dot products for the minor determinants: entries of compound
// matrices can be many orders below the products that cancel to form them,
// and eigenvalue data of compound products is sensitive to such garbage
struct Wide {
  double hi = 0.0, lo = 0.0;
};

inline Wide wide_two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline Wide wide_two_prod(double a, double b) {
  const double p = a * b;
  constexpr double split = 134217729.0;  // 2^27 + 1
  const double ca = split * a;
  const double ahi = ca - (ca - a), alo = a - ahi;
  const double cb = split * b;
  const double bhi = cb - (cb - b), blo = b - bhi;
  return {p, ((ahi * bhi - p) + ahi * blo + alo * bhi) + alo * blo};
}

inline Wide wide_add(Wide a, Wide b) {
  Wide s = wide_two_sum(a.hi, b.hi);
  const double lo = s.lo + a.lo + b.lo;
  const double hi = s.hi + lo;
  return {hi, lo - (hi - s.hi)};
}

inline Wide wide_mul_d(Wide a, double b) {
  Wide p = wide_two_prod(a.hi, b);
  const double lo = p.lo + a.lo * b;
  const double hi = p.hi + lo;
  return {hi, lo - (hi - p.hi)};
}

inline Wide wide_mul(Wide a, Wide b) {
  Wide p = wide_two_prod(a.hi, b.hi);
  const double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
  const double hi = p.hi + lo;
  return {hi, lo - (hi - p.hi)};
}

// determinant of a k x k minor by signed permutation expansion over hi+lo
// entry pairs, accumulated in double-double (k <= 5, so few terms)
Wide minor_det_wide(const Matrix& hi, const Matrix* lo, const std::vector<int>& rows,
                    const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  auto entry = [&](int i, int j) {
    return Wide{hi(rows[i], cols[j]), lo ? (*lo)(rows[i], cols[j]) : 0.0};
  };
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  Wide acc{0.0, 0.0};
  do {
    int inversions = 0;
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Wide term{inversions % 2 ? -1.0 : 1.0, 0.0};
    for (int i = 0; i < k; ++i) term = wide_mul(term, entry(i, perm[i]));
    acc = wide_add(acc, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

}  // namespace

ScaledMatrix ScaledMatrix::identity(int d) {
  return ScaledMatrix{Matrix::Identity(d, d), 0.0};
}

ScaledMatrix ScaledMatrix::from(const Matrix& m) {
  ScaledMatrix out{m, 0.0};
  out.renormalize();
  return out;
}

void ScaledMatrix::renormalize() {
  check_finite(mat, "ScaledMatrix");
  const double n = sup_norm(mat);
  if (n <= 0.0) throw NumericError("ScaledMatrix: zero matrix");
  if (n < 0.5 || n > 2.0) {
    mat /= n;
    log_scale += std::log(n);
  }
}

ScaledMatrix ScaledMatrix::rmul(const Matrix& rhs) const {
  ScaledMatrix out{mat * rhs, log_scale};
  out.renormalize();
  return out;
}

ScaledMatrix ScaledMatrix::operator*(const ScaledMatrix& rhs) const {
  ScaledMatrix out{mat * rhs.mat, log_scale + rhs.log_scale};
  out.renormalize();
  return out;
}

Matrix ScaledMatrix::dense() const { return std::exp(log_scale) * mat; }

Representation::Representation(words::Alphabet alphabet, int degree,
                               const std::map<std::string, Matrix>& generator_images)
    : alphabet_(std::move(alphabet)), degree_(degree) {
  if (degree_ < 1) throw InputError("representation: degree must be >= 1");
  images_.assign(alphabet_.size(), Matrix());
  images_lo_.assign(alphabet_.size(), Matrix::Zero(degree_, degree_));
  std::vector<bool> seen(alphabet_.size(), false);
  for (const auto& [name, m] : generator_images) {
    const words::Letter l = alphabet_.parse_letter(name);
    if (m.rows() != degree_ || m.cols() != degree_)
      throw InputError("representation: image of " + name + " has wrong shape");
    check_finite(m, "representation");
    images_[l] = m;
    seen[l] = true;
  }
  for (int l = 0; l < alphabet_.size(); ++l) {
    const words::Letter il = alphabet_.inv(static_cast<words::Letter>(l));
    if (!seen[l] && seen[il]) {
      const Matrix& m = images_[il];
      if (degree_ == 2) {
        // adjugate over determinant: entrywise exact for unimodular input
        Matrix inv(2, 2);
        inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
        images_[l] = inv / m.determinant();
      } else {
        images_[l] = m.inverse();
      }
      seen[l] = true;
    }
  }
  for (int l = 0; l < alphabet_.size(); ++l) {
    if (!seen[l]) throw InputError("representation: missing image for " + alphabet_.name(l));
    const words::Letter il = alphabet_.inv(static_cast<words::Letter>(l));
    const double res = (images_[l] * images_[il] - Matrix::Identity(degree_, degree_))
                           .cwiseAbs()
                           .maxCoeff();
    // the product of exact inverses already carries roundoff of order
    // eps * |A| * |A^-1|; the tolerance keeps pace with that floor
    const double floor = 64.0 * 1.1e-16 * images_[l].cwiseAbs().maxCoeff() *
                         images_[il].cwiseAbs().maxCoeff() * degree_;
    if (res > std::max(1e-10, floor))
      throw InputError("representation: image(g)*image(g^-1) != I for " + alphabet_.name(l));
  }
  finish_init();
}

Representation::Representation(RawTag, words::Alphabet alphabet, int degree,
                               std::vector<Matrix> images)
    : alphabet_(std::move(alphabet)), degree_(degree), images_(std::move(images)) {
  images_lo_.assign(images_.size(), Matrix::Zero(degree_, degree_));
  finish_init();
}

Representation Representation::with_tails(words::Alphabet alphabet, int degree,
                                          std::vector<Matrix> hi, std::vector<Matrix> lo) {
  Representation out(RawTag{}, std::move(alphabet), degree, std::move(hi));
  out.images_lo_ = std::move(lo);
  return out;
}

void Representation::finish_init() {
  log_dets_.resize(images_.size());
  for (std::size_t l = 0; l < images_.size(); ++l)
    log_dets_[l] = std::log(std::abs(images_[l].determinant()));
}

Representation Representation::scaled(double factor) const {
  if (factor <= 0.0) throw InputError("scaled: factor must be positive");
  std::vector<Matrix> images = images_;
  std::vector<Matrix> lo = images_lo_;
  for (std::size_t l = 0; l < images.size(); ++l) {
    // keep image(g)*image(g^-1) = I: scale letter by f, inverse letter by 1/f;
    // the scaling itself is carried to double-double so spectral quantities
    // shift exactly
    const bool primary = l < alphabet_.inv(static_cast<words::Letter>(l));
    const double f = primary ? factor : 1.0 / factor;
    for (int r = 0; r < degree_; ++r)
      for (int c = 0; c < degree_; ++c) {
        Wide p = wide_two_prod(images[l](r, c), f);
        p = wide_add(p, Wide{lo[l](r, c) * f, 0.0});
        images[l](r, c) = p.hi;
        lo[l](r, c) = p.lo;
      }
  }
  return Representation::with_tails(alphabet_, degree_, std::move(images), std::move(lo));
}

ScaledMatrix evaluate(const Representation& rep, const words::Word& w) {
  ScaledMatrix g = ScaledMatrix::identity(rep.degree());
  for (words::Letter l : w.letters) {
    if (l >= rep.alphabet().size()) throw InputError("evaluate: letter out of range");
    g = g.rmul(rep.image(l));
  }
  return g;
}

std::vector<double> singular_values(const ScaledMatrix& g) {
  check_finite(g.mat, "singular_values");
  Eigen::JacobiSVD<Matrix> svd(g.mat);
  std::vector<double> out(g.dim());
  for (int i = 0; i < g.dim(); ++i) out[i] = std::log(svd.singularValues()[i]) + g.log_scale;
  return out;
}

std::vector<double> eigen_moduli(const ScaledMatrix& g) {
  check_finite(g.mat, "eigen_moduli");
  Eigen::EigenSolver<Matrix> es(g.mat, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw NumericError("eigen_moduli: iteration failed");
  std::vector<double> out(g.dim());
  for (int i = 0; i < g.dim(); ++i) out[i] = std::log(std::abs(es.eigenvalues()[i])) + g.log_scale;
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

namespace {

std::vector<std::vector<int>> subsets_lex(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == d - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace

std::pair<Matrix, Matrix> exterior_power_dd(const Matrix& hi, const Matrix& lo, int k) {
  const int d = static_cast<int>(hi.rows());
  if (k < 0 || k > d) throw InputError("exterior_power: k out of range");
  if (k == 0) return {Matrix::Ones(1, 1), Matrix::Zero(1, 1)};
  if (k == 1) return {hi, lo};
  if (k > 5) throw InputError("exterior_power: k > 5 not supported");
  const bool has_lo = lo.size() > 0 && lo.cwiseAbs().maxCoeff() != 0.0;
  const auto subs = subsets_lex(d, k);
  const int n = static_cast<int>(subs.size());
  Matrix out_hi(n, n), out_lo(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const Wide v = minor_det_wide(hi, has_lo ? &lo : nullptr, subs[r], subs[c]);
      out_hi(r, c) = v.hi;
      out_lo(r, c) = v.lo;
    }
  return {out_hi, out_lo};
}

Matrix exterior_power(const Matrix& m, int k) {
  return exterior_power_dd(m, Matrix(), k).first;
}

Eigen::VectorXd wedge2(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  const int d = static_cast<int>(u.size());
  Eigen::VectorXd out(d * (d - 1) / 2);
  int idx = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) out[idx++] = u[i] * v[j] - u[j] * v[i];
  return out;
}

Representation direct_sum_trivial(const Representation& rep, int k) {
  if (k < 1) throw InputError("direct_sum_trivial: k must be >= 1");
  const int d = rep.degree();
  const auto& a = rep.alphabet();
  std::vector<Matrix> hi(a.size()), lo(a.size());
  for (words::Letter l = 0; l < a.size(); ++l) {
    hi[l] = Matrix::Identity(d + k, d + k);
    hi[l].topLeftCorner(d, d) = rep.image(l);
    lo[l] = Matrix::Zero(d + k, d + k);
    lo[l].topLeftCorner(d, d) = rep.image_lo(l);
  }
  return Representation::with_tails(a, d + k, std::move(hi), std::move(lo));
}

Representation sym_power(const Representation& rep, int k) {
  if (rep.degree() != 2) throw InputError("sym_power: only degree-2 input supported");
  if (k < 1) throw InputError("sym_power: k must be >= 1");
  // basis x^{k-i} y^i; column i of Sym^k(m) = coefficients of (ax+cy)^{k-i}(bx+dy)^i,
  // expanded with compensated arithmetic and kept as hi+lo pairs (the
  // coefficients cancel for strongly hyperbolic images and eigenvalue data of
  // long products feels even the f64 rounding of the images)
  const auto& alphabet = rep.alphabet();
  std::vector<Matrix> hi_out(alphabet.size()), lo_out(alphabet.size());
  for (words::Letter l = 0; l < alphabet.size(); ++l) {
    const Matrix& m = rep.image(l);
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    Matrix hi = Matrix::Zero(k + 1, k + 1), lo = Matrix::Zero(k + 1, k + 1);
    for (int i = 0; i <= k; ++i) {
      std::vector<Wide> poly(k + 1, Wide{0.0, 0.0});  // coefficients in y-degree
      poly[0] = {1.0, 0.0};
      auto mul_linear = [&](double x_coef, double y_coef, int times) {
        for (int t = 0; t < times; ++t) {
          std::vector<Wide> nxt(k + 1, Wide{0.0, 0.0});
          for (int p = 0; p <= k; ++p) {
            nxt[p] = wide_add(nxt[p], wide_mul_d(poly[p], x_coef));
            if (p + 1 <= k) nxt[p + 1] = wide_add(nxt[p + 1], wide_mul_d(poly[p], y_coef));
          }
          poly.swap(nxt);
        }
      };
      mul_linear(a, c, k - i);
      mul_linear(b, d, i);
      for (int j = 0; j <= k; ++j) {
        hi(j, i) = poly[j].hi;
        lo(j, i) = poly[j].lo;
      }
    }
    hi_out[l] = std::move(hi);
    lo_out[l] = std::move(lo);
  }
  return Representation::with_tails(alphabet, k + 1, std::move(hi_out), std::move(lo_out));
}

Representation exterior_square(const Representation& rep) {
  const int d = rep.degree();
  if (d < 2) throw InputError("exterior_square: degree must be >= 2");
  const auto& a = rep.alphabet();
  std::vector<Matrix> hi(a.size()), lo(a.size());
  for (words::Letter l = 0; l < a.size(); ++l)
    std::tie(hi[l], lo[l]) = exterior_power_dd(rep.image(l), rep.image_lo(l), 2);
  return Representation::with_tails(a, d * (d - 1) / 2, std::move(hi), std::move(lo));
}

Representation apply_functor(const Representation& rep, const FunctorSpec& f) {
  switch (f.kind) {
    case FunctorSpec::Kind::DirectSumTrivial:
      return direct_sum_trivial(rep, f.k);
    case FunctorSpec::Kind::SymPower:
      return sym_power(rep, f.k);
    case FunctorSpec::Kind::ExteriorSquare:
      return exterior_square(rep);
  }
  throw InputError("apply_functor: unknown functor");
}

}  // namespace anosov::matgap
