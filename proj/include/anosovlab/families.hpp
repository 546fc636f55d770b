#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "anosovlab/matgap.hpp"
#include "anosovlab/models.hpp"

namespace anosov::families {

struct FuchsianFamily {
  matgap::Representation rep;  // degree 2
  models::ModelSpace model;
};

// Genus-2 surface group from the regular hyperbolic octagon: side-pairing
// translations of length 2 arccosh(1 + sqrt 2) along geodesics through the
// basepoint at angles k pi/4, converted to commutator generators
// a1, b1, a2, b2 with [a1,b1][a2,b2] = I.  Construction self-checks (relator
// residual < 1e-8, all cyclically reduced words of length <= 6 hyperbolic)
// run once and throw NumericError on failure.
FuchsianFamily fuchsian_octagon();

// Free(2) Schottky pair g1 = diag(lambda, 1/lambda) and its conjugate by the
// 45-degree rotation, with the Cayley-tree model.  Requires lambda >= 3.
FuchsianFamily schottky(double lambda);

struct FamilyParams {
  double s = 1.0;
  double t = 0.1;
  Eigen::Matrix2d X = Eigen::Matrix2d::Identity();
};

// The SL_4 deformation family: block upper-triangular over rho1 with the
// unipotent psi_{2,t} block (a1 -> J_t) and coupling blocks s*X on b1 and
// X_{s,t} on b2 chosen so that the surface relator maps to I_4.
matgap::Representation family_st(const FuchsianFamily& fuchsian, const FamilyParams& p);

struct NamedRep {
  std::string name;
  matgap::Representation rep;
  double expected_alpha;
  double expected_beta;
};

// Functor-derived examples over rho1: Sym3 (degree 4, alpha = beta = 1) and
// trivial direct sums (alpha = beta = 1/2).
std::vector<NamedRep> derived_examples(const FuchsianFamily& fuchsian);

}  // namespace anosov::families
