#pragma once

#include <map>
#include <vector>

#include "joycekit/errors.hpp"
#include "joycekit/rational.hpp"

namespace joycekit {

// Integral charge lattice presented in the basis of a simplicial positive
// cone.  pairing[i][j] is the antisymmetric integer pairing of the i-th and
// j-th generators; sign[i] is a quadratic refinement value (+1 or -1) on the
// i-th generator, extended to the whole lattice multiplicatively with the
// parity twist (-1)^{pairing}.
struct ChargeLattice {
  int rank = 0;
  std::vector<std::vector<long long>> pairing;
  std::vector<int> sign;
};

// Validates shape, antisymmetry, and sign entries.
ChargeLattice make_lattice(std::vector<std::vector<long long>> pairing,
                           std::vector<int> sign);

long long pair_charges(const ChargeLattice& L, const std::vector<int>& a,
                       const std::vector<int>& b);

// Quadratic refinement extended off the generators:
// sign(sum a_i e_i) = prod sign_i^{a_i} * (-1)^{sum_{i<j} a_i a_j <e_i,e_j>}.
int sign_of_charge(const ChargeLattice& L, const std::vector<int>& gamma);

// Truncated series on the cone monoid: monomials X^alpha with alpha
// componentwise nonnegative and total degree <= trunc, exact rational
// coefficients.  Zero coefficients are never stored.
struct ConeSeries {
  int rank = 0;
  int trunc = 0;
  std::map<std::vector<int>, Rational> coef;
};

ConeSeries cone_one(int rank, int trunc);
ConeSeries cone_monomial(int rank, int trunc, const std::vector<int>& alpha,
                         const Rational& c);
ConeSeries cs_add(const ConeSeries& a, const ConeSeries& b);
ConeSeries cs_sub(const ConeSeries& a, const ConeSeries& b);
ConeSeries cs_mul(const ConeSeries& a, const ConeSeries& b);
ConeSeries cs_scale(const ConeSeries& a, const Rational& c);
// Integer power; negative exponents require an invertible constant term.
ConeSeries cs_pow(const ConeSeries& a, long long k);
ConeSeries cs_inverse(const ConeSeries& a);
Rational cs_coeff(const ConeSeries& a, const std::vector<int>& alpha);
Rational cs_max_abs(const ConeSeries& a);

// Algebra automorphism of the truncated torus algebra, stored through the
// images of the basis characters: X_{e_i} maps to X_{e_i} * image[i], where
// image[i] has an invertible constant term.
struct TorusAutomorphism {
  int rank = 0;
  int trunc = 0;
  std::vector<ConeSeries> image;
};

TorusAutomorphism identity_automorphism(int rank, int trunc);

// X_mu maps to X_mu * (1 + w X^gamma)^{omega <gamma, mu>}.  gamma must be a
// nonzero cone charge (componentwise nonnegative); throws ConeViolation
// otherwise and TruncationTooSmall for trunc < 1.
TorusAutomorphism weighted_wall(const ChargeLattice& L, const Rational& w,
                                const std::vector<int>& gamma, long long omega,
                                int trunc);

// weighted_wall with the canonical weight -sign_of_charge(L, gamma); the
// minus makes the weight multiplicative across charges with odd pairing.
TorusAutomorphism wall_automorphism(const ChargeLattice& L,
                                    const std::vector<int>& gamma,
                                    long long omega, int trunc);

// X_mu maps to lambda^mu X_mu; every lambda_i must be nonzero.
TorusAutomorphism torus_shift(const std::vector<Rational>& lambda, int trunc);

// Series factor of the image of X^mu, i.e. the series S with
// f(X^mu) = X^mu * S.  Negative components of mu go through series inversion.
ConeSeries apply_to_character(const TorusAutomorphism& f,
                              const std::vector<int>& mu);

// Function composition: compose(f, g) acts by applying g first, then f.
TorusAutomorphism compose(const TorusAutomorphism& f,
                          const TorusAutomorphism& g);

bool same_automorphism(const TorusAutomorphism& a, const TorusAutomorphism& b);
// Largest absolute coefficient difference across all basis-character images.
Rational automorphism_defect(const TorusAutomorphism& a,
                             const TorusAutomorphism& b);

// Largest absolute coefficient of {f(X_mu), f(X_nu)} - <mu,nu> f(X_{mu+nu})
// relative to the common monomial prefix, with {X_a, X_b} = <a,b> X_{a+b}.
// Exactly zero for bracket-preserving automorphisms.
Rational poisson_defect(const ChargeLattice& L, const TorusAutomorphism& f,
                        const std::vector<int>& mu, const std::vector<int>& nu);

}  // namespace joycekit
