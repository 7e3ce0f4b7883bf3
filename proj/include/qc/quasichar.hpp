#ifndef QC_QUASICHAR_HPP
#define QC_QUASICHAR_HPP

#include "qc/coupling.hpp"
#include "qc/trace_poly.hpp"

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <vector>

namespace qc {

// Basis invariant chi(T)^{alpha}_{alpha'} named by a coupling tree and two
// combinable labellings (same leaf labelling, same root spin).
struct QuasicharIndex {
  CouplingTree tree;
  SpinLabelling alpha;
  SpinLabelling alpha_prime;

  HalfInt root_spin() const { return alpha[tree.root()]; }
  std::vector<HalfInt> leaves() const { return leaf_spins(tree, alpha); }
  bool is_trivial() const; // all labels zero: the unit of the algebra
};

QuasicharIndex make_quasichar(const CouplingTree& tree, const SpinLabelling& alpha,
                              const SpinLabelling& alpha_prime);

// ordering ignores the tree (all indices in one computation share it)
struct QuasicharOrder {
  bool operator()(const QuasicharIndex& a, const QuasicharIndex& b) const;
};

using QuasicharExpansion = std::map<QuasicharIndex, SurdSum, QuasicharOrder>;

// scaling parameters of the holomorphic inner product
struct NormParams {
  double hbar = 1.0;
  double beta = 1.0;
};

// modified quasicharacter evaluated at group points, one per link
std::complex<double> evaluate(const QuasicharIndex& q, const std::vector<Su2Element>& points);

// norm of the modified holomorphic quasicharacter:
// norm^2 = (hbar pi)^{3N/2} * (d_j / prod_r d_{j^r}) * exp(hbar beta^2 sum_r d_{j^r}^2)
double norm(const QuasicharIndex& q, const NormParams& p);

// conversion factor between the modified and the L2-orthonormal basis:
// chi_I = sqrt(prod_r d_{j^r} / d_j) * chi_hat_I
double orthonormal_factor(const QuasicharIndex& q);

// Structure constants of the invariant algebra: the expansion of q1*q2 in
// the quasicharacter basis of the shared tree. Coefficients are products
// of two factorized recoupling coefficients R(T), exact.
QuasicharExpansion structure_constants(const QuasicharIndex& q1, const QuasicharIndex& q2);

// N=1 multiplication law: multiplicities of chi_j in the product of
// ordinary characters by iterated triangle-rule convolution
std::map<HalfInt, long> character_product(const std::vector<HalfInt>& spins);

// Exact expansion of an invariant trace polynomial in the modified
// quasicharacter basis on tree t (finitely supported, no truncation).
QuasicharExpansion expand_invariant(const TracePolynomial& p, int n_links, const CouplingTree& t);

// Matrix of the multiplication operator given by op_expansion over the
// basis list: entry (s, t) is the coefficient of basis[t] in the image of
// basis[s], i.e. sum_I e_I * C_{I,s}^t * norm(t)/norm(s).
Eigen::MatrixXd matrix_elements(const QuasicharExpansion& op_expansion,
                                const std::vector<QuasicharIndex>& basis, const NormParams& p);

// all quasichar indices on t with every vertex spin <= jmax, deterministic order
std::vector<QuasicharIndex> basis_up_to(const CouplingTree& t, HalfInt jmax);

} // namespace qc

#endif
