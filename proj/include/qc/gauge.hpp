#ifndef QC_GAUGE_HPP
#define QC_GAUGE_HPP

#include "qc/quasichar.hpp"

#include <Eigen/Dense>

namespace qc {

// Lattice data after tree gauge fixing: the caller supplies the number of
// off-tree links and the plaquette words directly (signed link indices,
// negative = reversed orientation).
struct LatticeModel {
  int n_links = 1;
  std::vector<std::vector<int>> plaquettes;
  double g = 1.0;     // coupling
  double delta = 1.0; // lattice spacing

  void validate() const;
};

// Truncated eigenproblem data: Casimir diagonal plus symmetrized Wilson
// coupling matrix over the quasicharacter basis with spin cutoff.
struct SpectralProblem {
  std::vector<QuasicharIndex> basis;
  std::vector<Rational> casimir_diag;
  Eigen::MatrixXd wilson; // symmetrized structure-constant couplings
  Eigen::MatrixXd hamiltonian;
  long dropped_couplings = 0; // couplings leaving the spin cutoff
};

// total Casimir eigenvalue sum_r 4 j^r (j^r + 1)
Rational casimir_total(const std::vector<HalfInt>& leaves);

// Expansion of the Wilson operator sum_p (W(p) + W(p)*) in the modified
// quasicharacter basis, truncated to vertex spins <= jmax. On SU(2) the
// fundamental trace is real, so W(p) + W(p)* = 2 tr(holonomy).
QuasicharExpansion wilson_coefficients(const LatticeModel& model, const CouplingTree& t,
                                       HalfInt jmax);

// H_{KJ} = (g^2/2 delta) eps_J delta_J^K - (1/g^2 delta) sum_I W^I (C_{IJ}^K + C_{IK}^J)
// over the real orthonormal quasicharacter basis with hard spin cutoff.
SpectralProblem assemble_hamiltonian(const LatticeModel& model, const CouplingTree& t, HalfInt jmax);

struct Spectrum {
  Eigen::VectorXd eigenvalues; // ascending
  Eigen::MatrixXd eigenvectors;
};

Spectrum spectrum(const SpectralProblem& sp, int dimension_cap = 4000);

// Matrix of the N=2 stratum-relation multiplication operator from the
// closed 6j-symbol formula; rows are source indices, columns targets, in
// the order of n2_triples(jmax). Entries vanish unless (1, j^1, j'^1),
// (1, j^2, j'^2) and (1, j, j') form triads.
struct N2Triple {
  HalfInt j1, j2, j;
};
std::vector<N2Triple> n2_triples(HalfInt jmax);

Eigen::MatrixXd stratum_operator_su2_n2(const NormParams& p, HalfInt jmax);

// the same basis as quasichar indices on the cherry, for cross-checks
std::vector<QuasicharIndex> n2_basis(HalfInt jmax);

} // namespace qc

#endif
