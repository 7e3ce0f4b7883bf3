#ifndef QC_SU2_HPP
#define QC_SU2_HPP

#include "qc/half_int.hpp"
#include "qc/surd.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <vector>

namespace qc {

// Group element in Cayley-Klein form [[alpha, beta], [-conj(beta), conj(alpha)]].
struct Su2Element {
  std::complex<double> alpha{1.0, 0.0};
  std::complex<double> beta{0.0, 0.0};

  Eigen::Matrix2cd matrix() const {
    Eigen::Matrix2cd m;
    m << alpha, beta, -std::conj(beta), std::conj(alpha);
    return m;
  }
  Su2Element inverse() const { return {std::conj(alpha), -beta}; }
  Su2Element operator*(const Su2Element& o) const {
    return {alpha * o.alpha - beta * std::conj(o.beta), alpha * o.beta + beta * std::conj(o.alpha)};
  }
  bool is_unitary(double tol = 1e-12) const {
    return std::abs(std::norm(alpha) + std::norm(beta) - 1.0) < tol;
  }
};

// 3x3 array of spins for 9j / 9-lambda symbols, rows[i][k]
using NineJ = std::array<std::array<HalfInt, 3>, 3>;

// Clebsch-Gordan series <j1, j2> = {|j1-j2|, ..., j1+j2}, ascending
std::vector<HalfInt> clebsch_series(HalfInt j1, HalfInt j2);

// Condon-Shortley Clebsch-Gordan coefficient C^{j1 j2 j}_{m1 m2 m}.
// Zero when m1+m2 != m or j is not in <j1, j2>.
SurdSum cg(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt j, HalfInt m);

// Wigner 6j symbol {j1 j2 j3; j4 j5 j6} via the Racah single-sum form;
// zero when any of the four triads violates the triangle condition
SurdSum wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6);

// Wigner 9j symbol as the single sum over products of three 6j symbols
SurdSum wigner9j(const NineJ& rows);

// 9-lambda symbol: sqrt(d_{j1} d_{j2} d_{j3^1} d_{j3^2}) * 9j, with the
// dimension factors read off the root entries of rows 1, 2 and the first
// two entries of row 3
SurdSum nine_lambda_su2(const NineJ& rows);

// Reduction of a 9j with leading zero row entry,
// {0 k k; j1 j2 j; j1' j2' j'}, to a 6j symbol
SurdSum wigner9j_zero_reduction(HalfInt k, HalfInt j1, HalfInt j2, HalfInt j,
                                HalfInt j1p, HalfInt j2p, HalfInt jp);

// Wigner D-matrix of spin j at a group element, ladder basis ordered by
// descending m (row/column 0 is m = +j). D^{1/2} is the matrix itself.
Eigen::MatrixXcd wigner_d(HalfInt j, const Su2Element& a);

// Casimir eigenvalue 4 j (j+1)
Rational casimir_eigenvalue(HalfInt j);

// Clears the 6j/9j memo caches (mainly for benchmarks and tests).
void clear_symbol_caches();

} // namespace qc

#endif
