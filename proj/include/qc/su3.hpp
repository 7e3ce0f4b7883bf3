#ifndef QC_SU3_HPP
#define QC_SU3_HPP

#include "qc/quasichar.hpp"
#include "qc/rational.hpp"
#include "qc/trace_poly.hpp"

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace qc::su3 {

// irrep by Dynkin labels
struct Irrep {
  int n = 0;
  int m = 0;
  friend auto operator<=>(const Irrep&, const Irrep&) = default;
  std::string str() const { return std::to_string(n) + std::to_string(m); }
};

long dim(const Irrep& r);
// Casimir-type exponent zeta_{n,m} = (2/3)((n+1)^2 + (m+1)^2 + (n+1)(m+1))
Rational zeta(const Irrep& r);

// Clebsch-Gordan series with multiplicities
std::map<Irrep, int> cg_series(const Irrep& r1, const Irrep& r2);

// weight label (Dynkin weight components, multiplicity counter)
struct WeightLabel {
  int w1 = 0;
  int w2 = 0;
  int counter = 1;
  friend auto operator<=>(const WeightLabel&, const WeightLabel&) = default;
  std::string str() const {
    return std::to_string(w1) + ":" + std::to_string(w2) + ":" + std::to_string(counter);
  }
};

// Numerically constructed unitary irrep: real matrices of the gl raising,
// lowering and Cartan operators in a deterministic orthonormal weight
// basis (weights descending lexicographically, ties by construction order).
class Rep {
public:
  enum Op { E12, E21, E23, E32, E13, E31, H1, H2, kOpCount };

  const Irrep& label() const { return label_; }
  long dimension() const { return long(op_[H1].rows()); }
  const Eigen::MatrixXd& op(Op o) const { return op_[o]; }
  const std::vector<WeightLabel>& weights() const { return weights_; }
  int weight_index(const WeightLabel& w) const; // -1 if absent

  // anti-hermitian image of i * sum_a coeff[a] * lambda_a / 2
  Eigen::MatrixXcd algebra_element(const std::array<double, 8>& coeff) const;
  // group element exp(algebra_element(coeff)); unitary
  Eigen::MatrixXcd group_element(const std::array<double, 8>& coeff) const;

private:
  friend std::shared_ptr<const Rep> build_irrep(const Irrep& r, long dim_cap);
  Irrep label_;
  std::array<Eigen::MatrixXd, kOpCount> op_;
  std::vector<WeightLabel> weights_;
};

// cached construction; throws when dim exceeds the cap
std::shared_ptr<const Rep> build_irrep(const Irrep& r, long dim_cap = 100);

// Isometric equivariant Clebsch-Gordan tensor for
// target (multiplicity sector k) inside r1 (x) r2. Coefficients are real;
// iota(mu1 * dim2 + mu2, nu) = C^{r1 r2 target, k}_{mu1 mu2 nu}.
struct CGTensor {
  Irrep r1, r2, target;
  int k = 1;
  Eigen::MatrixXd iota;
};

std::shared_ptr<const CGTensor> cg(const Irrep& r1, const Irrep& r2, const Irrep& target, int k = 1);

// CSV round trip: columns mu1,mu2,mu,k,re,im with weight labels "w1:w2:c".
std::string cg_to_csv(const CGTensor& t);
// Registers externally tabulated coefficients (same CSV layout) as the
// tensor used by all subsequent computations for that coupling.
void import_cg_csv(const std::string& csv_text);
void clear_cg_overrides();

// 9-lambda symbol by direct contraction of six CG tensors;
// rows[i] = (lambda_i^1, lambda_i^2, lambda_i) with root counters
// row_k[i], column counters (k1, k2, k). Zero when a required coupling is
// absent (full row/column property).
double nine_lambda(const std::array<std::array<Irrep, 3>, 3>& rows,
                   const std::array<int, 3>& row_k, const std::array<int, 3>& col_k,
                   int target_weight_index = 0);

// norm of the modified N=2 quasicharacter
double norm(const Irrep& r1, const Irrep& r2, const Irrep& root, const NormParams& p);

// quasicharacter label for N=2: (chi^{k_prime}_{k})_{r1 r2, root}
struct QuasicharKey {
  Irrep r1, r2, root;
  int k = 1;
  int k_prime = 1;
  friend auto operator<=>(const QuasicharKey&, const QuasicharKey&) = default;
  std::string str() const;
};

using Expansion = std::map<QuasicharKey, double>;

// numeric evaluation of the modified quasicharacter at two group points
std::complex<double> evaluate(const QuasicharKey& q, const std::array<double, 8>& a1,
                              const std::array<double, 8>& a2);

// Expansion of an invariant trace polynomial on two links (nonnegative
// exponents only) in the modified quasicharacter basis.
Expansion expand_invariant(const TracePolynomial& p);

// One row of the multiplication-operator matrix: coefficients of the image
// of the source basis element under multiplication by op_expansion.
Expansion operator_row(const Expansion& op_expansion, const QuasicharKey& source,
                       const NormParams& p);

// t1 = tr((a1 a2)^2), t2 = tr(a1^2 a2^2), r1 = t1 - t2
TracePolynomial t1_polynomial();
TracePolynomial t2_polynomial();
TracePolynomial r1_polynomial();

// the 15 orbit-type relations r1..r15 (only r1 is wired into the pipeline)
std::vector<TracePolynomial> stratum_relations();

// deterministic pseudo-random su(3) coefficients for group points
std::array<double, 8> random_algebra_coefficients(std::uint64_t seed, int index);

} // namespace qc::su3

#endif
