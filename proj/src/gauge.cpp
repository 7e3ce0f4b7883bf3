#include "qc/gauge.hpp"

#include <cmath>
#include <stdexcept>

namespace qc {

void LatticeModel::validate() const {
  if (n_links < 1) throw std::domain_error("model needs at least one link");
  if (g <= 0 || delta <= 0) throw std::domain_error("coupling and spacing must be positive");
  for (const auto& p : plaquettes) {
    if (p.empty()) throw std::domain_error("empty plaquette word");
    for (int l : p)
      if (l == 0 || std::abs(l) > n_links)
        throw std::domain_error("plaquette link index out of range");
  }
}

Rational casimir_total(const std::vector<HalfInt>& leaves) {
  Rational acc(0);
  for (HalfInt j : leaves) acc += casimir_eigenvalue(j);
  return acc;
}

QuasicharExpansion wilson_coefficients(const LatticeModel& model, const CouplingTree& t,
                                       HalfInt jmax) {
  model.validate();
  TracePolynomial w;
  for (const auto& p : model.plaquettes) {
    TraceWord word;
    for (int l : p) word.factors.emplace_back(std::abs(l), l > 0 ? 1 : -1);
    // W(p) + W(p)^* = 2 tr(holonomy): fundamental SU(2) traces are real
    w.add(Rational(2), word);
  }
  QuasicharExpansion full = expand_invariant(w, model.n_links, t);
  for (auto it = full.begin(); it != full.end();) {
    bool beyond = false;
    for (HalfInt v : it->first.alpha) beyond = beyond || v > jmax;
    for (HalfInt v : it->first.alpha_prime) beyond = beyond || v > jmax;
    it = beyond ? full.erase(it) : std::next(it);
  }
  return full;
}

SpectralProblem assemble_hamiltonian(const LatticeModel& model, const CouplingTree& t, HalfInt jmax) {
  model.validate();
  SpectralProblem sp;
  sp.basis = basis_up_to(t, jmax);
  if (sp.basis.empty()) throw std::domain_error("empty basis at the requested cutoff");
  const Eigen::Index n = Eigen::Index(sp.basis.size());

  std::map<QuasicharIndex, Eigen::Index, QuasicharOrder> position;
  for (Eigen::Index i = 0; i < n; ++i) position[sp.basis[std::size_t(i)]] = i;

  sp.casimir_diag.reserve(sp.basis.size());
  for (const auto& q : sp.basis) sp.casimir_diag.push_back(casimir_total(q.leaves()));

  // Wilson coefficients W^I and structure constants C_{IJ}^K in the real
  // orthonormal basis chi_I = orthonormal_factor(I) * chi_hat_I.
  const QuasicharExpansion what = wilson_coefficients(model, t, jmax);

  Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [op_index, coeff_hat] : what) {
    const double w_real = coeff_hat.to_double() / orthonormal_factor(op_index);
    const double c_i = orthonormal_factor(op_index);
    for (Eigen::Index jcol = 0; jcol < n; ++jcol) {
      const QuasicharIndex& qj = sp.basis[std::size_t(jcol)];
      if (op_index.is_trivial()) {
        // C_{IJ}^K = delta_J^K for the unit element
        couplings(jcol, jcol) += w_real * 2.0;
        continue;
      }
      const double c_j = orthonormal_factor(qj);
      for (const auto& [target, c_hat] : structure_constants(op_index, qj)) {
        auto it = position.find(target);
        if (it == position.end()) {
          ++sp.dropped_couplings;
          continue;
        }
        const double c_k = orthonormal_factor(target);
        const double c_real = c_hat.to_double() * c_i * c_j / c_k;
        // W^I (C_{IJ}^K + C_{IK}^J), assembled symmetrically
        couplings(it->second, jcol) += w_real * c_real;
        couplings(jcol, it->second) += w_real * c_real;
      }
    }
  }
  sp.wilson = couplings;

  const double g2 = model.g * model.g;
  sp.hamiltonian = -(1.0 / (g2 * model.delta)) * couplings;
  for (Eigen::Index i = 0; i < n; ++i)
    sp.hamiltonian(i, i) += (g2 / (2.0 * model.delta)) * to_double(sp.casimir_diag[std::size_t(i)]);
  return sp;
}

Spectrum spectrum(const SpectralProblem& sp, int dimension_cap) {
  if (sp.hamiltonian.rows() > dimension_cap)
    throw std::runtime_error("matrix dimension exceeds the eigensolver cap");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sp.hamiltonian);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

std::vector<N2Triple> n2_triples(HalfInt jmax) {
  std::vector<N2Triple> out;
  for (int a = 0; a <= jmax.twice(); ++a)
    for (int b = 0; b <= jmax.twice(); ++b) {
      const HalfInt j1 = HalfInt::from_twice(a), j2 = HalfInt::from_twice(b);
      for (HalfInt j : clebsch_series(j1, j2)) {
        if (j > jmax) continue;
        out.push_back({j1, j2, j});
      }
    }
  return out;
}

std::vector<QuasicharIndex> n2_basis(HalfInt jmax) {
  const CouplingTree cherry = CouplingTree::cherry();
  std::vector<QuasicharIndex> out;
  for (const auto& tr : n2_triples(jmax)) {
    const SpinLabelling lab{tr.j1, tr.j2, tr.j};
    out.push_back(QuasicharIndex{cherry, lab, lab});
  }
  return out;
}

namespace {

double sixj_sq(HalfInt a, HalfInt b, HalfInt c, HalfInt d, HalfInt e, HalfInt f) {
  const SurdSum s = wigner6j(a, b, c, d, e, f);
  const double v = s.to_double();
  return v * v;
}

} // namespace

Eigen::MatrixXd stratum_operator_su2_n2(const NormParams& p, HalfInt jmax) {
  if (p.hbar <= 0 || p.beta <= 0) throw std::domain_error("norm parameters must be positive");
  const auto triples = n2_triples(jmax);
  const Eigen::Index n = Eigen::Index(triples.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  const HalfInt one(1);

  for (Eigen::Index s = 0; s < n; ++s) {
    // source (j^1, j^2, j), the multiplicand of the relation
    const HalfInt s1 = triples[std::size_t(s)].j1;
    const HalfInt s2 = triples[std::size_t(s)].j2;
    const HalfInt sj = triples[std::size_t(s)].j;
    for (Eigen::Index tt = 0; tt < n; ++tt) {
      // target (j'^1, j'^2, j'); each term below carries its own Kronecker
      // deltas and 6j/9j triangle constraints, which cut the support to
      // pairs whose slots are triad-linked by spin 1 or equal
      const HalfInt t1 = triples[std::size_t(tt)].j1;
      const HalfInt t2 = triples[std::size_t(tt)].j2;
      const HalfInt tj = triples[std::size_t(tt)].j;

      double bracket = 0.0;
      if (s2 == t2) bracket += dim(sj) * dim(t1) * sixj_sq(one, t1, s1, s2, sj, tj);
      if (s1 == t1) bracket += dim(sj) * dim(t2) * sixj_sq(one, tj, sj, s1, s2, t2);
      if (sj == tj) bracket += dim(t1) * dim(t2) * sixj_sq(one, t2, s2, sj, s1, t1);
      {
        const NineJ rows{{{one, one, one}, {s1, s2, sj}, {t1, t2, tj}}};
        const double nj = wigner9j(rows).to_double();
        bracket -= 6.0 * dim(sj) * dim(t1) * dim(t2) * nj * nj;
      }
      if (s1 == t1 && s2 == t2 && sj == tj) bracket -= 3.0;
      if (bracket == 0.0) continue;

      // norm(target) / norm(source) in the normalized-basis convention
      const double ratio =
          std::sqrt(double(dim(tj)) * dim(s1) * dim(s2) / (double(dim(t1)) * dim(t2) * dim(sj))) *
          std::exp(p.hbar * p.beta * p.beta *
                   (double(dim(t1)) * dim(t1) + double(dim(t2)) * dim(t2) -
                    double(dim(s1)) * dim(s1) - double(dim(s2)) * dim(s2)) /
                   2.0);
      out(s, tt) = ratio * bracket;
    }
  }
  return out;
}

} // namespace qc
