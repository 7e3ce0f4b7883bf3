#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qc/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace qc;

namespace {

HalfInt half(int twice) { return HalfInt::from_twice(twice); }

} // namespace

TEST_CASE("casimir totals") {
  CHECK(casimir_total({HalfInt(0), HalfInt(0)}) == Rational(0));
  CHECK(casimir_total({half(1)}) == Rational(3));
  CHECK(casimir_total({half(1), HalfInt(1)}) == Rational(11));
}

TEST_CASE("wilson coefficients") {
  // N = 1, single plaquette word (1): 2 tr(a) = 2 chi_{1/2}
  LatticeModel m1{1, {{1}}, 1.0, 1.0};
  const auto w1 = wilson_coefficients(m1, CouplingTree::leaf(), half(3));
  REQUIRE(w1.size() == 1);
  CHECK(w1.begin()->first.alpha == SpinLabelling{half(1)});
  CHECK(w1.begin()->second == SurdSum(Rational(2)));

  // empty plaquette list
  LatticeModel m0{2, {}, 1.0, 1.0};
  CHECK(wilson_coefficients(m0, CouplingTree::cherry(), half(3)).empty());

  // N = 2 plaquette (1 2 -1 -2): real coefficients, finite support
  LatticeModel m2{2, {{1, 2, -1, -2}}, 1.0, 1.0};
  const auto w2 = wilson_coefficients(m2, CouplingTree::cherry(), HalfInt(1));
  CHECK(!w2.empty());
  for (const auto& [k, v] : w2)
    for (HalfInt s : k.alpha) CHECK(s <= HalfInt(1));

  LatticeModel bad{2, {{3}}, 1.0, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("hamiltonian assembly: symmetry and the N=1 example") {
  LatticeModel model{1, {{1}}, 1.0, 1.0};
  const auto sp = assemble_hamiltonian(model, CouplingTree::leaf(), half(1));
  REQUIRE(sp.basis.size() == 2);
  CHECK(to_double(sp.casimir_diag[0]) == 0.0);
  CHECK(to_double(sp.casimir_diag[1]) == 3.0);
  CHECK(sp.hamiltonian(0, 0) == doctest::Approx(0.0));
  CHECK(sp.hamiltonian(1, 1) == doctest::Approx(1.5)); // 3 g^2 / (2 delta)
  CHECK(sp.hamiltonian(0, 1) != 0.0);
  CHECK((sp.hamiltonian - sp.hamiltonian.transpose()).norm() == 0.0);
  CHECK(sp.dropped_couplings > 0); // chi_1/2 couples out of the j <= 1/2 cutoff
}

TEST_CASE("strong coupling limit is Casimir dominated") {
  LatticeModel model{1, {{1}}, std::sqrt(1000.0), 1.0};
  const auto sp = assemble_hamiltonian(model, CouplingTree::leaf(), HalfInt(2));
  const auto spec = spectrum(sp);
  std::vector<double> casimir;
  for (const auto& c : sp.casimir_diag) casimir.push_back(500.0 * to_double(c));
  std::sort(casimir.begin(), casimir.end());
  REQUIRE(spec.eigenvalues.size() == Eigen::Index(casimir.size()));
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
    const double expected = casimir[std::size_t(i)];
    CHECK(std::abs(spec.eigenvalues(i) - expected) <= 0.01 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("spectrum: diagonal matrices, closed 2x2 form, residuals") {
  SpectralProblem diag;
  diag.hamiltonian = Eigen::MatrixXd::Zero(3, 3);
  diag.hamiltonian.diagonal() << 3.0, 1.0, 2.0;
  const auto s = spectrum(diag);
  CHECK(s.eigenvalues(0) == doctest::Approx(1.0));
  CHECK(s.eigenvalues(1) == doctest::Approx(2.0));
  CHECK(s.eigenvalues(2) == doctest::Approx(3.0));

  // [[0, w], [w, c]] has eigenvalues (c +- sqrt(c^2 + 4 w^2)) / 2
  SpectralProblem two;
  const double w = 0.7, c = 1.3;
  two.hamiltonian = Eigen::MatrixXd(2, 2);
  two.hamiltonian << 0.0, w, w, c;
  const auto s2 = spectrum(two);
  CHECK(s2.eigenvalues(0) == doctest::Approx((c - std::sqrt(c * c + 4 * w * w)) / 2));
  CHECK(s2.eigenvalues(1) == doctest::Approx((c + std::sqrt(c * c + 4 * w * w)) / 2));

  // residuals on a real assembled problem
  LatticeModel model{2, {{1, 2, -1, -2}}, 1.0, 1.0};
  const auto sp = assemble_hamiltonian(model, CouplingTree::cherry(), half(3));
  const auto spec = spectrum(sp);
  const double hnorm = sp.hamiltonian.norm();
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
    const Eigen::VectorXd r =
        sp.hamiltonian * spec.eigenvectors.col(i) - spec.eigenvalues(i) * spec.eigenvectors.col(i);
    CHECK(r.norm() < 1e-8 * hnorm);
  }

  SpectralProblem big;
  big.hamiltonian = Eigen::MatrixXd::Zero(10, 10);
  CHECK_THROWS_AS(spectrum(big, 5), std::runtime_error);
}

TEST_CASE("spectrum is invariant under basis reordering") {
  LatticeModel model{2, {{1, 2, -1, -2}}, 0.8, 1.2};
  const auto sp = assemble_hamiltonian(model, CouplingTree::cherry(), HalfInt(1));
  const Eigen::Index n = sp.hamiltonian.rows();
  // reverse-order permutation similarity
  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) perm(i, n - 1 - i) = 1.0;
  SpectralProblem reordered = sp;
  reordered.hamiltonian = perm * sp.hamiltonian * perm.transpose();
  const auto s1 = spectrum(sp), s2 = spectrum(reordered);
  for (Eigen::Index i = 0; i < n; ++i)
    CHECK(std::abs(s1.eigenvalues(i) - s2.eigenvalues(i)) < 1e-10);
}

TEST_CASE("stratum operator: triad support and two-path equivalence") {
  const NormParams p{1.0, 0.7};
  const HalfInt jmax = half(3);
  const auto triples = n2_triples(jmax);
  const Eigen::MatrixXd closed = stratum_operator_su2_n2(p, jmax);

  // path 2: structure-constant pipeline through the exact expansion
  const auto basis = n2_basis(jmax);
  REQUIRE(basis.size() == triples.size());
  const auto expansion = expand_invariant(su2_stratum_relation(), 2, CouplingTree::cherry());
  const Eigen::MatrixXd pipeline = matrix_elements(expansion, basis, p);

  REQUIRE(closed.rows() == pipeline.rows());
  CHECK((closed - pipeline).cwiseAbs().maxCoeff() < 1e-10);

  // vanishing pattern: every slot must be triad-linked by a spin-1 step or
  // carried by a Kronecker delta (equal labels)
  const HalfInt one(1);
  const auto slot_ok = [&](HalfInt a, HalfInt b) { return a == b || triangle(one, a, b); };
  for (std::size_t s = 0; s < triples.size(); ++s)
    for (std::size_t t = 0; t < triples.size(); ++t) {
      const bool supported = slot_ok(triples[s].j1, triples[t].j1) &&
                             slot_ok(triples[s].j2, triples[t].j2) &&
                             slot_ok(triples[s].j, triples[t].j);
      if (!supported) {
        CHECK(closed(Eigen::Index(s), Eigen::Index(t)) == 0.0);
        CHECK(std::abs(pipeline(Eigen::Index(s), Eigen::Index(t))) < 1e-12);
      }
      // a strict triad violation with unequal labels kills every term
      if ((triples[s].j1 != triples[t].j1 && !triangle(one, triples[s].j1, triples[t].j1)) ||
          (triples[s].j2 != triples[t].j2 && !triangle(one, triples[s].j2, triples[t].j2)) ||
          (triples[s].j != triples[t].j && !triangle(one, triples[s].j, triples[t].j)))
        CHECK(closed(Eigen::Index(s), Eigen::Index(t)) == 0.0);
    }

  // in the L2-orthonormal basis the structure constants are totally
  // symmetric, so the coefficients weighted by both the norm ratio and the
  // orthonormal factors are symmetric in source <-> target
  std::vector<double> weight;
  for (const auto& q : basis) weight.push_back(norm(q, p) * orthonormal_factor(q));
  for (std::size_t s = 0; s < triples.size(); ++s)
    for (std::size_t t = 0; t < triples.size(); ++t) {
      const double m_st = closed(Eigen::Index(s), Eigen::Index(t)) * weight[s] / weight[t];
      const double m_ts = closed(Eigen::Index(t), Eigen::Index(s)) * weight[t] / weight[s];
      CHECK(std::abs(m_st - m_ts) < 1e-9 * (1.0 + std::abs(m_st)));
    }
}

TEST_CASE("three-link wilson expansion matches the trace pointwise") {
  std::mt19937_64 rng(77);
  const auto rnd = [&] {
    std::normal_distribution<double> n(0.0, 1.0);
    double a = n(rng), b = n(rng), c = n(rng), d = n(rng);
    const double r = std::sqrt(a * a + b * b + c * c + d * d);
    return Su2Element{{a / r, b / r}, {c / r, d / r}};
  };
  LatticeModel model{3, {{1, 2, -3}, {2, 3}}, 1.0, 1.0};
  const CouplingTree t = standard_tree(3);
  const auto w = wilson_coefficients(model, t, HalfInt(4));
  TracePolynomial direct;
  direct.add(Rational(2), {{{1, 1}, {2, 1}, {3, -1}}});
  direct.add(Rational(2), {{{2, 1}, {3, 1}}});
  for (int trial = 0; trial < 5; ++trial) {
    const Su2Element g1 = rnd(), g2 = rnd(), g3 = rnd();
    std::complex<double> expanded = 0.0;
    for (const auto& [k, v] : w) expanded += v.to_double() * evaluate(k, {g1, g2, g3});
    const std::complex<double> value =
        evaluate_trace_polynomial(direct, {g1.matrix(), g2.matrix(), g3.matrix()});
    CHECK(std::abs(expanded - value) < 1e-10);
  }
}

TEST_CASE("three-link hamiltonian stays symmetric with sound residuals") {
  LatticeModel model{3, {{1, 2, -3}}, 1.2, 0.9};
  const auto sp = assemble_hamiltonian(model, standard_tree(3), HalfInt(1));
  CHECK(sp.basis.size() > 10);
  CHECK((sp.hamiltonian - sp.hamiltonian.transpose()).norm() == 0.0);
  const auto spec = spectrum(sp);
  const double hnorm = sp.hamiltonian.norm();
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) {
    const Eigen::VectorXd r =
        sp.hamiltonian * spec.eigenvectors.col(i) - spec.eigenvalues(i) * spec.eigenvectors.col(i);
    CHECK(r.norm() < 1e-8 * hnorm);
  }
}
