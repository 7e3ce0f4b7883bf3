#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "qc/su2.hpp"

#include <cmath>
#include <random>

using namespace qc;

namespace {

HalfInt half(int twice) { return HalfInt::from_twice(twice); }

Su2Element random_su2(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  double x0 = n(rng), x1 = n(rng), x2 = n(rng), x3 = n(rng);
  const double r = std::sqrt(x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3);
  return {{x0 / r, x1 / r}, {x2 / r, x3 / r}};
}

} // namespace

TEST_CASE("clebsch series follows the triangle rule") {
  CHECK(clebsch_series(half(1), half(1)) == std::vector<HalfInt>{HalfInt(0), HalfInt(1)});
  CHECK(clebsch_series(HalfInt(0), half(5)) == std::vector<HalfInt>{half(5)});
  CHECK(clebsch_series(HalfInt(1), half(3)) == std::vector<HalfInt>{half(1), half(3), half(5)});
}

TEST_CASE("explicit Clebsch-Gordan values") {
  CHECK(cg(half(1), half(1), half(1), half(1), HalfInt(1), HalfInt(1)) == SurdSum(Rational(1)));
  CHECK(cg(half(1), half(1), half(1), half(-1), HalfInt(0), HalfInt(0)) ==
        SurdSum::sqrt_of(Rational(1, 2)));
  CHECK(cg(half(1), half(-1), half(1), half(1), HalfInt(0), HalfInt(0)) ==
        -SurdSum::sqrt_of(Rational(1, 2)));
  CHECK(cg(HalfInt(1), HalfInt(1), HalfInt(1), HalfInt(0), HalfInt(1), HalfInt(1)) ==
        SurdSum::sqrt_of(Rational(1, 2)));
  // selection rules
  CHECK(cg(half(1), half(1), half(1), half(1), HalfInt(1), HalfInt(0)).is_zero());
  CHECK(cg(half(1), half(1), half(1), half(1), HalfInt(2), HalfInt(2)).is_zero());
  CHECK_THROWS_AS(cg(half(1), half(3), half(1), half(-1), HalfInt(1), HalfInt(1)),
                  std::domain_error);
}

TEST_CASE("cg matches the Gram-Schmidt oracle") {
  for (int tj1 = 0; tj1 <= 4; ++tj1)
    for (int tj2 = 0; tj2 <= 4; ++tj2) {
      const HalfInt j1 = half(tj1), j2 = half(tj2);
      const test::CgOracle oracle(j1, j2);
      for (HalfInt j = abs(j1 - j2); j <= j1 + j2; ++j)
        for (HalfInt m = -j; m <= j; ++m)
          for (HalfInt m1 = -j1; m1 <= j1; ++m1) {
            const HalfInt m2 = m - m1;
            if (!valid_jm(j2, m2)) continue;
            CHECK(cg(j1, m1, j2, m2, j, m) == oracle.coefficient(j, m, m1, m2));
          }
    }
}

TEST_CASE("cg orthogonality, exact") {
  for (int tj1 = 0; tj1 <= 6; ++tj1)
    for (int tj2 = 0; tj2 <= 6; ++tj2) {
      const HalfInt j1 = half(tj1), j2 = half(tj2);
      const auto series = clebsch_series(j1, j2);
      for (HalfInt j : series)
        for (HalfInt jp : series) {
          const HalfInt m = -abs(j1 - j2); // valid projection for both
          if (!valid_jm(j, m) || !valid_jm(jp, m)) continue;
          SurdSum acc;
          for (HalfInt m1 = -j1; m1 <= j1; ++m1) {
            const HalfInt m2 = m - m1;
            if (!valid_jm(j2, m2)) continue;
            acc += cg(j1, m1, j2, m2, j, m) * cg(j1, m1, j2, m2, jp, m);
          }
          CHECK(acc == (j == jp ? SurdSum(Rational(1)) : SurdSum()));
        }
    }
}

TEST_CASE("cg exchange symmetry") {
  for (int tj1 = 0; tj1 <= 4; ++tj1)
    for (int tj2 = 0; tj2 <= 4; ++tj2) {
      const HalfInt j1 = half(tj1), j2 = half(tj2);
      for (HalfInt j : clebsch_series(j1, j2)) {
        const int sign = parity_sign(j1 + j2 - j);
        for (HalfInt m1 = -j1; m1 <= j1; ++m1)
          for (HalfInt m2 = -j2; m2 <= j2; ++m2) {
            const HalfInt m = m1 + m2;
            if (!valid_jm(j, m)) continue;
            SurdSum swapped = cg(j2, m2, j1, m1, j, m);
            swapped.scale(Rational(sign));
            CHECK(cg(j1, m1, j2, m2, j, m) == swapped);
          }
      }
    }
}

TEST_CASE("6j values and zero-argument reduction") {
  CHECK(wigner6j(HalfInt(0), HalfInt(0), HalfInt(0), HalfInt(0), HalfInt(0), HalfInt(0)) ==
        SurdSum(Rational(1)));
  // {j1 j2 j3; 0 j3 j2} = (-1)^(j1+j2+j3) / sqrt(d_{j2} d_{j3})
  for (int tj1 = 0; tj1 <= 6; ++tj1)
    for (int tj2 = 0; tj2 <= 6; ++tj2)
      for (int tj3 = 0; tj3 <= 6; ++tj3) {
        const HalfInt j1 = half(tj1), j2 = half(tj2), j3 = half(tj3);
        if (!triangle(j1, j2, j3)) continue;
        SurdSum expected = SurdSum::sqrt_of(Rational(1, dim(j2) * dim(j3)));
        expected.scale(Rational(parity_sign(j1 + j2 + j3)));
        CHECK(wigner6j(j1, j2, j3, HalfInt(0), j3, j2) == expected);
      }
  // spec example: (1, 1/2, 1/2) -> +1/2
  CHECK(wigner6j(HalfInt(1), half(1), half(1), HalfInt(0), half(1), half(1)) ==
        SurdSum(Rational(1, 2)));
  // triangle violation
  CHECK(wigner6j(HalfInt(1), HalfInt(1), HalfInt(3), HalfInt(1), HalfInt(1), HalfInt(1)).is_zero());
}

namespace {

// 9-lambda by direct contraction of six CG coefficients,
// at fixed m3 = -j3; divides out nothing, returns the 9j after removing
// the dimension factor.
SurdSum ninej_by_contraction(const NineJ& r) {
  const HalfInt j11 = r[0][0], j12 = r[0][1], j1 = r[0][2];
  const HalfInt j21 = r[1][0], j22 = r[1][1], j2 = r[1][2];
  const HalfInt j31 = r[2][0], j32 = r[2][1], j3 = r[2][2];
  const HalfInt m3 = -j3;
  SurdSum acc;
  for (HalfInt m11 = -j11; m11 <= j11; ++m11)
    for (HalfInt m12 = -j12; m12 <= j12; ++m12)
      for (HalfInt m21 = -j21; m21 <= j21; ++m21)
        for (HalfInt m22 = -j22; m22 <= j22; ++m22) {
          const HalfInt m1 = m11 + m12, m2 = m21 + m22;
          const HalfInt m31 = m11 + m21, m32 = m12 + m22;
          if (!valid_jm(j1, m1) || !valid_jm(j2, m2)) continue;
          if (!valid_jm(j31, m31) || !valid_jm(j32, m32)) continue;
          if (m1 + m2 != m3) continue;
          SurdSum term = cg(j11, m11, j12, m12, j1, m1);
          if (term.is_zero()) continue;
          term *= cg(j21, m21, j22, m22, j2, m2);
          if (term.is_zero()) continue;
          term *= cg(j1, m1, j2, m2, j3, m3);
          if (term.is_zero()) continue;
          term *= cg(j11, m11, j21, m21, j31, m31);
          if (term.is_zero()) continue;
          term *= cg(j12, m12, j22, m22, j32, m32);
          if (term.is_zero()) continue;
          term *= cg(j31, m31, j32, m32, j3, m3);
          acc += term;
        }
  // acc is the 9-lambda symbol; remove sqrt(d_{j1} d_{j2} d_{j31} d_{j32})
  const long d = long(dim(j1)) * dim(j2) * dim(j31) * dim(j32);
  return acc * SurdSum::sqrt_of(Rational(1, d));
}

} // namespace

TEST_CASE("9j equals the CG contraction on all arrays with entries <= 1") {
  int checked = 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 2; ++b)
      for (int c = 0; c <= 2; ++c)
        for (int d = 0; d <= 2; ++d)
          for (int e = 0; e <= 2; ++e)
            for (int f = 0; f <= 2; ++f)
              for (int g = 0; g <= 2; ++g)
                for (int h = 0; h <= 2; ++h)
                  for (int i = 0; i <= 2; ++i) {
                    const NineJ rows{{{half(a), half(b), half(c)},
                                      {half(d), half(e), half(f)},
                                      {half(g), half(h), half(i)}}};
                    bool triads = true;
                    for (int row = 0; row < 3; ++row)
                      triads = triads && triangle(rows[row][0], rows[row][1], rows[row][2]);
                    for (int col = 0; col < 3; ++col)
                      triads = triads && triangle(rows[0][col], rows[1][col], rows[2][col]);
                    if (!triads) {
                      CHECK(wigner9j(rows).is_zero());
                      continue;
                    }
                    CHECK(wigner9j(rows) == ninej_by_contraction(rows));
                    ++checked;
                  }
  CHECK(checked > 100);
}

TEST_CASE("9j special values") {
  const NineJ zeros{{{HalfInt(0), HalfInt(0), HalfInt(0)},
                     {HalfInt(0), HalfInt(0), HalfInt(0)},
                     {HalfInt(0), HalfInt(0), HalfInt(0)}}};
  CHECK(wigner9j(zeros) == SurdSum(Rational(1)));
  CHECK(nine_lambda_su2(zeros) == SurdSum(Rational(1)));

  // zero-entry reduction rule against the generic 9j
  for (int tk = 0; tk <= 4; ++tk)
    for (int t1 = 0; t1 <= 3; ++t1)
      for (int t2 = 0; t2 <= 3; ++t2)
        for (int tj = 0; tj <= 3; ++tj)
          for (int t2p = 0; t2p <= 3; ++t2p)
            for (int tjp = 0; tjp <= 3; ++tjp) {
              const HalfInt k = half(tk), j1 = half(t1), j2 = half(t2), j = half(tj);
              const HalfInt j2p = half(t2p), jp = half(tjp);
              const NineJ rows{{{HalfInt(0), k, k}, {j1, j2, j}, {j1, j2p, jp}}};
              CHECK(wigner9j(rows) == wigner9j_zero_reduction(k, j1, j2, j, j1, j2p, jp));
            }
}

TEST_CASE("9-lambda dimension factor sits on the right entries") {
  const NineJ rows{{{half(1), half(1), HalfInt(1)},
                    {half(1), half(1), HalfInt(1)},
                    {HalfInt(1), HalfInt(1), HalfInt(0)}}};
  const SurdSum factor = SurdSum::sqrt_of(Rational(dim(HalfInt(1)) * dim(HalfInt(1)) *
                                                   dim(HalfInt(1)) * dim(HalfInt(1))));
  CHECK(nine_lambda_su2(rows) == factor * wigner9j(rows));
  // a row violating the triangle rule gives zero
  const NineJ bad{{{half(1), half(1), HalfInt(2)},
                   {half(1), half(1), HalfInt(1)},
                   {HalfInt(1), HalfInt(1), HalfInt(0)}}};
  CHECK(nine_lambda_su2(bad).is_zero());
}

TEST_CASE("wigner_d basics and homomorphism") {
  CHECK(wigner_d(HalfInt(0), Su2Element{}).rows() == 1);
  CHECK(wigner_d(HalfInt(0), Su2Element{})(0, 0) == std::complex<double>(1.0, 0.0));

  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const Su2Element a = random_su2(rng), b = random_su2(rng);
    // spin 1/2 is the matrix itself
    const Eigen::MatrixXcd dhalf = wigner_d(half(1), a);
    CHECK((dhalf - a.matrix()).norm() < 1e-12);
    for (int tj = 0; tj <= 4; ++tj) {
      const HalfInt j = half(tj);
      const Eigen::MatrixXcd da = wigner_d(j, a), db = wigner_d(j, b);
      const Eigen::MatrixXcd dab = wigner_d(j, a * b);
      CHECK((da * db - dab).norm() < 1e-10);
      // unitarity
      CHECK((da * da.adjoint() - Eigen::MatrixXcd::Identity(da.rows(), da.cols())).norm() < 1e-10);
      // real character
      CHECK(std::abs(std::imag(da.trace())) < 1e-10);
    }
  }
  CHECK_THROWS_AS(wigner_d(half(1), Su2Element{{2.0, 0.0}, {0.0, 0.0}}), std::domain_error);
}

TEST_CASE("wigner_d intertwines with cg") {
  // equivariance: sum_{m1 m2} C^{j1 j2 j}_{m1 m2 m} |m1 m2> transforms like |j m>
  std::mt19937_64 rng(5);
  const Su2Element a = random_su2(rng);
  for (int tj1 = 0; tj1 <= 2; ++tj1)
    for (int tj2 = 0; tj2 <= 2; ++tj2) {
      const HalfInt j1 = half(tj1), j2 = half(tj2);
      const Eigen::MatrixXcd d1 = wigner_d(j1, a), d2 = wigner_d(j2, a);
      for (HalfInt j : clebsch_series(j1, j2)) {
        const Eigen::MatrixXcd dj = wigner_d(j, a);
        // build the isometry C: (d1*d2) x dj
        Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(dim(j1) * dim(j2), dim(j));
        for (HalfInt m1 = -j1; m1 <= j1; ++m1)
          for (HalfInt m2 = -j2; m2 <= j2; ++m2) {
            const HalfInt m = m1 + m2;
            if (!valid_jm(j, m)) continue;
            const long row = long((j1 - m1).twice() / 2) * dim(j2) + (j2 - m2).twice() / 2;
            c(row, (j - m).twice() / 2) = cg(j1, m1, j2, m2, j, m).to_double();
          }
        Eigen::MatrixXcd kron = Eigen::MatrixXcd::Zero(c.rows(), c.rows());
        for (long i = 0; i < dim(j1); ++i)
          for (long k = 0; k < dim(j1); ++k)
            for (long l = 0; l < dim(j2); ++l)
              for (long n = 0; n < dim(j2); ++n)
                kron(i * dim(j2) + l, k * dim(j2) + n) = d1(i, k) * d2(l, n);
        CHECK((kron * c - c * dj).norm() < 1e-10);
      }
    }
}

TEST_CASE("casimir eigenvalues") {
  CHECK(casimir_eigenvalue(HalfInt(0)) == Rational(0));
  CHECK(casimir_eigenvalue(half(1)) == Rational(3));
  CHECK(casimir_eigenvalue(HalfInt(1)) == Rational(8));
  CHECK(casimir_eigenvalue(half(3)) == Rational(15));
}

TEST_CASE("6j orthogonality sums, exact") {
  // sum_x d_x {a b x; c d p} {a b x; c d q} = delta_pq / d_p on admissible p
  for (int ta = 0; ta <= 3; ++ta)
    for (int tb = 0; tb <= 3; ++tb)
      for (int tc = 0; tc <= 3; ++tc)
        for (int td = 0; td <= 3; ++td) {
          const HalfInt a = half(ta), b = half(tb), c = half(tc), d = half(td);
          for (HalfInt p : clebsch_series(a, d))
            for (HalfInt q : clebsch_series(a, d)) {
              if (!triangle(b, c, p) || !triangle(b, c, q)) continue;
              SurdSum acc;
              for (HalfInt x = abs(a - b); x <= a + b; ++x) {
                SurdSum term = wigner6j(a, b, x, c, d, p);
                if (term.is_zero()) continue;
                term *= wigner6j(a, b, x, c, d, q);
                term.scale(Rational(dim(x)));
                acc += term;
              }
              CHECK(acc == (p == q ? SurdSum(Rational(1, dim(p))) : SurdSum()));
            }
        }
}

TEST_CASE("large spins stay exact") {
  // factorial ratios far beyond 64-bit range
  const HalfInt j20 = HalfInt(20), j19 = HalfInt(19);
  const SurdSum top = cg(j20, j20, j20, -j20, HalfInt(0), HalfInt(0));
  CHECK(!top.is_zero());
  // orthogonality of the m = 0 column across root spins 0 and 1
  SurdSum acc;
  for (HalfInt m = -j20; m <= j20; ++m) {
    SurdSum t = cg(j20, m, j20, -m, HalfInt(0), HalfInt(0));
    t *= cg(j20, m, j20, -m, HalfInt(1), HalfInt(0));
    acc += t;
  }
  CHECK(acc.is_zero());
  CHECK(!wigner6j(j20, j20, j20, j19, j19, j19).is_zero());
}
