#include "qc/su2.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace qc {

namespace {

std::mutex g_fact_mutex;

const BigInt& factorial_locked(int n) {
  static std::deque<BigInt> table{BigInt(1), BigInt(1)};
  while (int(table.size()) <= n) table.push_back(table.back() * int(table.size()));
  return table[n];
}

BigInt factorial(int n) {
  if (n < 0) throw std::domain_error("factorial of negative integer");
  std::lock_guard lock(g_fact_mutex);
  return factorial_locked(n);
}

// factorization of n! as prime -> exponent
std::map<std::uint64_t, long> factorial_factors(int n) {
  static std::deque<std::map<std::uint64_t, long>> table{{}, {}};
  std::lock_guard lock(g_fact_mutex);
  while (int(table.size()) <= n) {
    auto next = table.back();
    std::uint64_t v = table.size();
    for (std::uint64_t p = 2; p * p <= v; ++p)
      while (v % p == 0) {
        ++next[p];
        v /= p;
      }
    if (v > 1) ++next[v];
    table.push_back(std::move(next));
  }
  return table[n];
}

// Product of factorials and small integers kept in prime-factorized form,
// so that exact square roots can be extracted without refactoring the
// (possibly huge) value.
struct FactorizedPositive {
  std::map<std::uint64_t, long> exponents;

  void mul_factorial(int n, long power = 1) {
    for (const auto& [p, e] : factorial_factors(n)) exponents[p] += power * e;
  }
  void mul_integer(std::uint64_t v, long power = 1) {
    for (std::uint64_t p = 2; p * p <= v; ++p)
      while (v % p == 0) {
        exponents[p] += power;
        v /= p;
      }
    if (v > 1) exponents[v] += power;
  }
  // sqrt as a single-term surd c*sqrt(r)
  SurdSum sqrt_surd() const {
    Rational coeff(1);
    std::uint64_t radicand = 1;
    for (const auto& [p, e] : exponents) {
      const long half = (e >= 0 ? e / 2 : -((-e + 1) / 2));
      BigInt pw = boost::multiprecision::pow(BigInt(p), std::abs(half));
      if (half >= 0)
        coeff *= Rational(pw);
      else
        coeff /= Rational(pw);
      if (((e % 2) + 2) % 2 == 1) {
        // with half = floor(e/2), p^e = p^{2*half} * p, so sqrt picks up
        // a factor p^half and the leftover p joins the radicand
        if (radicand > (std::uint64_t(1) << 62) / p)
          throw std::domain_error("surd radicand overflow");
        radicand *= p;
      }
    }
    return SurdSum::root_term(coeff, BigInt(radicand));
  }
};

// int value of a HalfInt known to be integral
int as_int(HalfInt h) {
  if (h.twice() % 2 != 0) throw std::domain_error("expected integer, got " + h.str());
  return h.twice() / 2;
}

// triangle coefficient Delta(abc)^2 = (a+b-c)!(a-b+c)!(-a+b+c)!/(a+b+c+1)!
void mul_delta_sq(FactorizedPositive& f, HalfInt a, HalfInt b, HalfInt c) {
  f.mul_factorial(as_int(a + b - c));
  f.mul_factorial(as_int(a - b + c));
  f.mul_factorial(as_int(-a + b + c));
  f.mul_factorial(as_int(a + b + c) + 1, -1);
}

struct ArrayHash {
  template <std::size_t N>
  std::size_t operator()(const std::array<int, N>& a) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : a) {
      h ^= std::size_t(v) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

template <std::size_t N>
class SymbolCache {
public:
  bool lookup(const std::array<int, N>& key, SurdSum& out) const {
    std::lock_guard lock(mutex_);
    auto it = map_.find(key);
    if (it == map_.end()) return false;
    out = it->second;
    return true;
  }
  void store(const std::array<int, N>& key, const SurdSum& value) {
    std::lock_guard lock(mutex_);
    map_.emplace(key, value); // idempotent: recomputed values are identical
  }
  void clear() {
    std::lock_guard lock(mutex_);
    map_.clear();
  }

private:
  mutable std::mutex mutex_;
  std::unordered_map<std::array<int, N>, SurdSum, ArrayHash> map_;
};

SymbolCache<6>& cg_cache() {
  static SymbolCache<6> c;
  return c;
}
SymbolCache<6>& sixj_cache() {
  static SymbolCache<6> c;
  return c;
}
SymbolCache<9>& ninej_cache() {
  static SymbolCache<9> c;
  return c;
}

// canonical representative of a 6j under the 24 classical symmetries:
// column permutations and pair flips of upper/lower arguments
std::array<int, 6> sixj_canonical(const std::array<int, 6>& k) {
  static const int colperm[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  static const bool flips[4][3] = {
      {false, false, false}, {true, true, false}, {true, false, true}, {false, true, true}};
  std::array<int, 6> best = k;
  for (const auto& cp : colperm) {
    for (const auto& fl : flips) {
      std::array<int, 6> img{};
      for (int c = 0; c < 3; ++c) {
        const int top = k[cp[c]], bot = k[cp[c] + 3];
        img[c] = fl[c] ? bot : top;
        img[c + 3] = fl[c] ? top : bot;
      }
      best = std::min(best, img);
    }
  }
  return best;
}

SurdSum cg_compute(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt j, HalfInt m) {
  FactorizedPositive pref;
  pref.mul_integer(std::uint64_t(dim(j)));
  mul_delta_sq(pref, j1, j2, j);
  pref.mul_factorial(as_int(j1 + m1));
  pref.mul_factorial(as_int(j1 - m1));
  pref.mul_factorial(as_int(j2 + m2));
  pref.mul_factorial(as_int(j2 - m2));
  pref.mul_factorial(as_int(j + m));
  pref.mul_factorial(as_int(j - m));

  const int zmin = std::max({0, as_int(j2 - j - m1), as_int(j1 + m2 - j)});
  const int zmax = std::min({as_int(j1 + j2 - j), as_int(j1 - m1), as_int(j2 + m2)});
  Rational sum(0);
  for (int z = zmin; z <= zmax; ++z) {
    Rational term(1);
    term /= Rational(factorial(z));
    term /= Rational(factorial(as_int(j1 + j2 - j) - z));
    term /= Rational(factorial(as_int(j1 - m1) - z));
    term /= Rational(factorial(as_int(j2 + m2) - z));
    term /= Rational(factorial(as_int(j - j2 + m1) + z));
    term /= Rational(factorial(as_int(j - j1 - m2) + z));
    if (z % 2 != 0) term = -term;
    sum += term;
  }
  SurdSum out = pref.sqrt_surd();
  out.scale(sum);
  return out;
}

SurdSum sixj_compute(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
  FactorizedPositive pref;
  mul_delta_sq(pref, j1, j2, j3);
  mul_delta_sq(pref, j1, j5, j6);
  mul_delta_sq(pref, j4, j2, j6);
  mul_delta_sq(pref, j4, j5, j3);

  const int s1 = as_int(j1 + j2 + j3), s2 = as_int(j1 + j5 + j6);
  const int s3 = as_int(j4 + j2 + j6), s4 = as_int(j4 + j5 + j3);
  const int q1 = as_int(j1 + j2 + j4 + j5), q2 = as_int(j2 + j3 + j5 + j6), q3 = as_int(j3 + j1 + j6 + j4);
  Rational sum(0);
  for (int z = std::max({s1, s2, s3, s4}); z <= std::min({q1, q2, q3}); ++z) {
    Rational term(factorial(z + 1));
    term /= Rational(factorial(z - s1));
    term /= Rational(factorial(z - s2));
    term /= Rational(factorial(z - s3));
    term /= Rational(factorial(z - s4));
    term /= Rational(factorial(q1 - z));
    term /= Rational(factorial(q2 - z));
    term /= Rational(factorial(q3 - z));
    if (z % 2 != 0) term = -term;
    sum += term;
  }
  SurdSum out = pref.sqrt_surd();
  out.scale(sum);
  return out;
}

} // namespace

std::vector<HalfInt> clebsch_series(HalfInt j1, HalfInt j2) {
  std::vector<HalfInt> out;
  for (HalfInt j = abs(j1 - j2); j <= j1 + j2; ++j) out.push_back(j);
  return out;
}

SurdSum cg(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt j, HalfInt m) {
  require_jm(j1, m1);
  require_jm(j2, m2);
  require_jm(j, m);
  if (m1 + m2 != m || !triangle(j1, j2, j)) return SurdSum();

  const std::array<int, 6> key{j1.twice(), m1.twice(), j2.twice(), m2.twice(), j.twice(), m.twice()};
  SurdSum out;
  if (cg_cache().lookup(key, out)) return out;
  out = cg_compute(j1, m1, j2, m2, j, m);
  cg_cache().store(key, out);
  return out;
}

SurdSum wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
  if (!triangle(j1, j2, j3) || !triangle(j1, j5, j6) || !triangle(j4, j2, j6) || !triangle(j4, j5, j3))
    return SurdSum();
  const auto key = sixj_canonical({j1.twice(), j2.twice(), j3.twice(), j4.twice(), j5.twice(), j6.twice()});
  SurdSum out;
  if (sixj_cache().lookup(key, out)) return out;
  out = sixj_compute(HalfInt::from_twice(key[0]), HalfInt::from_twice(key[1]), HalfInt::from_twice(key[2]),
                     HalfInt::from_twice(key[3]), HalfInt::from_twice(key[4]), HalfInt::from_twice(key[5]));
  sixj_cache().store(key, out);
  return out;
}

SurdSum wigner9j(const NineJ& r) {
  const HalfInt a = r[0][0], b = r[0][1], c = r[0][2];
  const HalfInt d = r[1][0], e = r[1][1], f = r[1][2];
  const HalfInt g = r[2][0], h = r[2][1], i = r[2][2];
  for (int row = 0; row < 3; ++row)
    if (!triangle(r[row][0], r[row][1], r[row][2])) return SurdSum();
  for (int col = 0; col < 3; ++col)
    if (!triangle(r[0][col], r[1][col], r[2][col])) return SurdSum();

  std::array<int, 9> key{};
  for (int row = 0; row < 3; ++row)
    for (int col = 0; col < 3; ++col) key[3 * row + col] = r[row][col].twice();
  SurdSum out;
  if (ninej_cache().lookup(key, out)) return out;

  const HalfInt xlo = std::max({abs(a - i), abs(b - f), abs(d - h)});
  const HalfInt xhi = std::min({a + i, b + f, d + h});
  for (HalfInt x = xlo; x <= xhi; ++x) {
    SurdSum term = wigner6j(a, b, c, f, i, x);
    if (term.is_zero()) continue;
    term *= wigner6j(d, e, f, b, x, h);
    if (term.is_zero()) continue;
    term *= wigner6j(g, h, i, x, a, d);
    if (term.is_zero()) continue;
    const int sign = (x.twice() % 2 == 0) ? 1 : -1; // (-1)^{2x}
    term.scale(Rational(sign * dim(x)));
    out += term;
  }
  ninej_cache().store(key, out);
  return out;
}

SurdSum nine_lambda_su2(const NineJ& rows) {
  SurdSum symbol = wigner9j(rows);
  if (symbol.is_zero()) return symbol;
  const BigInt d = BigInt(dim(rows[0][2])) * dim(rows[1][2]) * dim(rows[2][0]) * dim(rows[2][1]);
  return symbol * SurdSum::root_term(Rational(1), d);
}

SurdSum wigner9j_zero_reduction(HalfInt k, HalfInt j1, HalfInt j2, HalfInt j,
                                HalfInt j1p, HalfInt j2p, HalfInt jp) {
  if (j1 != j1p) return SurdSum();
  if (!triangle(j1, j2, j) || !triangle(j1p, j2p, jp) || !triangle(k, j, jp) || !triangle(k, j2, j2p))
    return SurdSum();
  SurdSum out = wigner6j(k, jp, j, j1, j2, j2p);
  out.scale(Rational(parity_sign(j + k + j1p + j2p)));
  return out * SurdSum::sqrt_of(Rational(1, dim(j1) * dim(k)));
}

Eigen::MatrixXcd wigner_d(HalfInt j, const Su2Element& a) {
  if (j.twice() < 0) throw std::domain_error("negative spin");
  if (!a.is_unitary()) throw std::domain_error("group element is not unitary");
  const int d = dim(j);
  Eigen::MatrixXcd out(d, d);
  const std::complex<double> alpha = a.alpha, beta = a.beta;
  const std::complex<double> alphac = std::conj(alpha), betac = std::conj(beta);
  // rows/columns ordered by descending m; row r corresponds to m' = j - r
  for (int r = 0; r < d; ++r) {
    const HalfInt mp = HalfInt::from_twice(j.twice() - 2 * r);
    for (int s = 0; s < d; ++s) {
      const HalfInt m = HalfInt::from_twice(j.twice() - 2 * s);
      const int jpm = (j + m).twice() / 2, jmm = (j - m).twice() / 2;
      const int jpmp = (j + mp).twice() / 2, jmmp = (j - mp).twice() / 2;
      const double norm = std::sqrt(qc::to_double(
          Rational(factorial(jpm) * factorial(jmm) * factorial(jpmp) * factorial(jmmp))));
      std::complex<double> entry = 0.0;
      const int kmin = std::max(0, (m + mp).twice() / 2);
      const int kmax = std::min(jpm, jpmp);
      for (int kk = kmin; kk <= kmax; ++kk) {
        const Rational denom(factorial(kk) * factorial(jpm - kk) * factorial(jpmp - kk) *
                             factorial(kk - (m + mp).twice() / 2));
        entry += std::pow(alpha, kk) * std::pow(-betac, jpm - kk) * std::pow(beta, jpmp - kk) *
                 std::pow(alphac, kk - (m + mp).twice() / 2) / qc::to_double(denom);
      }
      out(r, s) = norm * entry;
    }
  }
  return out;
}

Rational casimir_eigenvalue(HalfInt j) {
  if (j.twice() < 0) throw std::domain_error("negative spin");
  // 4 j (j+1) = (2j)(2j+2)
  return Rational(BigInt(j.twice()) * (j.twice() + 2));
}

void clear_symbol_caches() {
  cg_cache().clear();
  sixj_cache().clear();
  ninej_cache().clear();
}

} // namespace qc
