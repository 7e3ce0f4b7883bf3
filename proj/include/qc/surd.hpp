#ifndef QC_SURD_HPP
#define QC_SURD_HPP

#include "qc/rational.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace qc {

// Exact value of the form sum_r c_r * sqrt(r) with rational coefficients
// c_r and squarefree natural radicands r. The representation is canonical:
// terms sorted by radicand, no zero coefficients, so operator== decides
// exact equality. Division is intentionally absent; every formula handled
// here is a sum of products.
class SurdSum {
public:
  SurdSum() = default;
  SurdSum(const Rational& rational);
  SurdSum(long long n) : SurdSum(Rational(n)) {}

  // canonical sqrt(q) for q >= 0; the square part of the radicand is
  // absorbed into the coefficient
  static SurdSum sqrt_of(const Rational& q);
  // c * sqrt(r) with arbitrary natural r (reduced to squarefree form)
  static SurdSum root_term(const Rational& c, const BigInt& radicand);

  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const;
  // the coefficient of sqrt(1); zero if absent
  Rational rational_part() const;

  const std::vector<std::pair<std::uint64_t, Rational>>& terms() const { return terms_; }

  double to_double() const;
  std::string str() const;

  SurdSum& operator+=(const SurdSum& o);
  SurdSum& operator-=(const SurdSum& o);
  SurdSum& operator*=(const SurdSum& o);
  SurdSum& scale(const Rational& c);

  friend SurdSum operator+(SurdSum a, const SurdSum& b) { return a += b; }
  friend SurdSum operator-(SurdSum a, const SurdSum& b) { return a -= b; }
  friend SurdSum operator*(const SurdSum& a, const SurdSum& b);
  SurdSum operator-() const;

  friend bool operator==(const SurdSum& a, const SurdSum& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const SurdSum& a, const SurdSum& b) { return !(a == b); }

private:
  // sorted by radicand; invariant: radicands squarefree, coefficients nonzero
  std::vector<std::pair<std::uint64_t, Rational>> terms_;

  void add_term(std::uint64_t radicand, const Rational& coeff);
};

} // namespace qc

#endif
