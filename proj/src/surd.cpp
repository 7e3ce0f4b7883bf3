#include "qc/surd.hpp"
#include "qc/half_int.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qc {

namespace {

// Splits n = square * squarefree by trial division. Radicands seen in
// practice are small because sqrt arguments are reduced before they get
// here; the guard below catches anything pathological.
void squarefree_split(BigInt n, BigInt& square_root_part, std::uint64_t& squarefree) {
  square_root_part = 1;
  BigInt free_part = 1;
  for (BigInt p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int i = 0; i < e / 2; ++i) square_root_part *= p;
    if (e % 2 != 0) free_part *= p;
  }
  free_part *= n; // leftover is prime or 1
  if (free_part > BigInt(std::uint64_t(1) << 62))
    throw std::domain_error("surd radicand too large: " + free_part.str());
  squarefree = free_part.template convert_to<std::uint64_t>();
}

} // namespace

SurdSum::SurdSum(const Rational& rational) {
  if (rational != 0) terms_.emplace_back(1, rational);
}

SurdSum SurdSum::root_term(const Rational& c, const BigInt& radicand) {
  if (radicand < 0) throw std::domain_error("negative radicand");
  SurdSum s;
  if (c == 0 || radicand == 0) return s;
  BigInt sq;
  std::uint64_t free_part;
  squarefree_split(radicand, sq, free_part);
  Rational coeff = c * Rational(sq);
  s.terms_.emplace_back(free_part, coeff);
  return s;
}

SurdSum SurdSum::sqrt_of(const Rational& q) {
  if (q < 0) throw std::domain_error("sqrt of negative rational");
  if (q == 0) return SurdSum();
  // sqrt(p/q) = sqrt(p*q) / q
  const BigInt num = boost::multiprecision::numerator(q);
  const BigInt den = boost::multiprecision::denominator(q);
  return root_term(Rational(1, den), num * den);
}

bool SurdSum::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 1);
}

Rational SurdSum::rational_part() const {
  for (const auto& [r, c] : terms_)
    if (r == 1) return c;
  return Rational(0);
}

void SurdSum::add_term(std::uint64_t radicand, const Rational& coeff) {
  if (coeff == 0) return;
  auto it = std::lower_bound(terms_.begin(), terms_.end(), radicand,
                             [](const auto& t, std::uint64_t r) { return t.first < r; });
  if (it != terms_.end() && it->first == radicand) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  } else {
    terms_.insert(it, {radicand, coeff});
  }
}

SurdSum& SurdSum::operator+=(const SurdSum& o) {
  for (const auto& [r, c] : o.terms_) add_term(r, c);
  return *this;
}

SurdSum& SurdSum::operator-=(const SurdSum& o) {
  for (const auto& [r, c] : o.terms_) add_term(r, -c);
  return *this;
}

SurdSum operator*(const SurdSum& a, const SurdSum& b) {
  SurdSum out;
  for (const auto& [ra, ca] : a.terms_) {
    for (const auto& [rb, cb] : b.terms_) {
      // sqrt(ra)*sqrt(rb) = g*sqrt((ra/g)*(rb/g)) with g = gcd; the reduced
      // radicand is automatically squarefree for squarefree inputs
      const std::uint64_t g = std::gcd(ra, rb);
      const std::uint64_t qa = ra / g, qb = rb / g;
      if (qa != 0 && qb > (std::uint64_t(1) << 62) / qa)
        throw std::domain_error("surd radicand overflow in product");
      out.add_term(qa * qb, ca * cb * Rational(g));
    }
  }
  return out;
}

SurdSum& SurdSum::operator*=(const SurdSum& o) {
  *this = *this * o;
  return *this;
}

SurdSum& SurdSum::scale(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [r, coeff] : terms_) coeff *= c;
  return *this;
}

SurdSum SurdSum::operator-() const {
  SurdSum out = *this;
  for (auto& [r, c] : out.terms_) c = -c;
  return out;
}

double SurdSum::to_double() const {
  double acc = 0;
  for (const auto& [r, c] : terms_) acc += qc::to_double(c) * std::sqrt(double(r));
  return acc;
}

std::string SurdSum::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [r, c] : terms_) {
    Rational coeff = c;
    if (!first) {
      os << (coeff < 0 ? " - " : " + ");
      if (coeff < 0) coeff = -coeff;
    }
    first = false;
    os << to_string(coeff);
    if (r != 1) os << "*sqrt(" << r << ")";
  }
  return os.str();
}

HalfInt parse_half_int(const std::string& text) {
  const auto bad = [&] { return std::invalid_argument("not a half-integer: '" + text + "'"); };
  if (text.empty()) throw bad();
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      const long p = std::stol(text.substr(0, slash));
      const long q = std::stol(text.substr(slash + 1));
      if (q == 1) return HalfInt::from_twice(int(2 * p));
      if (q == 2) return HalfInt::from_twice(int(p));
      throw bad();
    }
    const auto dot = text.find('.');
    if (dot != std::string::npos) {
      const std::string frac = text.substr(dot + 1);
      const std::string whole = text.substr(0, dot);
      long w = whole.empty() || whole == "-" ? 0 : std::stol(whole);
      const bool neg = !whole.empty() && whole[0] == '-';
      if (frac == "5") return HalfInt::from_twice(int(2 * w + (neg ? -1 : 1)));
      if (frac == "0" || frac == "00") return HalfInt(int(w));
      throw bad();
    }
    return HalfInt(int(std::stol(text)));
  } catch (const std::invalid_argument&) {
    throw bad();
  } catch (const std::out_of_range&) {
    throw bad();
  }
}

int parity_sign(HalfInt p) {
  if (p.twice() % 2 != 0) throw std::domain_error("(-1)^p with half-odd exponent " + p.str());
  return (p.twice() / 2) % 2 == 0 ? 1 : -1;
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return Rational(BigInt(text));
    return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
  } catch (const std::exception&) {
    throw std::invalid_argument("not a rational: '" + text + "'");
  }
}

} // namespace qc
