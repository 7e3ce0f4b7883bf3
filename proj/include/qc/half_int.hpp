#ifndef QC_HALF_INT_HPP
#define QC_HALF_INT_HPP

#include <compare>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qc {

// Half-integer spin or projection, stored as twice its value.
class HalfInt {
public:
  constexpr HalfInt() : twice_(0) {}
  constexpr HalfInt(int integer_value) : twice_(2 * integer_value) {}

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }

  constexpr int twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  double value() const { return 0.5 * twice_; }

  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.twice_ + b.twice_); }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return from_twice(a.twice_ - b.twice_); }
  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  HalfInt& operator+=(HalfInt o) { twice_ += o.twice_; return *this; }
  HalfInt& operator-=(HalfInt o) { twice_ -= o.twice_; return *this; }
  // steps of 1 (ladder steps), not 1/2
  HalfInt& operator++() { twice_ += 2; return *this; }
  HalfInt& operator--() { twice_ -= 2; return *this; }

  friend constexpr auto operator<=>(HalfInt a, HalfInt b) = default;

  std::string str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

private:
  int twice_;
};

inline HalfInt abs(HalfInt h) { return HalfInt::from_twice(std::abs(h.twice())); }

// dimension 2j+1 of the spin-j irrep
inline int dim(HalfInt j) { return j.twice() + 1; }

// true for a valid (j, m) pair: |m| <= j and j - m integral
inline bool valid_jm(HalfInt j, HalfInt m) {
  return j.twice() >= 0 && abs(m) <= j && (j.twice() - m.twice()) % 2 == 0;
}

inline void require_jm(HalfInt j, HalfInt m) {
  if (!valid_jm(j, m))
    throw std::domain_error("invalid (j, m) pair: j=" + j.str() + ", m=" + m.str());
}

// triangle condition |j1-j2| <= j3 <= j1+j2 with integral perimeter
inline bool triangle(HalfInt j1, HalfInt j2, HalfInt j3) {
  if ((j1 + j2 + j3).twice() % 2 != 0) return false;
  return abs(j1 - j2) <= j3 && j3 <= j1 + j2;
}

// Parses "3/2", "1.5" or "2"; rejects anything that is not a half-integer.
HalfInt parse_half_int(const std::string& text);

// (-1)^p for an integer-valued HalfInt exponent; throws if p is half-odd
int parity_sign(HalfInt p);

} // namespace qc

#endif
