#ifndef QC_TRACE_POLY_HPP
#define QC_TRACE_POLY_HPP

#include "qc/rational.hpp"

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace qc {

// Formal integer/rational combination of traced words in noncommuting link
// variables and their inverses. A word is a sequence of (link, exponent)
// with 1-based links and exponents +1/-1; the empty word stands for tr(1).
struct TraceWord {
  std::vector<std::pair<int, int>> factors;
};

struct TracePolynomial {
  struct Term {
    Rational coeff;
    TraceWord word;
  };
  std::vector<Term> terms;

  TracePolynomial& add(const Rational& c, const TraceWord& w);
  int max_link() const;
  std::string str() const;
};

// Grammar: poly := term (('+'|'-') term)*, term := [coeff '*'] 'tr' '(' int+ ')'
// with signed integers denoting links (negative = inverse), e.g.
// "3*tr(1 2 -1 -2) - 2*tr(2 1)".
TracePolynomial parse_trace_polynomial(const std::string& text);

// numeric evaluation with explicit fundamental-representation matrices per link
std::complex<double> evaluate_trace_polynomial(const TracePolynomial& p,
                                               const std::vector<Eigen::MatrixXcd>& links);

// ---------------------------------------------------------------------------
// Word algebra for building relations like tr([a,b]^2) out of commutators.
// ---------------------------------------------------------------------------

// polynomial in noncommuting matrix words, before taking the trace
struct MatrixWordPoly {
  struct Term {
    Rational coeff;
    std::vector<std::pair<int, int>> factors;
  };
  std::vector<Term> terms;

  static MatrixWordPoly link(int index, int exponent = 1);
  friend MatrixWordPoly operator*(const MatrixWordPoly& a, const MatrixWordPoly& b);
  friend MatrixWordPoly operator+(const MatrixWordPoly& a, const MatrixWordPoly& b);
  friend MatrixWordPoly operator-(const MatrixWordPoly& a, const MatrixWordPoly& b);
  TracePolynomial trace() const;
};

MatrixWordPoly commutator(const MatrixWordPoly& a, const MatrixWordPoly& b);

// tr([a1,a2]^2), the orbit-type relation for two SU(2) links
TracePolynomial su2_stratum_relation();

} // namespace qc

#endif
