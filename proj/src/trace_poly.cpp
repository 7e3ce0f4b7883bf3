#include "qc/trace_poly.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace qc {

TracePolynomial& TracePolynomial::add(const Rational& c, const TraceWord& w) {
  if (c != 0) terms.push_back({c, w});
  return *this;
}

int TracePolynomial::max_link() const {
  int m = 0;
  for (const auto& t : terms)
    for (const auto& [link, e] : t.word.factors) m = std::max(m, link);
  return m;
}

std::string TracePolynomial::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms) {
    Rational c = t.coeff;
    if (!first) {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    first = false;
    if (c != 1) os << to_string(c) << "*";
    os << "tr(";
    bool inner_first = true;
    for (const auto& [link, e] : t.word.factors) {
      if (!inner_first) os << " ";
      inner_first = false;
      os << (e < 0 ? -link : link);
    }
    os << ")";
  }
  return os.str();
}

TracePolynomial parse_trace_polynomial(const std::string& text) {
  TracePolynomial out;
  std::size_t pos = 0;
  const auto fail = [&](const std::string& what) -> std::invalid_argument {
    return std::invalid_argument("trace polynomial parse error at position " + std::to_string(pos) +
                                 ": " + what);
  };
  const auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  if (pos >= text.size()) throw fail("empty input");
  bool first_term = true;
  while (pos < text.size()) {
    skip_ws();
    Rational sign(1);
    if (!first_term) {
      if (pos >= text.size()) break;
      if (text[pos] == '+') {
        ++pos;
      } else if (text[pos] == '-') {
        sign = -1;
        ++pos;
      } else {
        throw fail("expected '+' or '-' between terms");
      }
      skip_ws();
    } else if (pos < text.size() && text[pos] == '-') {
      sign = -1;
      ++pos;
      skip_ws();
    }
    first_term = false;

    // optional rational coefficient followed by '*'
    Rational coeff(1);
    std::size_t probe = pos;
    if (probe < text.size() && (std::isdigit(static_cast<unsigned char>(text[probe])))) {
      std::string num;
      while (probe < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[probe])) || text[probe] == '/'))
        num += text[probe++];
      while (probe < text.size() && std::isspace(static_cast<unsigned char>(text[probe]))) ++probe;
      if (probe < text.size() && text[probe] == '*') {
        coeff = parse_rational(num);
        pos = probe + 1;
        skip_ws();
      }
    }

    if (text.compare(pos, 2, "tr") != 0) throw fail("expected 'tr'");
    pos += 2;
    skip_ws();
    if (pos >= text.size() || text[pos] != '(') throw fail("expected '('");
    ++pos;
    TraceWord word;
    while (true) {
      skip_ws();
      if (pos >= text.size()) throw fail("unterminated tr(...)");
      if (text[pos] == ')') {
        ++pos;
        break;
      }
      bool neg = false;
      if (text[pos] == '-') {
        neg = true;
        ++pos;
      }
      if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
        throw fail("expected signed link index");
      int link = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        link = 10 * link + (text[pos++] - '0');
      if (link == 0) throw fail("link indices are 1-based");
      word.factors.emplace_back(link, neg ? -1 : 1);
    }
    out.add(sign * coeff, word);
    skip_ws();
  }
  return out;
}

std::complex<double> evaluate_trace_polynomial(const TracePolynomial& p,
                                               const std::vector<Eigen::MatrixXcd>& links) {
  std::complex<double> acc = 0.0;
  for (const auto& term : p.terms) {
    if (term.word.factors.empty()) {
      const double d = links.empty() ? 1.0 : double(links[0].rows());
      acc += to_double(term.coeff) * d;
      continue;
    }
    const Eigen::Index dim = links.at(0).rows();
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto& [link, e] : term.word.factors) {
      const Eigen::MatrixXcd& a = links.at(std::size_t(link) - 1);
      prod = e > 0 ? (prod * a).eval() : (prod * a.inverse()).eval();
    }
    acc += to_double(term.coeff) * prod.trace();
  }
  return acc;
}

MatrixWordPoly MatrixWordPoly::link(int index, int exponent) {
  MatrixWordPoly p;
  p.terms.push_back({Rational(1), {{index, exponent}}});
  return p;
}

MatrixWordPoly operator*(const MatrixWordPoly& a, const MatrixWordPoly& b) {
  MatrixWordPoly out;
  for (const auto& ta : a.terms)
    for (const auto& tb : b.terms) {
      MatrixWordPoly::Term t;
      t.coeff = ta.coeff * tb.coeff;
      t.factors = ta.factors;
      t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
      out.terms.push_back(std::move(t));
    }
  return out;
}

MatrixWordPoly operator+(const MatrixWordPoly& a, const MatrixWordPoly& b) {
  MatrixWordPoly out = a;
  out.terms.insert(out.terms.end(), b.terms.begin(), b.terms.end());
  return out;
}

MatrixWordPoly operator-(const MatrixWordPoly& a, const MatrixWordPoly& b) {
  MatrixWordPoly out = a;
  for (auto t : b.terms) {
    t.coeff = -t.coeff;
    out.terms.push_back(std::move(t));
  }
  return out;
}

TracePolynomial MatrixWordPoly::trace() const {
  TracePolynomial out;
  for (const auto& t : terms) out.add(t.coeff, {t.factors});
  return out;
}

MatrixWordPoly commutator(const MatrixWordPoly& a, const MatrixWordPoly& b) {
  return a * b - b * a;
}

TracePolynomial su2_stratum_relation() {
  const MatrixWordPoly a1 = MatrixWordPoly::link(1), a2 = MatrixWordPoly::link(2);
  const MatrixWordPoly c = commutator(a1, a2);
  return (c * c).trace();
}

} // namespace qc
