#include "qc/su3.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace qc::su3 {

long dim(const Irrep& r) { return (long(r.n) + 1) * (r.m + 1) * (r.n + r.m + 2) / 2; }

Rational zeta(const Irrep& r) {
  const long n1 = r.n + 1, m1 = r.m + 1;
  return Rational(2 * (n1 * n1 + m1 * m1 + n1 * m1), 3);
}

std::map<Irrep, int> cg_series(const Irrep& a, const Irrep& b) {
  std::map<Irrep, int> out;
  for (int i = 0; i <= std::min(a.n, b.m); ++i)
    for (int j = 0; j <= std::min(b.n, a.m); ++j) {
      ++out[Irrep{a.n + b.n - i - j, a.m + b.m - i - j}];
      for (int k = 1; k <= std::min(a.n - i, b.n - j); ++k)
        ++out[Irrep{a.n + b.n - i - j - 2 * k, a.m + b.m - i - j + k}];
      for (int k = 1; k <= std::min(a.m - j, b.m - i); ++k)
        ++out[Irrep{a.n + b.n - i - j + k, a.m + b.m - i - j - 2 * k}];
    }
  return out;
}

int Rep::weight_index(const WeightLabel& w) const {
  for (std::size_t i = 0; i < weights_.size(); ++i)
    if (weights_[i] == w) return int(i);
  return -1;
}

Eigen::MatrixXcd Rep::algebra_element(const std::array<double, 8>& c) const {
  const std::complex<double> imag_unit(0.0, 1.0);
  const long d = dimension();
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
  // Gell-Mann images assembled from the gl operator images
  acc += ((c[0] * (op_[E12] + op_[E21])).eval()).cast<std::complex<double>>();
  acc += c[1] * (-imag_unit) * (op_[E12] - op_[E21]).cast<std::complex<double>>();
  acc += ((c[2] * op_[H1]).eval()).cast<std::complex<double>>();
  acc += ((c[3] * (op_[E13] + op_[E31])).eval()).cast<std::complex<double>>();
  acc += c[4] * (-imag_unit) * (op_[E13] - op_[E31]).cast<std::complex<double>>();
  acc += ((c[5] * (op_[E23] + op_[E32])).eval()).cast<std::complex<double>>();
  acc += c[6] * (-imag_unit) * (op_[E23] - op_[E32]).cast<std::complex<double>>();
  acc += ((c[7] * (1.0 / std::sqrt(3.0)) * (op_[H1] + 2.0 * op_[H2])).eval())
             .cast<std::complex<double>>();
  return imag_unit * 0.5 * acc;
}

Eigen::MatrixXcd Rep::group_element(const std::array<double, 8>& c) const {
  const Eigen::MatrixXcd x = algebra_element(c);
  // x is anti-hermitian; exponentiate through the hermitian -i x
  const std::complex<double> imag_unit(0.0, 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(-imag_unit * x);
  Eigen::VectorXcd phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i)
    phases(i) = std::exp(imag_unit * es.eigenvalues()(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

namespace {

constexpr double kGramTol = 1e-9;

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

bool weight_greater(std::pair<int, int> a, std::pair<int, int> b) { return a > b; }

struct RepData {
  Irrep label;
  std::array<Matrix, Rep::kOpCount> op;
  std::vector<WeightLabel> weights;
};

void derive_long_roots(std::array<Matrix, Rep::kOpCount>& op) {
  op[Rep::E13] = op[Rep::E12] * op[Rep::E23] - op[Rep::E23] * op[Rep::E12];
  op[Rep::E31] = op[Rep::E32] * op[Rep::E21] - op[Rep::E21] * op[Rep::E32];
}

void assign_counters(std::vector<WeightLabel>& weights) {
  std::map<std::pair<int, int>, int> seen;
  for (auto& w : weights) w.counter = ++seen[{w.w1, w.w2}];
}

RepData trivial_rep() {
  RepData b;
  b.label = {0, 0};
  for (auto& m : b.op) m = Matrix::Zero(1, 1);
  b.weights = {{0, 0, 1}};
  return b;
}

// fundamental (1,0) or its contragredient (0,1), basis sorted by weight
RepData fundamental_rep(bool dual) {
  Matrix e12 = Matrix::Zero(3, 3), e23 = Matrix::Zero(3, 3);
  e12(0, 1) = 1;
  e23(1, 2) = 1;
  Matrix h1 = Matrix::Zero(3, 3), h2 = Matrix::Zero(3, 3);
  h1.diagonal() << 1, -1, 0;
  h2.diagonal() << 0, 1, -1;

  std::array<Matrix, Rep::kOpCount> op;
  if (!dual) {
    op[Rep::E12] = e12;
    op[Rep::E21] = e12.transpose();
    op[Rep::E23] = e23;
    op[Rep::E32] = e23.transpose();
    op[Rep::H1] = h1;
    op[Rep::H2] = h2;
  } else {
    // contragredient action X -> -X^T
    op[Rep::E12] = -e12.transpose();
    op[Rep::E21] = -e12;
    op[Rep::E23] = -e23.transpose();
    op[Rep::E32] = -e23;
    op[Rep::H1] = -h1;
    op[Rep::H2] = -h2;
  }

  derive_long_roots(op);

  std::vector<std::pair<int, int>> w(3);
  for (int i = 0; i < 3; ++i)
    w[i] = {int(std::lround(op[Rep::H1](i, i))), int(std::lround(op[Rep::H2](i, i)))};
  std::vector<int> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return weight_greater(w[a], w[b]); });

  RepData b;
  b.label = dual ? Irrep{0, 1} : Irrep{1, 0};
  Matrix perm = Matrix::Zero(3, 3); // new basis vector r = old basis order[r]
  for (int r = 0; r < 3; ++r) perm(r, order[r]) = 1;
  for (int o = 0; o < Rep::kOpCount; ++o) b.op[o] = perm * op[o] * perm.transpose();
  b.weights.resize(3);
  for (int r = 0; r < 3; ++r) b.weights[r] = {w[order[r]].first, w[order[r]].second, 1};
  assign_counters(b.weights);
  return b;
}

// tensor-product operator a (x) 1 + 1 (x) b
Matrix tensor_sum(const Matrix& a, const Matrix& b) {
  const long da = a.rows(), db = b.rows();
  Matrix out = Matrix::Zero(da * db, da * db);
  for (long i = 0; i < da; ++i)
    for (long k = 0; k < da; ++k) {
      if (a(i, k) != 0.0)
        for (long j = 0; j < db; ++j) out(i * db + j, k * db + j) += a(i, k);
    }
  for (long i = 0; i < da; ++i)
    for (long j = 0; j < db; ++j)
      for (long l = 0; l < db; ++l)
        if (b(j, l) != 0.0) out(i * db + j, i * db + l) += b(j, l);
  return out;
}

// weight of each tensor basis vector
std::vector<std::pair<int, int>> tensor_weights(const Rep& a, const Rep& b) {
  std::vector<std::pair<int, int>> out;
  out.reserve(std::size_t(a.dimension() * b.dimension()));
  for (long i = 0; i < a.dimension(); ++i)
    for (long j = 0; j < b.dimension(); ++j)
      out.push_back({a.weights()[std::size_t(i)].w1 + b.weights()[std::size_t(j)].w1,
                     a.weights()[std::size_t(i)].w2 + b.weights()[std::size_t(j)].w2});
  return out;
}

// orthonormal basis of { v in weight space W : e12 v = 0, e23 v = 0 },
// deterministically ordered, first nonzero coordinate positive
std::vector<Vector> highest_weight_vectors(const Matrix& e12, const Matrix& e23,
                                           const std::vector<std::pair<int, int>>& weights,
                                           std::pair<int, int> target) {
  std::vector<long> members;
  for (long i = 0; i < long(weights.size()); ++i)
    if (weights[std::size_t(i)] == target) members.push_back(i);
  if (members.empty()) return {};
  const long w = long(members.size());
  Matrix basis = Matrix::Zero(e12.rows(), w);
  for (long c = 0; c < w; ++c) basis(members[std::size_t(c)], c) = 1.0;
  Matrix constraint(2 * e12.rows(), w);
  constraint << e12 * basis, e23 * basis;
  Eigen::FullPivLU<Matrix> lu(constraint);
  lu.setThreshold(kGramTol);
  std::vector<Vector> out;
  if (lu.dimensionOfKernel() == 0) return out;
  const Matrix kernel = lu.kernel();
  for (long c = 0; c < kernel.cols(); ++c) {
    Vector v = basis * kernel.col(c);
    for (const Vector& prev : out) v -= prev.dot(v) * prev;
    const double nrm = v.norm();
    if (nrm < kGramTol) continue;
    v /= nrm;
    for (long i = 0; i < v.size(); ++i) {
      if (std::abs(v(i)) > kGramTol) {
        if (v(i) < 0) v = -v;
        break;
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

RepData build_rep_data(const Irrep& r, long dim_cap) {
  if (r.n == 0 && r.m == 0) return trivial_rep();
  if (r.n == 1 && r.m == 0) return fundamental_rep(false);
  if (r.n == 0 && r.m == 1) return fundamental_rep(true);

  const long target_dim = dim(r);
  if (target_dim > dim_cap)
    throw std::runtime_error("irrep dimension " + std::to_string(target_dim) +
                             " exceeds the cap " + std::to_string(dim_cap));

  // realize inside (n-1, m) (x) (1,0), or (0, m-1) (x) (0,1) when n = 0;
  // the target occurs there with multiplicity one
  const Irrep left = r.n > 0 ? Irrep{r.n - 1, r.m} : Irrep{0, r.m - 1};
  const Irrep right = r.n > 0 ? Irrep{1, 0} : Irrep{0, 1};
  const auto a = build_irrep(left, dim_cap);
  const auto b = build_irrep(right, dim_cap);

  std::array<Matrix, Rep::kOpCount> amb;
  for (int o = 0; o < Rep::kOpCount; ++o)
    amb[o] = tensor_sum(a->op(Rep::Op(o)), b->op(Rep::Op(o)));
  const auto wts = tensor_weights(*a, *b);

  const auto hw = highest_weight_vectors(amb[Rep::E12], amb[Rep::E23], wts, {r.n, r.m});
  if (hw.size() != 1)
    throw std::runtime_error("highest-weight solve failed for irrep " + r.str());

  // generate the irreducible subspace by lowering, Gram-Schmidt within
  // weight spaces in discovery order
  struct BasisVec {
    Vector v;
    std::pair<int, int> weight;
  };
  std::vector<BasisVec> basis{{hw[0], {r.n, r.m}}};
  const std::array<Rep::Op, 2> lowering{Rep::E21, Rep::E32};
  const std::array<std::pair<int, int>, 2> root_shift{{{-2, 1}, {1, -2}}};
  for (std::size_t head = 0; head < basis.size() && long(basis.size()) < target_dim; ++head) {
    for (int l = 0; l < 2; ++l) {
      Vector cand = amb[lowering[std::size_t(l)]] * basis[head].v;
      if (cand.norm() < kGramTol) continue;
      const std::pair<int, int> w{basis[head].weight.first + root_shift[std::size_t(l)].first,
                                  basis[head].weight.second + root_shift[std::size_t(l)].second};
      for (const auto& prev : basis)
        if (prev.weight == w) cand -= prev.v.dot(cand) * prev.v;
      const double nrm = cand.norm();
      if (nrm < kGramTol) continue;
      cand /= nrm;
      basis.push_back({std::move(cand), w});
      if (long(basis.size()) == target_dim) break;
    }
  }
  if (long(basis.size()) != target_dim)
    throw std::runtime_error("lowering orbit did not close for irrep " + r.str());

  // deterministic order: weights descending, ties by discovery
  std::vector<long> order(basis.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = long(i);
  std::stable_sort(order.begin(), order.end(), [&](long x, long y) {
    return weight_greater(basis[std::size_t(x)].weight, basis[std::size_t(y)].weight);
  });

  Matrix frame(amb[Rep::H1].rows(), target_dim); // columns are basis vectors
  RepData out;
  out.label = r;
  out.weights.resize(std::size_t(target_dim));
  for (long c = 0; c < target_dim; ++c) {
    frame.col(c) = basis[std::size_t(order[std::size_t(c)])].v;
    const auto w = basis[std::size_t(order[std::size_t(c)])].weight;
    out.weights[std::size_t(c)] = {w.first, w.second, 1};
  }
  assign_counters(out.weights);
  for (int o = 0; o < Rep::kOpCount; ++o) out.op[o] = frame.transpose() * amb[o] * frame;
  return out;
}

std::mutex g_rep_mutex;
std::map<Irrep, std::shared_ptr<const Rep>>& rep_cache() {
  static std::map<Irrep, std::shared_ptr<const Rep>> cache;
  return cache;
}

} // namespace

// private-member filler; Rep declares build_irrep as friend
std::shared_ptr<const Rep> build_irrep(const Irrep& r, long dim_cap) {
  if (r.n < 0 || r.m < 0) throw std::domain_error("negative Dynkin label");
  {
    std::lock_guard lock(g_rep_mutex);
    auto it = rep_cache().find(r);
    if (it != rep_cache().end()) return it->second;
  }
  RepData data = build_rep_data(r, dim_cap);
  auto rep = std::make_shared<Rep>();
  rep->label_ = data.label;
  rep->op_ = std::move(data.op);
  rep->weights_ = std::move(data.weights);
  std::lock_guard lock(g_rep_mutex);
  auto [it, inserted] = rep_cache().emplace(r, std::move(rep));
  return it->second;
}

// ---------------------------------------------------------------------------
// Clebsch-Gordan tensors
// ---------------------------------------------------------------------------

namespace {

using CGKey = std::tuple<Irrep, Irrep, Irrep, int>;

std::mutex g_cg_mutex;
std::map<CGKey, std::shared_ptr<const CGTensor>>& cg_cache() {
  static std::map<CGKey, std::shared_ptr<const CGTensor>> cache;
  return cache;
}
std::map<CGKey, std::shared_ptr<const CGTensor>>& cg_overrides() {
  static std::map<CGKey, std::shared_ptr<const CGTensor>> overrides;
  return overrides;
}

std::shared_ptr<const CGTensor> cg_compute(const Irrep& r1, const Irrep& r2, const Irrep& target,
                                           int k) {
  const auto series = cg_series(r1, r2);
  auto it = series.find(target);
  const int mult = it == series.end() ? 0 : it->second;
  if (k < 1 || k > mult)
    throw std::domain_error("coupling " + r1.str() + " x " + r2.str() + " -> " + target.str() +
                            " has multiplicity " + std::to_string(mult) + ", requested sector " +
                            std::to_string(k));
  const auto a = build_irrep(r1);
  const auto b = build_irrep(r2);
  const auto t = build_irrep(target);
  const long d1 = a->dimension(), d2 = b->dimension(), dt = t->dimension();

  std::array<Matrix, Rep::kOpCount> amb;
  for (int o = 0; o < Rep::kOpCount; ++o)
    amb[o] = tensor_sum(a->op(Rep::Op(o)), b->op(Rep::Op(o)));
  const auto wts = tensor_weights(*a, *b);

  const auto hw = highest_weight_vectors(amb[Rep::E12], amb[Rep::E23], wts, {target.n, target.m});
  if (int(hw.size()) != mult)
    throw std::runtime_error("multiplicity mismatch in CG solve for " + target.str());

  // The whole isometry is determined by the highest-weight column and the
  // lowering relations of the reference irrep: process weight blocks by
  // root height below the highest weight, solving the linear relations
  //   Delta(L) iota(y) = sum_x <x|L|y> iota(x)
  // for the columns of each block.
  Matrix iota = Matrix::Zero(d1 * d2, dt);

  // group basis indices into weight blocks and order blocks by height
  std::map<std::pair<int, int>, std::vector<long>> blocks;
  for (long i = 0; i < dt; ++i) {
    const auto& w = t->weights()[std::size_t(i)];
    blocks[{w.w1, w.w2}].push_back(i);
  }
  std::vector<std::pair<int, std::pair<int, int>>> order; // (height, weight)
  for (const auto& [w, members] : blocks)
    order.push_back({target.n + target.m - w.first - w.second, w});
  std::sort(order.begin(), order.end());

  std::vector<bool> solved(std::size_t(dt), false);
  const std::array<Rep::Op, 2> lowering{Rep::E21, Rep::E32};
  for (const auto& [height, w] : order) {
    const auto& members = blocks.at(w);
    const long bsize = long(members.size());
    if (height == 0) {
      // the highest-weight block is one-dimensional and comes from the
      // kernel solve
      if (bsize != 1) throw std::runtime_error("degenerate highest weight in " + target.str());
      iota.col(members[0]) = hw[std::size_t(k - 1)];
      solved[std::size_t(members[0])] = true;
      continue;
    }
    std::vector<std::pair<Vector, Vector>> rows; // (coefficients over block, rhs in ambient)
    for (int l = 0; l < 2; ++l) {
      const Matrix& g = t->op(lowering[std::size_t(l)]);
      for (long y = 0; y < dt; ++y) {
        if (!solved[std::size_t(y)]) continue;
        Vector coeff = Vector::Zero(bsize);
        bool touches = false;
        for (long x = 0; x < bsize; ++x) {
          coeff(x) = g(members[std::size_t(x)], y);
          touches = touches || coeff(x) != 0.0;
        }
        if (!touches) continue;
        // lowering lands entirely in this weight block
        Vector rhs = amb[lowering[std::size_t(l)]] * iota.col(y);
        rows.push_back({std::move(coeff), std::move(rhs)});
      }
    }
    if (long(rows.size()) < bsize)
      throw std::runtime_error("underdetermined CG block for " + target.str());
    Matrix lhs(long(rows.size()), bsize);
    Matrix rhs(long(rows.size()), d1 * d2);
    for (long rr = 0; rr < long(rows.size()); ++rr) {
      lhs.row(rr) = rows[std::size_t(rr)].first.transpose();
      rhs.row(rr) = rows[std::size_t(rr)].second.transpose();
    }
    // least-squares solve (the system is consistent by construction)
    const Matrix sol = lhs.colPivHouseholderQr().solve(rhs); // bsize x (d1 d2)
    for (long x = 0; x < bsize; ++x) {
      iota.col(members[std::size_t(x)]) = sol.row(x).transpose();
      solved[std::size_t(members[std::size_t(x)])] = true;
    }
  }

  auto tensor = std::make_shared<CGTensor>();
  tensor->r1 = r1;
  tensor->r2 = r2;
  tensor->target = target;
  tensor->k = k;
  tensor->iota = std::move(iota);
  return tensor;
}

} // namespace

std::shared_ptr<const CGTensor> cg(const Irrep& r1, const Irrep& r2, const Irrep& target, int k) {
  const CGKey key{r1, r2, target, k};
  {
    std::lock_guard lock(g_cg_mutex);
    auto ov = cg_overrides().find(key);
    if (ov != cg_overrides().end()) return ov->second;
    auto it = cg_cache().find(key);
    if (it != cg_cache().end()) return it->second;
  }
  auto tensor = cg_compute(r1, r2, target, k);
  std::lock_guard lock(g_cg_mutex);
  auto [it, inserted] = cg_cache().emplace(key, std::move(tensor));
  return it->second;
}

std::string cg_to_csv(const CGTensor& t) {
  const auto a = build_irrep(t.r1);
  const auto b = build_irrep(t.r2);
  const auto tt = build_irrep(t.target);
  std::ostringstream os;
  os << "# " << t.r1.str() << "," << t.r2.str() << "," << t.target.str() << "," << t.k << "\n";
  os << "mu1,mu2,mu,k,re,im\n";
  char buf[64];
  for (long i = 0; i < a->dimension(); ++i)
    for (long j = 0; j < b->dimension(); ++j)
      for (long v = 0; v < tt->dimension(); ++v) {
        const double value = t.iota(i * b->dimension() + j, v);
        if (std::abs(value) < 1e-14) continue;
        std::snprintf(buf, sizeof buf, "%.17g", value);
        os << a->weights()[std::size_t(i)].str() << "," << b->weights()[std::size_t(j)].str() << ","
           << tt->weights()[std::size_t(v)].str() << "," << t.k << "," << buf << ",0\n";
      }
  return os.str();
}

namespace {

WeightLabel parse_weight_label(const std::string& text) {
  WeightLabel w;
  if (std::sscanf(text.c_str(), "%d:%d:%d", &w.w1, &w.w2, &w.counter) != 3)
    throw std::invalid_argument("bad weight label '" + text + "'");
  return w;
}

} // namespace

void import_cg_csv(const std::string& csv_text) {
  std::istringstream is(csv_text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0)
    throw std::invalid_argument("CSV must start with a '# r1,r2,target,k' header line");
  Irrep r1, r2, target;
  int k = 1;
  {
    std::istringstream hs(line.substr(2));
    std::string tok;
    std::vector<std::string> toks;
    while (std::getline(hs, tok, ',')) toks.push_back(tok);
    if (toks.size() != 4 || toks[0].size() != 2 || toks[1].size() != 2 || toks[2].size() != 2)
      throw std::invalid_argument("bad CSV header");
    r1 = {toks[0][0] - '0', toks[0][1] - '0'};
    r2 = {toks[1][0] - '0', toks[1][1] - '0'};
    target = {toks[2][0] - '0', toks[2][1] - '0'};
    k = std::stoi(toks[3]);
  }
  const auto a = build_irrep(r1);
  const auto b = build_irrep(r2);
  const auto t = build_irrep(target);

  auto tensor = std::make_shared<CGTensor>();
  tensor->r1 = r1;
  tensor->r2 = r2;
  tensor->target = target;
  tensor->k = k;
  tensor->iota = Matrix::Zero(a->dimension() * b->dimension(), t->dimension());

  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("mu1", 0) == 0) continue;
    std::istringstream ls(line);
    std::string tok;
    std::vector<std::string> toks;
    while (std::getline(ls, tok, ',')) toks.push_back(tok);
    if (toks.size() != 6) throw std::invalid_argument("bad CSV row '" + line + "'");
    const int i = a->weight_index(parse_weight_label(toks[0]));
    const int j = b->weight_index(parse_weight_label(toks[1]));
    const int v = t->weight_index(parse_weight_label(toks[2]));
    if (i < 0 || j < 0 || v < 0) throw std::invalid_argument("unknown weight label in '" + line + "'");
    if (std::stod(toks[5]) != 0.0) throw std::invalid_argument("complex CG imports not supported");
    tensor->iota(long(i) * b->dimension() + j, v) = std::stod(toks[4]);
  }

  std::lock_guard lock(g_cg_mutex);
  cg_overrides()[CGKey{r1, r2, target, k}] = std::move(tensor);
}

void clear_cg_overrides() {
  std::lock_guard lock(g_cg_mutex);
  cg_overrides().clear();
}

// ---------------------------------------------------------------------------
// 9-lambda symbols, norms, expansions
// ---------------------------------------------------------------------------

namespace {

bool coupling_exists(const Irrep& a, const Irrep& b, const Irrep& t, int k) {
  const auto series = cg_series(a, b);
  auto it = series.find(t);
  return it != series.end() && k >= 1 && k <= it->second;
}

} // namespace

double nine_lambda(const std::array<std::array<Irrep, 3>, 3>& rows, const std::array<int, 3>& row_k,
                   const std::array<int, 3>& col_k, int target_weight_index) {
  // full row property
  for (int i = 0; i < 3; ++i)
    if (!coupling_exists(rows[i][0], rows[i][1], rows[i][2], row_k[i])) return 0.0;
  // full column property
  if (!coupling_exists(rows[0][0], rows[1][0], rows[2][0], col_k[0])) return 0.0;
  if (!coupling_exists(rows[0][1], rows[1][1], rows[2][1], col_k[1])) return 0.0;
  if (!coupling_exists(rows[0][2], rows[1][2], rows[2][2], col_k[2])) return 0.0;

  const auto c1 = cg(rows[0][0], rows[0][1], rows[0][2], row_k[0]);
  const auto c2 = cg(rows[1][0], rows[1][1], rows[1][2], row_k[1]);
  const auto c3 = cg(rows[2][0], rows[2][1], rows[2][2], row_k[2]);
  const auto cr = cg(rows[0][2], rows[1][2], rows[2][2], col_k[2]);
  const auto s1 = cg(rows[0][0], rows[1][0], rows[2][0], col_k[0]);
  const auto s2 = cg(rows[0][1], rows[1][1], rows[2][1], col_k[1]);

  const long d11 = dim(rows[0][0]), d12 = dim(rows[0][1]), d1 = dim(rows[0][2]);
  const long d21 = dim(rows[1][0]), d22 = dim(rows[1][1]), d2 = dim(rows[1][2]);
  const long d31 = dim(rows[2][0]), d32 = dim(rows[2][1]), d3 = dim(rows[2][2]);
  if (target_weight_index < 0 || target_weight_index >= d3)
    throw std::domain_error("target weight index out of range");

  // T[(mu11 mu12), (mu21 mu22)] = sum_{mu1 mu2} C1 C2 CR(mu1, mu2, fixed)
  Matrix kmat(d1, d2);
  for (long x = 0; x < d1; ++x)
    for (long y = 0; y < d2; ++y) kmat(x, y) = cr->iota(x * d2 + y, target_weight_index);
  const Matrix t_block = c1->iota * kmat * c2->iota.transpose(); // (d11 d12) x (d21 d22)

  // regroup to U[(mu11 mu21), (mu12 mu22)]
  Matrix u(d11 * d21, d12 * d22);
  for (long a = 0; a < d11; ++a)
    for (long b = 0; b < d12; ++b)
      for (long c = 0; c < d21; ++c)
        for (long d = 0; d < d22; ++d) u(a * d21 + c, b * d22 + d) = t_block(a * d12 + b, c * d22 + d);

  const Matrix v = s1->iota.transpose() * u;        // d31 x (d12 d22)
  const Matrix w = v * s2->iota;                    // d31 x d32
  double acc = 0.0;
  for (long x = 0; x < d31; ++x)
    for (long y = 0; y < d32; ++y) acc += w(x, y) * c3->iota(x * d32 + y, target_weight_index);
  return acc;
}

double norm(const Irrep& r1, const Irrep& r2, const Irrep& root, const NormParams& p) {
  if (p.hbar <= 0 || p.beta <= 0) throw std::domain_error("norm parameters must be positive");
  const double pi = 3.14159265358979323846;
  return std::sqrt(double(dim(root)) / (double(dim(r1)) * double(dim(r2)))) *
         std::pow(p.hbar * pi, 4.0) *
         std::exp(p.hbar * p.beta * p.beta * (to_double(zeta(r1)) + to_double(zeta(r2))));
}

std::string QuasicharKey::str() const {
  std::string s = r1.str() + "," + r2.str() + "," + root.str();
  if (k != 1 || k_prime != 1) s += "[" + std::to_string(k) + "," + std::to_string(k_prime) + "]";
  return s;
}

std::complex<double> evaluate(const QuasicharKey& q, const std::array<double, 8>& a1,
                              const std::array<double, 8>& a2) {
  const auto rep1 = build_irrep(q.r1);
  const auto rep2 = build_irrep(q.r2);
  const auto ck = cg(q.r1, q.r2, q.root, q.k);
  const auto ckp = cg(q.r1, q.r2, q.root, q.k_prime);
  const Eigen::MatrixXcd d1 = rep1->group_element(a1);
  const Eigen::MatrixXcd d2 = rep2->group_element(a2);
  const long n1 = rep1->dimension(), n2 = rep2->dimension();
  Eigen::MatrixXcd big(n1 * n2, n1 * n2);
  for (long i = 0; i < n1; ++i)
    for (long j = 0; j < n2; ++j)
      for (long k = 0; k < n1; ++k)
        for (long l = 0; l < n2; ++l) big(i * n2 + j, k * n2 + l) = d1(i, k) * d2(j, l);
  // trace over the coupled subspace: tr(iota_{k'}^T (D1 (x) D2) iota_k)
  return (ckp->iota.transpose().cast<std::complex<double>>() * big *
          ck->iota.cast<std::complex<double>>())
      .trace();
}

Expansion expand_invariant(const TracePolynomial& p) {
  if (p.max_link() > 2) throw std::domain_error("two-link words only");
  Expansion result;

  // numeric (J, nu', nu) coefficient table per link pair
  std::map<std::array<int, 8>, double> cnum; // (n1,m1,nu1',nu1, n2,m2,nu2',nu2)

  for (const auto& term : p.terms) {
    const auto& word = term.word.factors;
    const double coeff = to_double(term.coeff);
    if (word.empty()) {
      result[QuasicharKey{{0, 0}, {0, 0}, {0, 0}, 1, 1}] += 3.0 * coeff;
      continue;
    }
    for (const auto& [link, e] : word)
      if (e < 0) throw std::domain_error("SU(3) expansion supports nonnegative exponents only");

    const int len = int(word.size());
    std::array<std::vector<int>, 2> slots;
    for (int pos = 0; pos < len; ++pos) slots[std::size_t(word[pos].first - 1)].push_back(pos);

    // per-link decompositions of the fundamental tensor powers into
    // (path isometry, root irrep)
    struct Path {
      Irrep root;
      Matrix iota; // 3^o x dim(root)
    };
    std::array<std::vector<Path>, 2> paths;
    for (int link = 0; link < 2; ++link) {
      const int o = int(slots[std::size_t(link)].size());
      if (o == 0) continue;
      std::vector<Path> acc{{Irrep{1, 0}, Matrix::Identity(3, 3)}};
      for (int step = 1; step < o; ++step) {
        std::vector<Path> next;
        for (const auto& path : acc) {
          for (const auto& [tgt, mult] : cg_series(path.root, Irrep{1, 0}))
            for (int k = 1; k <= mult; ++k) {
              const auto step_cg = cg(path.root, Irrep{1, 0}, tgt, k);
              const long dr = dim(path.root);
              // (iota (x) 1_3) * step: (3^step * 3) x dim(tgt)
              Matrix lifted(path.iota.rows() * 3, dim(tgt));
              for (long row = 0; row < path.iota.rows(); ++row)
                for (long f = 0; f < 3; ++f) {
                  Eigen::RowVectorXd target_row = Eigen::RowVectorXd::Zero(dim(tgt));
                  for (long c = 0; c < dr; ++c)
                    if (path.iota(row, c) != 0.0)
                      target_row += path.iota(row, c) * step_cg->iota.row(c * 3 + f);
                  lifted.row(row * 3 + f) = target_row;
                }
              next.push_back({tgt, std::move(lifted)});
            }
        }
        acc = std::move(next);
      }
      paths[std::size_t(link)] = std::move(acc);
    }

    // chains over fundamental indices
    std::vector<int> chain(len, 0);
    while (true) {
      // per-link flattened (u, v) row indices into the 3^o spaces
      std::array<long, 2> urow{0, 0}, vrow{0, 0};
      for (int link = 0; link < 2; ++link)
        for (int pos : slots[std::size_t(link)]) {
          urow[std::size_t(link)] = urow[std::size_t(link)] * 3 + chain[pos];
          vrow[std::size_t(link)] = vrow[std::size_t(link)] * 3 + chain[(pos + 1) % len];
        }

      // accumulate over per-link paths
      const int np1 = paths[0].empty() ? 1 : int(paths[0].size());
      const int np2 = paths[1].empty() ? 1 : int(paths[1].size());
      for (int p1 = 0; p1 < np1; ++p1) {
        for (int p2 = 0; p2 < np2; ++p2) {
          const bool has1 = !paths[0].empty(), has2 = !paths[1].empty();
          const Irrep j1 = has1 ? paths[0][std::size_t(p1)].root : Irrep{0, 0};
          const Irrep j2 = has2 ? paths[1][std::size_t(p2)].root : Irrep{0, 0};
          const long dj1 = dim(j1), dj2 = dim(j2);
          for (long nu1p = 0; nu1p < dj1; ++nu1p) {
            const double f1p = has1 ? paths[0][std::size_t(p1)].iota(urow[0], nu1p) : 1.0;
            if (f1p == 0.0) continue;
            for (long nu1 = 0; nu1 < dj1; ++nu1) {
              const double f1 = has1 ? paths[0][std::size_t(p1)].iota(vrow[0], nu1) : 1.0;
              if (f1 == 0.0) continue;
              for (long nu2p = 0; nu2p < dj2; ++nu2p) {
                const double f2p = has2 ? paths[1][std::size_t(p2)].iota(urow[1], nu2p) : 1.0;
                if (f2p == 0.0) continue;
                for (long nu2 = 0; nu2 < dj2; ++nu2) {
                  const double f2 = has2 ? paths[1][std::size_t(p2)].iota(vrow[1], nu2) : 1.0;
                  if (f2 == 0.0) continue;
                  cnum[{j1.n, j1.m, int(nu1p), int(nu1), j2.n, j2.m, int(nu2p), int(nu2)}] +=
                      coeff * f1p * f1 * f2p * f2;
                }
              }
            }
          }
        }
      }

      int carry = len - 1;
      while (carry >= 0 && ++chain[carry] == 3) chain[carry--] = 0;
      if (carry < 0) break;
    }
  }

  // Schur projection onto the cherry quasicharacters
  for (const auto& [key, val] : cnum) {
    if (std::abs(val) < 1e-13) continue;
    const Irrep j1{key[0], key[1]}, j2{key[4], key[5]};
    const long nu1p = key[2], nu1 = key[3], nu2p = key[6], nu2 = key[7];
    const long d2 = dim(j2);
    for (const auto& [root, mult] : cg_series(j1, j2)) {
      for (int k = 1; k <= mult; ++k)
        for (int kp = 1; kp <= mult; ++kp) {
          const auto ck = cg(j1, j2, root, k);
          const auto ckp = cg(j1, j2, root, kp);
          double acc = 0.0;
          for (long nu = 0; nu < dim(root); ++nu)
            acc += ck->iota(nu1 * d2 + nu2, nu) * ckp->iota(nu1p * d2 + nu2p, nu);
          if (acc == 0.0) continue;
          result[QuasicharKey{j1, j2, root, k, kp}] += val * acc / double(dim(root));
        }
    }
  }

  for (auto it = result.begin(); it != result.end();) {
    if (std::abs(it->second) < 1e-12)
      it = result.erase(it);
    else
      ++it;
  }
  return result;
}

Expansion operator_row(const Expansion& op_expansion, const QuasicharKey& source,
                       const NormParams& p) {
  Expansion row;
  const double source_norm = norm(source.r1, source.r2, source.root, p);
  for (const auto& [op, e] : op_expansion) {
    if (op.r1 == Irrep{0, 0} && op.r2 == Irrep{0, 0} && op.root == Irrep{0, 0}) {
      row[source] += e;
      continue;
    }
    const auto leaf1_series = cg_series(op.r1, source.r1);
    const auto leaf2_series = cg_series(op.r2, source.r2);
    const auto root_series = cg_series(op.root, source.root);
    for (const auto& [t1, mult1] : leaf1_series)
      for (const auto& [t2, mult2] : leaf2_series) {
        const auto target_roots = cg_series(t1, t2);
        for (const auto& [troot, tmult] : target_roots) {
          for (int l = 1; l <= tmult; ++l)
            for (int lp = 1; lp <= tmult; ++lp) {
              double coeff = 0.0;
              for (int k1 = 1; k1 <= mult1; ++k1)
                for (int k2 = 1; k2 <= mult2; ++k2) {
                  auto it = root_series.find(troot);
                  if (it == root_series.end()) continue;
                  for (int kr = 1; kr <= it->second; ++kr) {
                    const std::array<std::array<Irrep, 3>, 3> rows{
                        {{op.r1, op.r2, op.root}, {source.r1, source.r2, source.root},
                         {t1, t2, troot}}};
                    const double w_unprimed =
                        nine_lambda(rows, {op.k, source.k, l}, {k1, k2, kr});
                    if (w_unprimed == 0.0) continue;
                    const double w_primed =
                        nine_lambda(rows, {op.k_prime, source.k_prime, lp}, {k1, k2, kr});
                    coeff += w_primed * w_unprimed;
                  }
                }
              if (std::abs(coeff) < 1e-13) continue;
              const QuasicharKey target{t1, t2, troot, l, lp};
              row[target] += e * coeff * norm(t1, t2, troot, p) / source_norm;
            }
          }
      }
  }
  for (auto it = row.begin(); it != row.end();) {
    if (std::abs(it->second) < 1e-12)
      it = row.erase(it);
    else
      ++it;
  }
  return row;
}

TracePolynomial t1_polynomial() {
  const MatrixWordPoly a1 = MatrixWordPoly::link(1), a2 = MatrixWordPoly::link(2);
  return (a1 * a2 * a1 * a2).trace();
}

TracePolynomial t2_polynomial() {
  const MatrixWordPoly a1 = MatrixWordPoly::link(1), a2 = MatrixWordPoly::link(2);
  return (a1 * a1 * a2 * a2).trace();
}

TracePolynomial r1_polynomial() {
  TracePolynomial out = t1_polynomial();
  for (auto term : t2_polynomial().terms) {
    term.coeff = -term.coeff;
    out.terms.push_back(std::move(term));
  }
  return out;
}

std::vector<TracePolynomial> stratum_relations() {
  const MatrixWordPoly a = MatrixWordPoly::link(1), b = MatrixWordPoly::link(2);
  const MatrixWordPoly c = commutator(a, b);
  auto sq = [](const MatrixWordPoly& x) { return x * x; };
  std::vector<TracePolynomial> out;
  out.push_back((c * a * b).trace());                 // r1
  out.push_back((c * a * a * b).trace());             // r2
  out.push_back((c * b * b * a).trace());             // r3
  out.push_back(sq(c * a).trace());                   // r4
  out.push_back(sq(c * b).trace());                   // r5
  out.push_back((c * c * c).trace());                 // r6
  out.push_back(sq(c * a * a).trace());               // r7
  out.push_back(sq(c * b * b).trace());               // r8
  out.push_back(sq(c * a * b).trace());               // r9
  out.push_back(sq(c * a * a * b).trace());           // r10
  out.push_back(sq(c * a * b * a).trace());           // r11
  out.push_back(sq(c * b * a * a).trace());           // r12
  out.push_back(sq(c * b * b * a).trace());           // r13
  out.push_back(sq(c * b * a * b).trace());           // r14
  out.push_back(sq(c * a * b * b).trace());           // r15
  return out;
}

std::array<double, 8> random_algebra_coefficients(std::uint64_t seed, int index) {
  std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ull * std::uint64_t(index + 1));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::array<double, 8> out{};
  for (double& v : out) v = normal(rng);
  return out;
}

} // namespace qc::su3
