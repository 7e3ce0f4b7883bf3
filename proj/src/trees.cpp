#include "qc/trees.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace qc {

int CouplingTree::add_leaf(int number) {
  vertices_.push_back({-1, -1, number});
  return int(vertices_.size()) - 1;
}

int CouplingTree::add_node(int left, int right) {
  vertices_.push_back({left, right, 0});
  return int(vertices_.size()) - 1;
}

void CouplingTree::finish() {
  leaf_vertices_.clear();
  for (int v = 0; v < vertex_count(); ++v)
    if (is_leaf(v)) leaf_vertices_.push_back(v);
  leaves_ = int(leaf_vertices_.size());
  // post-order leaf sequence is the planar order; renumber defensively
  std::sort(leaf_vertices_.begin(), leaf_vertices_.end());
}

CouplingTree CouplingTree::leaf() {
  CouplingTree t;
  t.add_leaf(1);
  t.finish();
  return t;
}

CouplingTree CouplingTree::cherry() { return standard_tree(2); }

std::string CouplingTree::str() const {
  auto rec = [&](auto&& self, int v) -> std::string {
    if (is_leaf(v)) return std::to_string(vertices_[v].leaf);
    return "(" + self(self, vertices_[v].left) + " " + self(self, vertices_[v].right) + ")";
  };
  return rec(rec, root());
}

CouplingTree parse_tree(const std::string& text) {
  CouplingTree t;
  std::size_t pos = 0;
  const auto fail = [&](const std::string& what) -> std::invalid_argument {
    return std::invalid_argument("tree parse error at position " + std::to_string(pos) + ": " + what);
  };
  const auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  const auto parse = [&](auto&& self) -> int {
    skip_ws();
    if (pos >= text.size()) throw fail("unexpected end of input");
    if (text[pos] == '(') {
      ++pos;
      const int left = self(self);
      skip_ws();
      if (pos < text.size() && text[pos] == ')') throw fail("group with a single subtree is not binary");
      const int right = self(self);
      skip_ws();
      if (pos >= text.size() || text[pos] != ')') throw fail("expected ')'");
      ++pos;
      return t.add_node(left, right);
    }
    if (!std::isdigit(static_cast<unsigned char>(text[pos]))) throw fail("expected leaf number or '('");
    int number = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      number = 10 * number + (text[pos++] - '0');
    return t.add_leaf(number);
  };
  parse(parse);
  skip_ws();
  if (pos != text.size()) throw fail("trailing input");
  t.finish();
  // leaves must be numbered 1..N in planar order
  std::vector<int> numbers;
  for (int v : t.leaf_vertices()) numbers.push_back(t.vertex(v).leaf);
  for (int i = 0; i < int(numbers.size()); ++i)
    if (numbers[i] != i + 1)
      throw std::invalid_argument("tree leaves must be numbered 1..N in planar order, got leaf " +
                                  std::to_string(numbers[i]) + " in position " + std::to_string(i + 1));
  return t;
}

CouplingTree standard_tree(int n) {
  if (n < 1) throw std::domain_error("tree needs at least one leaf");
  CouplingTree t;
  int acc = t.add_leaf(1);
  for (int i = 2; i <= n; ++i) {
    const int leaf = t.add_leaf(i);
    acc = t.add_node(acc, leaf);
  }
  t.finish();
  return t;
}

int CouplingTree::copy_subtree(const CouplingTree& src, int v, int leaf_offset) {
  if (src.is_leaf(v)) return add_leaf(src.vertex(v).leaf + leaf_offset);
  const int l = copy_subtree(src, src.vertex(v).left, leaf_offset);
  const int r = copy_subtree(src, src.vertex(v).right, leaf_offset);
  return add_node(l, r);
}

CouplingTree join(const CouplingTree& t1, const CouplingTree& t2) {
  CouplingTree t;
  const int l = t.copy_subtree(t1, t1.root(), 0);
  const int r = t.copy_subtree(t2, t2.root(), t1.leaf_count());
  t.add_node(l, r);
  t.finish();
  return t;
}

CouplingTree compose(const CouplingTree& t1, const CouplingTree& t2) {
  const int n2 = t2.leaf_count();
  CouplingTree t;
  auto rec = [&](auto&& self, int v) -> int {
    if (t1.is_leaf(v)) {
      const int offset = (t1.vertex(v).leaf - 1) * n2;
      return t.copy_subtree(t2, t2.root(), offset);
    }
    const int l = self(self, t1.vertex(v).left);
    const int r = self(self, t1.vertex(v).right);
    return t.add_node(l, r);
  };
  rec(rec, t1.root());
  t.finish();
  return t;
}

CouplingTree leaf_duplicate(const CouplingTree& t) { return compose(t, CouplingTree::cherry()); }

std::vector<int> leaf_duplicate_vertex_map(const CouplingTree& t) {
  // Replay the composition: each leaf of t becomes a cherry whose root is
  // the corresponding node of T^vee; nodes of t map to nodes of T^vee.
  std::vector<int> map(t.vertex_count(), -1);
  int next = 0;
  auto rec = [&](auto&& self, int v) -> int {
    if (t.is_leaf(v)) {
      next += 2;           // the two leaves of the cherry
      map[v] = next++;     // the cherry root
      return map[v];
    }
    self(self, t.vertex(v).left);
    self(self, t.vertex(v).right);
    map[v] = next++;
    return map[v];
  };
  rec(rec, t.root());
  return map;
}

Permutation identity_permutation(int n) {
  Permutation p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

Permutation inverse_permutation(const Permutation& p) {
  Permutation inv(p.size());
  for (int i = 0; i < int(p.size()); ++i) inv[p[i]] = i;
  return inv;
}

Permutation interleave_to_blocks(int n) {
  Permutation p(2 * n);
  for (int i = 0; i < n; ++i) {
    p[2 * i] = i;
    p[2 * i + 1] = n + i;
  }
  return p;
}

std::vector<SpinLabelling> enumerate_spin_labellings(const CouplingTree& t,
                                                     const std::vector<HalfInt>& leaves,
                                                     const std::optional<HalfInt>& root) {
  const auto generic = enumerate_labellings(Su2System{}, t, leaves, root);
  std::vector<SpinLabelling> out;
  out.reserve(generic.size());
  for (const auto& lab : generic) {
    SpinLabelling spins(lab.size());
    for (std::size_t v = 0; v < lab.size(); ++v) spins[v] = lab[v].irrep;
    out.push_back(std::move(spins));
  }
  return out;
}

bool is_admissible_spins(const CouplingTree& t, const SpinLabelling& lab) {
  if (int(lab.size()) != t.vertex_count()) return false;
  Labelling<HalfInt> generic(lab.size());
  for (std::size_t v = 0; v < lab.size(); ++v) generic[v] = {lab[v], 1};
  return is_admissible(Su2System{}, t, generic);
}

long multiplicity(const std::vector<HalfInt>& leaves, HalfInt root) {
  if (leaves.empty()) return 0;
  return long(enumerate_spin_labellings(standard_tree(int(leaves.size())), leaves, root).size());
}

std::vector<HalfInt> leaf_spins(const CouplingTree& t, const SpinLabelling& lab) {
  std::vector<HalfInt> out;
  out.reserve(t.leaf_count());
  for (int v : t.leaf_vertices()) out.push_back(lab[v]);
  return out;
}

} // namespace qc
