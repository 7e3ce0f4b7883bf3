#ifndef QC_TREES_HPP
#define QC_TREES_HPP

#include "qc/half_int.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qc {

// Ordered rooted binary coupling tree. Vertices are addressed by their
// post-order index (children before parents, left to right), so the root
// is always the last vertex and the leaves appear in planar order.
class CouplingTree {
public:
  struct Vertex {
    int left = -1;   // post-order index of left child, -1 for leaves
    int right = -1;  // post-order index of right child
    int leaf = 0;    // planar leaf number 1..N for leaves, 0 for nodes
  };

  int vertex_count() const { return int(vertices_.size()); }
  int leaf_count() const { return leaves_; }
  int root() const { return vertex_count() - 1; }
  bool is_leaf(int v) const { return vertices_[v].left < 0; }
  const Vertex& vertex(int v) const { return vertices_[v]; }
  // post-order vertex indices of the leaves, in planar order
  const std::vector<int>& leaf_vertices() const { return leaf_vertices_; }

  std::string str() const;

  friend bool operator==(const CouplingTree& a, const CouplingTree& b) { return a.str() == b.str(); }

  static CouplingTree leaf();
  static CouplingTree cherry();

  friend CouplingTree parse_tree(const std::string& text);
  friend CouplingTree standard_tree(int n);
  friend CouplingTree join(const CouplingTree& t1, const CouplingTree& t2);
  friend CouplingTree compose(const CouplingTree& t1, const CouplingTree& t2);

private:
  std::vector<Vertex> vertices_;
  std::vector<int> leaf_vertices_;
  int leaves_ = 0;

  int add_leaf(int number);
  int add_node(int left, int right);
  void finish();
  int copy_subtree(const CouplingTree& src, int v, int leaf_offset);
};

// Parses a fully parenthesized bracketing over leaves 1..N, e.g.
// "((1 2) (3 (4 5)))". Leaf numbers must be exactly 1..N in some order.
CouplingTree parse_tree(const std::string& text);

// caterpillar tree (((1 2) 3) ... N)
CouplingTree standard_tree(int n);

// join: glue the pendant root edges under a new root; leaves of t2 are
// renumbered to follow those of t1
CouplingTree join(const CouplingTree& t1, const CouplingTree& t2);

// tree composition t1 * t2: replace every leaf of t1 by a copy of t2
CouplingTree compose(const CouplingTree& t1, const CouplingTree& t2);

// leaf duplication T^vee = T * cherry
CouplingTree leaf_duplicate(const CouplingTree& t);

// post-order index in leaf_duplicate(t) of the node corresponding to
// vertex v of t (the nodes of T^vee are in bijection with vertices of T)
std::vector<int> leaf_duplicate_vertex_map(const CouplingTree& t);

// Permutation arrays over 0-based slots; p[i] is the destination slot of
// source slot i, i.e. permuted[p[i]] = original[i].
using Permutation = std::vector<int>;

Permutation identity_permutation(int n);
Permutation inverse_permutation(const Permutation& p);

// permutation taking the interleaved leaf order of leaf_duplicate(T) (with
// 2N leaves) to the block order of join(T, T): slot 2i -> i, slot 2i+1 -> N+i
Permutation interleave_to_blocks(int n);

template <class T>
std::vector<T> apply_permutation(const Permutation& p, const std::vector<T>& v) {
  std::vector<T> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[p[i]] = v[i];
  return out;
}

// ---------------------------------------------------------------------------
// Admissible labellings, generic over the irrep system (so the SU(2) spin
// backend and the SU(3) Dynkin-label backend share one enumerator).
//
// An irrep system provides:
//   using Label = ...;                  // ordered irrep label
//   std::vector<std::pair<Label,int>> series(Label a, Label b) const;
//     // Clebsch-Gordan series with multiplicities, ascending by label
// ---------------------------------------------------------------------------

template <class Label>
struct VertexLabel {
  Label irrep{};
  int k = 1; // multiplicity counter, 1-based
  friend bool operator==(const VertexLabel&, const VertexLabel&) = default;
  friend auto operator<=>(const VertexLabel&, const VertexLabel&) = default;
};

// labelling indexed by post-order vertex id
template <class Label>
using Labelling = std::vector<VertexLabel<Label>>;

template <class System>
bool is_admissible(const System& sys, const CouplingTree& t,
                   const Labelling<typename System::Label>& lab) {
  if (int(lab.size()) != t.vertex_count()) return false;
  for (int v = 0; v < t.vertex_count(); ++v) {
    if (t.is_leaf(v)) {
      if (lab[v].k != 1) return false;
      continue;
    }
    const auto& vx = t.vertex(v);
    bool found = false;
    for (const auto& [label, mult] : sys.series(lab[vx.left].irrep, lab[vx.right].irrep))
      if (label == lab[v].irrep && lab[v].k >= 1 && lab[v].k <= mult) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

// All admissible labellings with the given leaf labels (and root label, when
// supplied), ordered lexicographically over the post-order traversal with
// labels ascending and multiplicity counters ascending.
template <class System>
std::vector<Labelling<typename System::Label>> enumerate_labellings(
    const System& sys, const CouplingTree& t, const std::vector<typename System::Label>& leaves,
    const std::optional<typename System::Label>& root = std::nullopt) {
  using Label = typename System::Label;
  if (int(leaves.size()) != t.leaf_count())
    throw std::domain_error("leaf labelling length does not match tree");
  std::vector<Labelling<Label>> out;
  Labelling<Label> current(t.vertex_count());
  const auto& leaf_ids = t.leaf_vertices();
  for (int i = 0; i < t.leaf_count(); ++i) current[leaf_ids[i]] = {leaves[i], 1};

  // post-order recursion: vertices appear after their subtrees
  auto rec = [&](auto&& self, int v) -> void {
    if (v == t.vertex_count()) {
      if (!root || current[t.root()].irrep == *root) out.push_back(current);
      return;
    }
    if (t.is_leaf(v)) {
      self(self, v + 1);
      return;
    }
    const auto& vx = t.vertex(v);
    for (const auto& [label, mult] : sys.series(current[vx.left].irrep, current[vx.right].irrep))
      for (int k = 1; k <= mult; ++k) {
        current[v] = {label, k};
        self(self, v + 1);
      }
  };
  rec(rec, 0);
  return out;
}

// SU(2) irrep system: multiplicity-free triangle rule
struct Su2System {
  using Label = HalfInt;
  std::vector<std::pair<HalfInt, int>> series(HalfInt a, HalfInt b) const {
    std::vector<std::pair<HalfInt, int>> out;
    for (HalfInt j = abs(a - b); j <= a + b; ++j) out.emplace_back(j, 1);
    return out;
  }
};

// SU(2) labelling as a plain spin vector indexed by post-order vertex id
using SpinLabelling = std::vector<HalfInt>;

std::vector<SpinLabelling> enumerate_spin_labellings(const CouplingTree& t,
                                                     const std::vector<HalfInt>& leaves,
                                                     const std::optional<HalfInt>& root = std::nullopt);

bool is_admissible_spins(const CouplingTree& t, const SpinLabelling& lab);

// multiplicity m_{leaves}(root); independent of the tree shape
long multiplicity(const std::vector<HalfInt>& leaves, HalfInt root);

// leaf labels of `lab` in planar order
std::vector<HalfInt> leaf_spins(const CouplingTree& t, const SpinLabelling& lab);

} // namespace qc

#endif
