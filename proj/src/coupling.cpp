#include "qc/coupling.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <stdexcept>

namespace qc {

namespace {

void require_admissible(const CouplingTree& t, const SpinLabelling& alpha) {
  if (!is_admissible_spins(t, alpha)) throw std::domain_error("labelling is not admissible");
}

HalfInt root_spin(const CouplingTree& t, const SpinLabelling& alpha) { return alpha[t.root()]; }

// per-vertex projection sums generated by the leaf projections
bool vertex_projections(const CouplingTree& t, const SpinLabelling& alpha,
                        const std::vector<HalfInt>& ul_m, std::vector<HalfInt>& m_of) {
  m_of.assign(t.vertex_count(), HalfInt(0));
  const auto& leaves = t.leaf_vertices();
  for (int i = 0; i < t.leaf_count(); ++i) m_of[leaves[i]] = ul_m[i];
  for (int v = 0; v < t.vertex_count(); ++v) {
    if (!t.is_leaf(v)) m_of[v] = m_of[t.vertex(v).left] + m_of[t.vertex(v).right];
    if (!valid_jm(alpha[v], m_of[v])) return false;
  }
  return true;
}

} // namespace

const SurdSum* CoupledState::find(const std::vector<int>& key) const {
  auto it = std::lower_bound(amplitudes.begin(), amplitudes.end(), key,
                             [](const auto& e, const std::vector<int>& k) { return e.first < k; });
  if (it == amplitudes.end() || it->first != key) return nullptr;
  return &it->second;
}

SurdSum CoupledState::norm_squared() const {
  SurdSum acc;
  for (const auto& [k, a] : amplitudes) acc += a * a;
  return acc;
}

SurdSum composite_cg(const CouplingTree& t, const SpinLabelling& alpha,
                     const std::vector<HalfInt>& ul_m, HalfInt m) {
  require_admissible(t, alpha);
  if (int(ul_m.size()) != t.leaf_count()) throw std::domain_error("projection tuple length mismatch");
  HalfInt total(0);
  for (HalfInt mi : ul_m) total += mi;
  if (total != m) return SurdSum();
  std::vector<HalfInt> m_of;
  if (!vertex_projections(t, alpha, ul_m, m_of)) return SurdSum();
  SurdSum prod{Rational(1)};
  for (int v = 0; v < t.vertex_count(); ++v) {
    if (t.is_leaf(v)) continue;
    const auto& vx = t.vertex(v);
    prod *= cg(alpha[vx.left], m_of[vx.left], alpha[vx.right], m_of[vx.right], alpha[v], m_of[v]);
    if (prod.is_zero()) return prod;
  }
  return prod;
}

namespace {

// per-subtree states for all projections of its root spin
using SubtreeStates = std::map<int, std::vector<std::pair<std::vector<int>, SurdSum>>>;

SubtreeStates build_states(const CouplingTree& t, const SpinLabelling& alpha, int v) {
  SubtreeStates out;
  if (t.is_leaf(v)) {
    const HalfInt j = alpha[v];
    for (HalfInt m = -j; m <= j; ++m) out[m.twice()].push_back({{m.twice()}, SurdSum(Rational(1))});
    return out;
  }
  const auto& vx = t.vertex(v);
  const SubtreeStates left = build_states(t, alpha, vx.left);
  const SubtreeStates right = build_states(t, alpha, vx.right);
  const HalfInt jl = alpha[vx.left], jr = alpha[vx.right], j = alpha[v];
  for (HalfInt m = -j; m <= j; ++m) {
    std::vector<std::pair<std::vector<int>, SurdSum>> entries;
    for (const auto& [ml_t, lvec] : left) {
      const HalfInt ml = HalfInt::from_twice(ml_t);
      const HalfInt mr = m - ml;
      auto rit = right.find(mr.twice());
      if (rit == right.end()) continue;
      const SurdSum c = cg(jl, ml, jr, mr, j, m);
      if (c.is_zero()) continue;
      for (const auto& [kl, al] : lvec)
        for (const auto& [kr, ar] : rit->second) {
          std::vector<int> key = kl;
          key.insert(key.end(), kr.begin(), kr.end());
          SurdSum amp = al * ar;
          amp *= c;
          entries.push_back({std::move(key), std::move(amp)});
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out[m.twice()] = std::move(entries);
  }
  return out;
}

} // namespace

CoupledState coupled_state(const CouplingTree& t, const SpinLabelling& alpha, HalfInt m) {
  require_admissible(t, alpha);
  const HalfInt j = root_spin(t, alpha);
  if (!valid_jm(j, m)) throw std::domain_error("projection out of range: m=" + m.str() + " for j=" + j.str());
  SubtreeStates states = build_states(t, alpha, t.root());
  CoupledState out;
  out.labelling = alpha;
  out.m = m;
  out.amplitudes = std::move(states[m.twice()]);
  return out;
}

SurdSum recoupling_coeff(const CouplingTree& t1, const SpinLabelling& alpha1,
                         const CouplingTree& t2, const SpinLabelling& alpha2,
                         const Permutation& sigma, std::optional<HalfInt> at_m) {
  require_admissible(t1, alpha1);
  require_admissible(t2, alpha2);
  if (t1.leaf_count() != t2.leaf_count()) throw std::domain_error("leaf count mismatch");
  const int n = t1.leaf_count();
  if (int(sigma.size()) != n) throw std::domain_error("permutation length mismatch");
  Permutation seen(n, 0);
  for (int i = 0; i < n; ++i) {
    if (sigma[i] < 0 || sigma[i] >= n || seen[sigma[i]]++)
      throw std::domain_error("not a permutation of leaf slots");
  }
  const auto l1 = leaf_spins(t1, alpha1);
  const auto l2 = leaf_spins(t2, alpha2);
  for (int i = 0; i < n; ++i)
    if (l2[sigma[i]] != l1[i])
      throw std::domain_error("permutation does not map the leaf labelling of T1 to that of T2");

  const HalfInt j1 = root_spin(t1, alpha1), j2 = root_spin(t2, alpha2);
  if (j1 != j2) return SurdSum();
  const HalfInt m = at_m.value_or(-j1);
  if (!valid_jm(j1, m)) throw std::domain_error("projection out of range for recoupling");

  const CoupledState s1 = coupled_state(t1, alpha1, m);
  const CoupledState s2 = coupled_state(t2, alpha2, m);
  SurdSum acc;
  std::vector<int> permuted(n);
  for (const auto& [key, amp] : s1.amplitudes) {
    for (int i = 0; i < n; ++i) permuted[sigma[i]] = key[i];
    if (const SurdSum* other = s2.find(permuted)) acc += amp * *other;
  }
  return acc;
}

SpinLabelling join_labelling(const CouplingTree& t, const SpinLabelling& alpha1,
                             const SpinLabelling& alpha2, HalfInt root) {
  const int nv = t.vertex_count();
  SpinLabelling out(2 * nv + 1);
  for (int v = 0; v < nv; ++v) {
    out[v] = alpha1[v];
    out[nv + v] = alpha2[v];
  }
  out[2 * nv] = root;
  return out;
}

SpinLabelling duplicate_labelling(const CouplingTree& t, const SpinLabelling& alpha1,
                                  const SpinLabelling& alpha2, const SpinLabelling& alpha3) {
  const auto vmap = leaf_duplicate_vertex_map(t);
  const CouplingTree dup = leaf_duplicate(t);
  SpinLabelling out(dup.vertex_count());
  // cherry leaves: children of the mapped node for each leaf of t
  for (int v = 0; v < t.vertex_count(); ++v) {
    out[vmap[v]] = alpha3[v];
    if (t.is_leaf(v)) {
      const auto& cherry = dup.vertex(vmap[v]);
      out[cherry.left] = alpha1[v];
      out[cherry.right] = alpha2[v];
    }
  }
  return out;
}

SurdSum recoupling_R(const CouplingTree& t, const SpinLabelling& alpha1,
                     const SpinLabelling& alpha2, const SpinLabelling& alpha3) {
  require_admissible(t, alpha1);
  require_admissible(t, alpha2);
  require_admissible(t, alpha3);
  // triangle condition at every leaf and at the root
  for (int v : t.leaf_vertices())
    if (!triangle(alpha1[v], alpha2[v], alpha3[v])) return SurdSum();
  const int r = t.root();
  if (!triangle(alpha1[r], alpha2[r], alpha3[r])) return SurdSum();

  SurdSum prod{Rational(1)};
  for (int v = 0; v < t.vertex_count(); ++v) {
    if (t.is_leaf(v)) continue;
    const auto& vx = t.vertex(v);
    const NineJ rows{{{alpha1[vx.left], alpha1[vx.right], alpha1[v]},
                      {alpha2[vx.left], alpha2[vx.right], alpha2[v]},
                      {alpha3[vx.left], alpha3[vx.right], alpha3[v]}}};
    prod *= nine_lambda_su2(rows);
    if (prod.is_zero()) return prod;
  }
  return prod;
}

namespace {

// Packed hybrid key for the sequential analysis of a 2N-leaf state in the
// coupled basis of T^vee: one byte per live slot. Raw slots hold a doubled
// projection, coupled slots hold (doubled spin, doubled projection).
struct PackedEntry {
  std::uint64_t key;
  SurdSum amp;
};

constexpr int kByteBias = 32;

std::uint64_t set_byte(std::uint64_t key, int pos, int value) {
  const std::uint64_t shifted = std::uint64_t(std::uint8_t(value + kByteBias)) << (8 * pos);
  const std::uint64_t mask = std::uint64_t(0xff) << (8 * pos);
  return (key & ~mask) | shifted;
}

int get_byte(std::uint64_t key, int pos) {
  return int((key >> (8 * pos)) & 0xff) - kByteBias;
}

void sort_merge(std::vector<PackedEntry>& v) {
  std::sort(v.begin(), v.end(), [](const PackedEntry& a, const PackedEntry& b) { return a.key < b.key; });
  std::size_t w = 0;
  for (std::size_t i = 0; i < v.size();) {
    std::size_t j = i + 1;
    SurdSum acc = std::move(v[i].amp);
    while (j < v.size() && v[j].key == v[i].key) acc += v[j++].amp;
    if (!acc.is_zero()) {
      v[w].key = v[i].key;
      v[w].amp = std::move(acc);
      ++w;
    }
    i = j;
  }
  v.resize(w);
}

} // namespace

std::shared_ptr<const CoupledState> CoupledStateCache::get(const CouplingTree& t,
                                                           const SpinLabelling& alpha, HalfInt m) {
  std::vector<int> key(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) key[i] = alpha[i].twice();
  {
    std::lock_guard lock(mutex_);
    auto it = map_.find({key, m.twice()});
    if (it != map_.end()) return it->second;
  }
  auto state = std::make_shared<const CoupledState>(coupled_state(t, alpha, m));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = map_.emplace(std::make_pair(std::move(key), m.twice()), std::move(state));
  return it->second;
}

namespace {

// dense Clebsch-Gordan table for one (ja, jb, j3) triple, indexed by
// (ma, mb); shared read-only between analyzer steps
const std::vector<SurdSum>& cg_table(HalfInt ja, HalfInt jb, HalfInt j3) {
  thread_local std::map<std::array<int, 3>, std::vector<SurdSum>> tables;
  const std::array<int, 3> key{ja.twice(), jb.twice(), j3.twice()};
  auto it = tables.find(key);
  if (it != tables.end()) return it->second;
  std::vector<SurdSum> table(std::size_t(dim(ja)) * std::size_t(dim(jb)));
  for (HalfInt ma = -ja; ma <= ja; ++ma)
    for (HalfInt mb = -jb; mb <= jb; ++mb) {
      const HalfInt mm = ma + mb;
      if (!valid_jm(j3, mm)) continue;
      table[std::size_t((ja - ma).twice() / 2) * std::size_t(dim(jb)) +
            std::size_t((jb - mb).twice() / 2)] = cg(ja, ma, jb, mb, j3, mm);
    }
  return tables.emplace(key, std::move(table)).first->second;
}

// Sequential analysis of an interleaved 2N-leaf product state in the
// coupled basis of T^vee. Couples up the vertices of t in post-order; the
// spin chosen at each vertex branches the recursion, entries with equal
// reduced keys merge. `emit` fires once per complete alpha3 assignment
// with the single surviving amplitude.
class DuplicateAnalyzer {
public:
  DuplicateAnalyzer(const CouplingTree& t, const SpinLabelling& a1, const SpinLabelling& a2,
                    std::optional<HalfInt> vertex_cap)
      : t_(t), alpha1_(a1), alpha2_(a2), cap_(vertex_cap), chosen_(t.vertex_count(), HalfInt(0)),
        span_lo_(t.vertex_count(), 0) {
    int next_leaf = 0;
    for (int v = 0; v < t.vertex_count(); ++v)
      span_lo_[v] = t.is_leaf(v) ? next_leaf++ : span_lo_[t.vertex(v).left];
  }

  using Emit = std::function<void(const SpinLabelling& alpha3, const SurdSum& overlap)>;

  void run(std::vector<PackedEntry> state, const Emit& emit) {
    emit_ = &emit;
    reduce(t_.root(), std::move(state), [this](std::vector<PackedEntry> done) {
      if (done.size() != 1) return; // fully coupled states end on one key
      (*emit_)(chosen_, done[0].amp);
    });
  }

private:
  using Sink = std::function<void(std::vector<PackedEntry>)>;

  void reduce(int v, std::vector<PackedEntry> entries, const Sink& sink) {
    HalfInt ja, jb;
    int pa, pb;
    if (t_.is_leaf(v)) {
      ja = alpha1_[v];
      jb = alpha2_[v];
      pa = 2 * span_lo_[v];
      pb = pa + 1;
      couple(v, ja, jb, pa, pb, std::move(entries), sink);
      return;
    }
    const int vl = t_.vertex(v).left, vr = t_.vertex(v).right;
    reduce(vl, std::move(entries), [&](std::vector<PackedEntry> after_left) {
      reduce(vr, std::move(after_left), [&](std::vector<PackedEntry> after_right) {
        couple(v, chosen_[t_.vertex(v).left], chosen_[t_.vertex(v).right],
               2 * span_lo_[t_.vertex(v).left], 2 * span_lo_[t_.vertex(v).right],
               std::move(after_right), sink);
      });
    });
  }

  void couple(int v, HalfInt ja, HalfInt jb, int pa, int pb,
              std::vector<PackedEntry> entries, const Sink& sink) {
    for (HalfInt j3 = abs(ja - jb); j3 <= ja + jb; ++j3) {
      if (cap_ && j3 > *cap_) break;
      const std::vector<SurdSum>& table = cg_table(ja, jb, j3);
      std::vector<PackedEntry> next;
      next.reserve(entries.size());
      for (const auto& e : entries) {
        const HalfInt ma = HalfInt::from_twice(get_byte(e.key, pa));
        const HalfInt mb = HalfInt::from_twice(get_byte(e.key, pb));
        const SurdSum& c = table[std::size_t((ja - ma).twice() / 2) * std::size_t(dim(jb)) +
                                 std::size_t((jb - mb).twice() / 2)];
        if (c.is_zero()) continue;
        std::uint64_t key = set_byte(e.key, pa, (ma + mb).twice());
        key = set_byte(key, pb, 0);
        next.push_back({key, e.amp * c});
      }
      sort_merge(next);
      if (next.empty()) continue;
      chosen_[v] = j3;
      sink(std::move(next));
    }
  }

  const CouplingTree& t_;
  const SpinLabelling& alpha1_;
  const SpinLabelling& alpha2_;
  std::optional<HalfInt> cap_;
  SpinLabelling chosen_;
  std::vector<int> span_lo_; // first planar leaf index of each subtree
  const Emit* emit_ = nullptr;
};

} // namespace

std::map<std::pair<HalfInt, SpinLabelling>, SurdSum> projection_recouplings(
    const CouplingTree& t, const SpinLabelling& alpha1, const SpinLabelling& alpha2,
    std::optional<HalfInt> vertex_cap, CoupledStateCache* cache) {
  require_admissible(t, alpha1);
  require_admissible(t, alpha2);
  const int n = t.leaf_count();
  if (2 * n > 8) throw std::domain_error("projection_recouplings supports up to 4 leaves");
  int total_twice = 0;
  for (int v : t.leaf_vertices()) total_twice += alpha1[v].twice() + alpha2[v].twice();
  if (total_twice > 30) throw std::domain_error("projection_recouplings spin budget exceeded");

  const HalfInt j1 = root_spin(t, alpha1), j2 = root_spin(t, alpha2);
  std::map<std::pair<HalfInt, SpinLabelling>, SurdSum> result;

  // Work at total projection m = -|j1-j2|, valid for every j3 in <j1,j2>.
  const HalfInt m_total = -abs(j1 - j2);

  // The join state splits over (m1, m2); analyze each split once and share
  // it across all root spins j3.
  for (HalfInt m1 = -j1; m1 <= j1; ++m1) {
    const HalfInt m2 = m_total - m1;
    if (!valid_jm(j2, m2)) continue;
    std::shared_ptr<const CoupledState> s1_owned, s2_owned;
    if (cache) {
      s1_owned = cache->get(t, alpha1, m1);
      s2_owned = cache->get(t, alpha2, m2);
    } else {
      s1_owned = std::make_shared<const CoupledState>(coupled_state(t, alpha1, m1));
      s2_owned = std::make_shared<const CoupledState>(coupled_state(t, alpha2, m2));
    }
    const CoupledState& s1 = *s1_owned;
    const CoupledState& s2 = *s2_owned;
    if (s1.amplitudes.empty() || s2.amplitudes.empty()) continue;

    // tensor product re-keyed in the interleaved leaf order of T^vee
    std::vector<PackedEntry> state;
    state.reserve(s1.amplitudes.size() * s2.amplitudes.size());
    for (const auto& [k1, a1] : s1.amplitudes)
      for (const auto& [k2, a2] : s2.amplitudes) {
        std::uint64_t key = 0;
        for (int i = 0; i < n; ++i) {
          key = set_byte(key, 2 * i, k1[i]);
          key = set_byte(key, 2 * i + 1, k2[i]);
        }
        state.push_back({key, a1 * a2});
      }

    DuplicateAnalyzer analyzer(t, alpha1, alpha2, vertex_cap);
    analyzer.run(std::move(state), [&](const SpinLabelling& alpha3, const SurdSum& overlap) {
      // join-side CG factor; orthogonality in (j3, m) picks the matching root
      const HalfInt j3root = alpha3[t.root()];
      const SurdSum c = cg(j1, m1, j2, m2, j3root, m_total);
      if (c.is_zero()) return;
      result[{j3root, alpha3}] += overlap * c;
    });
  }

  // drop exact zeros produced by cancellation
  for (auto it = result.begin(); it != result.end();) {
    if (it->second.is_zero())
      it = result.erase(it);
    else
      ++it;
  }
  return result;
}

ChangeOfTree change_of_tree(const CouplingTree& t1, const CouplingTree& t2,
                            const std::vector<HalfInt>& leaves, HalfInt root) {
  if (t1.leaf_count() != t2.leaf_count()) throw std::domain_error("leaf count mismatch");
  ChangeOfTree out;
  out.col_labellings = enumerate_spin_labellings(t1, leaves, root);
  out.row_labellings = enumerate_spin_labellings(t2, leaves, root);
  const Permutation id = identity_permutation(t1.leaf_count());
  out.coeff.resize(Eigen::Index(out.row_labellings.size()), Eigen::Index(out.col_labellings.size()));
  for (std::size_t r = 0; r < out.row_labellings.size(); ++r)
    for (std::size_t c = 0; c < out.col_labellings.size(); ++c)
      out.coeff(Eigen::Index(r), Eigen::Index(c)) =
          recoupling_coeff(t1, out.col_labellings[c], t2, out.row_labellings[r], id);
  return out;
}

} // namespace qc
