#include "qc/quasichar.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qc {

namespace {

std::vector<int> doubled(const SpinLabelling& lab) {
  std::vector<int> out(lab.size());
  for (std::size_t i = 0; i < lab.size(); ++i) out[i] = lab[i].twice();
  return out;
}

void require_combinable(const QuasicharIndex& q) {
  if (!is_admissible_spins(q.tree, q.alpha) || !is_admissible_spins(q.tree, q.alpha_prime))
    throw std::domain_error("quasicharacter labelling is not admissible");
  if (leaf_spins(q.tree, q.alpha) != leaf_spins(q.tree, q.alpha_prime) ||
      q.alpha[q.tree.root()] != q.alpha_prime[q.tree.root()])
    throw std::domain_error("labellings are not combinable (leaf labelling or root spin differ)");
}

void require_same_tree(const QuasicharIndex& a, const QuasicharIndex& b) {
  if (!(a.tree == b.tree))
    throw std::domain_error("quasicharacter product requires a common coupling tree");
}

} // namespace

bool QuasicharIndex::is_trivial() const {
  for (HalfInt j : alpha)
    if (j != HalfInt(0)) return false;
  for (HalfInt j : alpha_prime)
    if (j != HalfInt(0)) return false;
  return true;
}

QuasicharIndex make_quasichar(const CouplingTree& tree, const SpinLabelling& alpha,
                              const SpinLabelling& alpha_prime) {
  QuasicharIndex q{tree, alpha, alpha_prime};
  require_combinable(q);
  return q;
}

bool QuasicharOrder::operator()(const QuasicharIndex& a, const QuasicharIndex& b) const {
  const auto ka = std::make_pair(doubled(a.alpha), doubled(a.alpha_prime));
  const auto kb = std::make_pair(doubled(b.alpha), doubled(b.alpha_prime));
  return ka < kb;
}

std::complex<double> evaluate(const QuasicharIndex& q, const std::vector<Su2Element>& points) {
  require_combinable(q);
  const int n = q.tree.leaf_count();
  if (int(points.size()) != n) throw std::domain_error("one group point per link required");
  const auto leaves = q.leaves();
  std::vector<Eigen::MatrixXcd> d_mats(n);
  for (int i = 0; i < n; ++i) d_mats[i] = wigner_d(leaves[i], points[i]);

  const HalfInt j = q.root_spin();
  std::complex<double> acc = 0.0;
  for (HalfInt m = -j; m <= j; ++m) {
    const CoupledState ket = coupled_state(q.tree, q.alpha, m);
    const CoupledState bra = coupled_state(q.tree, q.alpha_prime, m);
    for (const auto& [kb, ab] : bra.amplitudes)
      for (const auto& [kk, ak] : ket.amplitudes) {
        std::complex<double> prod = ab.to_double() * ak.to_double();
        for (int i = 0; i < n; ++i) {
          const int row = (leaves[i].twice() - kb[i]) / 2;
          const int col = (leaves[i].twice() - kk[i]) / 2;
          prod *= d_mats[i](row, col);
          if (prod == std::complex<double>(0.0)) break;
        }
        acc += prod;
      }
  }
  return acc;
}

double norm(const QuasicharIndex& q, const NormParams& p) {
  require_combinable(q);
  if (p.hbar <= 0 || p.beta <= 0) throw std::domain_error("norm parameters must be positive");
  const auto leaves = q.leaves();
  double dim_prod = 1.0, dim_sq_sum = 0.0;
  for (HalfInt j : leaves) {
    dim_prod *= dim(j);
    dim_sq_sum += double(dim(j)) * dim(j);
  }
  const double pi = 3.14159265358979323846;
  const double norm_sq = std::pow(p.hbar * pi, 1.5 * double(leaves.size())) *
                         (double(dim(q.root_spin())) / dim_prod) *
                         std::exp(p.hbar * p.beta * p.beta * dim_sq_sum);
  return std::sqrt(norm_sq);
}

double orthonormal_factor(const QuasicharIndex& q) {
  double dim_prod = 1.0;
  for (HalfInt j : q.leaves()) dim_prod *= dim(j);
  return std::sqrt(dim_prod / dim(q.root_spin()));
}

QuasicharExpansion structure_constants(const QuasicharIndex& q1, const QuasicharIndex& q2) {
  require_combinable(q1);
  require_combinable(q2);
  require_same_tree(q1, q2);
  const CouplingTree& t = q1.tree;
  const auto leaves1 = q1.leaves(), leaves2 = q2.leaves();
  const int n = t.leaf_count();

  QuasicharExpansion out;
  // odometer over admissible leaf labellings of the result
  std::vector<std::vector<HalfInt>> leaf_options(n);
  for (int i = 0; i < n; ++i) leaf_options[i] = clebsch_series(leaves1[i], leaves2[i]);
  std::vector<std::size_t> pick(n, 0);
  while (true) {
    std::vector<HalfInt> leaves3(n);
    for (int i = 0; i < n; ++i) leaves3[i] = leaf_options[i][pick[i]];
    for (HalfInt j3 : clebsch_series(q1.root_spin(), q2.root_spin())) {
      const auto labellings = enumerate_spin_labellings(t, leaves3, j3);
      std::vector<SurdSum> r_alpha(labellings.size());
      std::vector<SurdSum> r_prime(labellings.size());
      for (std::size_t a = 0; a < labellings.size(); ++a) {
        r_alpha[a] = recoupling_R(t, q1.alpha, q2.alpha, labellings[a]);
        r_prime[a] = recoupling_R(t, q1.alpha_prime, q2.alpha_prime, labellings[a]);
      }
      for (std::size_t a = 0; a < labellings.size(); ++a) {
        if (r_alpha[a].is_zero()) continue;
        for (std::size_t b = 0; b < labellings.size(); ++b) {
          if (r_prime[b].is_zero()) continue;
          const SurdSum coeff = r_prime[b] * r_alpha[a];
          if (coeff.is_zero()) continue;
          out[QuasicharIndex{t, labellings[a], labellings[b]}] = coeff;
        }
      }
    }
    int carry = n - 1;
    while (carry >= 0 && ++pick[carry] == leaf_options[carry].size()) pick[carry--] = 0;
    if (carry < 0) break;
  }
  return out;
}

std::map<HalfInt, long> character_product(const std::vector<HalfInt>& spins) {
  if (spins.empty()) throw std::domain_error("character product of an empty list");
  std::map<HalfInt, long> acc{{spins[0], 1}};
  for (std::size_t i = 1; i < spins.size(); ++i) {
    std::map<HalfInt, long> next;
    for (const auto& [j, mult] : acc)
      for (HalfInt j3 : clebsch_series(j, spins[i])) next[j3] += mult;
    acc = std::move(next);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Exact expansion of trace polynomials
// ---------------------------------------------------------------------------

namespace {

// decomposition data of a tensor power of the fundamental representation:
// amplitude of the coupled vector |gamma, m> on the index tuple u
struct PowerDecomposition {
  // labelling gamma (spins on standard_tree(o)), states per doubled m
  struct Block {
    SpinLabelling gamma;
    HalfInt root;
    std::map<int, CoupledState> state; // keyed by doubled m
  };
  std::vector<Block> blocks;
};

PowerDecomposition decompose_power(int occurrences) {
  PowerDecomposition out;
  const CouplingTree s = standard_tree(occurrences);
  const std::vector<HalfInt> half_leaves(occurrences, HalfInt::from_twice(1));
  for (const auto& gamma : enumerate_spin_labellings(s, half_leaves)) {
    PowerDecomposition::Block block;
    block.gamma = gamma;
    block.root = gamma[s.root()];
    for (HalfInt m = -block.root; m <= block.root; ++m)
      block.state.emplace(m.twice(), coupled_state(s, gamma, m));
    out.blocks.push_back(std::move(block));
  }
  return out;
}

// doubled projection tuple for a fundamental index tuple (0 -> +1/2)
std::vector<int> index_tuple_to_m(const std::vector<int>& idx) {
  std::vector<int> m(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) m[i] = 1 - 2 * idx[i];
  return m;
}

int tuple_total(const std::vector<int>& m) {
  int s = 0;
  for (int v : m) s += v;
  return s;
}

} // namespace

QuasicharExpansion expand_invariant(const TracePolynomial& p, int n_links, const CouplingTree& t) {
  if (t.leaf_count() != n_links)
    throw std::domain_error("coupling tree must have one leaf per link");
  if (p.max_link() > n_links) throw std::domain_error("word uses a link beyond the declared count");

  QuasicharExpansion result;
  const SpinLabelling trivial(t.vertex_count(), HalfInt(0));

  // joint coefficient table keyed by per-link (doubled J, doubled m', doubled m)
  std::map<std::vector<int>, SurdSum> cmap;

  for (const auto& term : p.terms) {
    const auto& word = term.word.factors;
    if (word.empty()) {
      // tr(1) in the fundamental representation
      SurdSum c{term.coeff * 2};
      result[QuasicharIndex{t, trivial, trivial}] += c;
      continue;
    }
    const int len = int(word.size());
    // occurrence slots per link, in word order
    std::vector<std::vector<int>> slots(n_links);
    for (int pos = 0; pos < len; ++pos) slots[word[pos].first - 1].push_back(pos);

    // chain index assignments; per chain a signed count over per-link
    // (u-tuple, v-tuple) pairs
    std::map<std::vector<int>, long> counts;
    std::vector<int> chain(len, 0);
    while (true) {
      long sign = 1;
      std::vector<int> key;
      key.reserve(2 * len + n_links);
      for (int link = 0; link < n_links; ++link) {
        for (int pos : slots[link]) {
          const int iin = chain[pos], iout = chain[(pos + 1) % len];
          int u, v;
          if (word[pos].second > 0) {
            u = iin;
            v = iout;
          } else {
            u = 1 - iout;
            v = 1 - iin;
            if ((iin + iout) % 2 != 0) sign = -sign;
          }
          key.push_back(u);
          key.push_back(v);
        }
      }
      counts[key] += sign;

      int carry = len - 1;
      while (carry >= 0 && ++chain[carry] == 2) chain[carry--] = 0;
      if (carry < 0) break;
    }

    // per-link tensor power decompositions
    std::vector<PowerDecomposition> decomp(n_links);
    for (int link = 0; link < n_links; ++link)
      if (!slots[link].empty()) decomp[link] = decompose_power(int(slots[link].size()));

    for (const auto& [key, count] : counts) {
      if (count == 0) continue;
      // split key back into per-link u/v tuples
      std::vector<std::vector<int>> u_tuple(n_links), v_tuple(n_links);
      std::size_t cursor = 0;
      for (int link = 0; link < n_links; ++link)
        for (std::size_t s = 0; s < slots[link].size(); ++s) {
          u_tuple[link].push_back(key[cursor++]);
          v_tuple[link].push_back(key[cursor++]);
        }

      // recursive accumulation over per-link blocks
      std::vector<int> ckey(3 * n_links, 0);
      SurdSum factor{term.coeff * count};
      auto rec = [&](auto&& self, int link, SurdSum acc) -> void {
        if (link == n_links) {
          cmap[ckey] += acc;
          return;
        }
        if (slots[link].empty()) {
          ckey[3 * link] = 0;
          ckey[3 * link + 1] = 0;
          ckey[3 * link + 2] = 0;
          self(self, link + 1, std::move(acc));
          return;
        }
        const auto mu = index_tuple_to_m(u_tuple[link]);
        const auto mv = index_tuple_to_m(v_tuple[link]);
        const int mu_tot = tuple_total(mu), mv_tot = tuple_total(mv);
        for (const auto& block : decomp[link].blocks) {
          if (std::abs(mu_tot) > block.root.twice() || std::abs(mv_tot) > block.root.twice()) continue;
          const SurdSum* cu = block.state.at(mu_tot).find(mu);
          if (!cu) continue;
          const SurdSum* cv = block.state.at(mv_tot).find(mv);
          if (!cv) continue;
          SurdSum next = acc * *cu;
          next *= *cv;
          if (next.is_zero()) continue;
          ckey[3 * link] = block.root.twice();
          ckey[3 * link + 1] = mu_tot;
          ckey[3 * link + 2] = mv_tot;
          self(self, link + 1, std::move(next));
        }
      };
      rec(rec, 0, std::move(factor));
    }
  }

  // project the (J, m', m) table onto the quasicharacter basis of t
  std::map<std::vector<int>, std::vector<std::vector<int>>> by_spins;
  for (const auto& [key, val] : cmap) {
    if (val.is_zero()) continue;
    std::vector<int> spins(n_links);
    for (int i = 0; i < n_links; ++i) spins[i] = key[3 * i];
    by_spins[spins].push_back(key);
  }

  for (const auto& [spins, keys] : by_spins) {
    std::vector<HalfInt> leaves(n_links);
    for (int i = 0; i < n_links; ++i) leaves[i] = HalfInt::from_twice(spins[i]);
    const auto labellings = enumerate_spin_labellings(t, leaves);
    // coupled states per labelling, built lazily per total m
    for (const auto& alpha : labellings) {
      for (const auto& alpha_prime : labellings) {
        if (alpha[t.root()] != alpha_prime[t.root()]) continue;
        const HalfInt j = alpha[t.root()];
        SurdSum e;
        for (const auto& key : keys) {
          std::vector<int> m_col(n_links), m_row(n_links);
          for (int i = 0; i < n_links; ++i) {
            m_row[i] = key[3 * i + 1];
            m_col[i] = key[3 * i + 2];
          }
          const int m_row_tot = tuple_total(m_row), m_col_tot = tuple_total(m_col);
          if (m_row_tot != m_col_tot) continue;
          if (std::abs(m_row_tot) > j.twice()) continue;
          const CoupledState bra = coupled_state(t, alpha_prime, HalfInt::from_twice(m_row_tot));
          const SurdSum* cb = bra.find(m_row);
          if (!cb) continue;
          const CoupledState ket = coupled_state(t, alpha, HalfInt::from_twice(m_col_tot));
          const SurdSum* ck = ket.find(m_col);
          if (!ck) continue;
          SurdSum contrib = cmap.at(key) * *cb;
          contrib *= *ck;
          e += contrib;
        }
        if (e.is_zero()) continue;
        e.scale(Rational(1, dim(j)));
        result[QuasicharIndex{t, alpha, alpha_prime}] += e;
      }
    }
  }

  for (auto it = result.begin(); it != result.end();) {
    if (it->second.is_zero())
      it = result.erase(it);
    else
      ++it;
  }
  return result;
}

Eigen::MatrixXd matrix_elements(const QuasicharExpansion& op_expansion,
                                const std::vector<QuasicharIndex>& basis, const NormParams& p) {
  for (const auto& q : basis) require_combinable(q);
  for (std::size_t i = 1; i < basis.size(); ++i) require_same_tree(basis[0], basis[i]);

  const Eigen::Index n = Eigen::Index(basis.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> norms(basis.size());
  std::map<QuasicharIndex, Eigen::Index, QuasicharOrder> position;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    norms[i] = norm(basis[i], p);
    position[basis[i]] = Eigen::Index(i);
  }

  for (const auto& [op_index, e_coeff] : op_expansion) {
    const double e = e_coeff.to_double();
    for (Eigen::Index s = 0; s < n; ++s) {
      if (op_index.is_trivial()) {
        out(s, s) += e;
        continue;
      }
      for (const auto& [target, c] : structure_constants(op_index, basis[std::size_t(s)])) {
        auto it = position.find(target);
        if (it == position.end()) continue; // outside the truncated basis
        const Eigen::Index tpos = it->second;
        out(s, tpos) += e * c.to_double() * norms[std::size_t(tpos)] / norms[std::size_t(s)];
      }
    }
  }
  return out;
}

std::vector<QuasicharIndex> basis_up_to(const CouplingTree& t, HalfInt jmax) {
  if (jmax.twice() < 0) throw std::domain_error("jmax must be nonnegative");
  std::vector<QuasicharIndex> out;
  const int n = t.leaf_count();
  std::vector<int> pick(n, 0);
  while (true) {
    std::vector<HalfInt> leaves(n);
    for (int i = 0; i < n; ++i) leaves[i] = HalfInt::from_twice(pick[i]);
    auto labellings = enumerate_spin_labellings(t, leaves);
    labellings.erase(std::remove_if(labellings.begin(), labellings.end(),
                                    [&](const SpinLabelling& lab) {
                                      for (HalfInt v : lab)
                                        if (v > jmax) return true;
                                      return false;
                                    }),
                     labellings.end());
    for (const auto& alpha : labellings)
      for (const auto& alpha_prime : labellings)
        if (alpha[t.root()] == alpha_prime[t.root()])
          out.push_back(QuasicharIndex{t, alpha, alpha_prime});
    int carry = n - 1;
    while (carry >= 0 && ++pick[carry] > jmax.twice()) pick[carry--] = 0;
    if (carry < 0) break;
  }
  return out;
}

} // namespace qc
