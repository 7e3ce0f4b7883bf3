#ifndef QC_COUPLING_HPP
#define QC_COUPLING_HPP

#include "qc/su2.hpp"
#include "qc/surd_eigen.hpp"
#include "qc/trees.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace qc {

// Tree-coupled basis state |T; alpha, m> realized as a sparse vector over
// the tensor-product basis. Keys are doubled leaf projections in planar
// order; amplitudes are exact and the state has exact unit norm.
struct CoupledState {
  SpinLabelling labelling;
  HalfInt m;
  // sorted by key
  std::vector<std::pair<std::vector<int>, SurdSum>> amplitudes;

  const SurdSum* find(const std::vector<int>& key) const;
  SurdSum norm_squared() const;
};

// Composite Clebsch-Gordan coefficient <leaves, ul_m | T; alpha, m>:
// product of ordinary CG coefficients over the nodes of T.
SurdSum composite_cg(const CouplingTree& t, const SpinLabelling& alpha,
                     const std::vector<HalfInt>& ul_m, HalfInt m);

CoupledState coupled_state(const CouplingTree& t, const SpinLabelling& alpha, HalfInt m);

// Recoupling coefficient R(T2|T1)^{alpha2}_{alpha1} by the projection sum
// over tensor-product states, evaluated at a fixed root projection
// (default: the lowest). sigma maps leaf slots of T1 to leaf slots of T2;
// the leaf labelling of alpha2 must be the sigma-image of alpha1's.
SurdSum recoupling_coeff(const CouplingTree& t1, const SpinLabelling& alpha1,
                         const CouplingTree& t2, const SpinLabelling& alpha2,
                         const Permutation& sigma,
                         std::optional<HalfInt> at_m = std::nullopt);

// R(T)^{alpha1 alpha2}_{alpha3}: the recoupling between join(T,T) and
// leaf_duplicate(T), in the factorized form as a product of one 9-lambda
// symbol per node of T. Zero unless alpha1, alpha2, alpha3 satisfy the
// triangle condition at every leaf and at the root.
SurdSum recoupling_R(const CouplingTree& t, const SpinLabelling& alpha1,
                     const SpinLabelling& alpha2, const SpinLabelling& alpha3);

// labelling of join(T,T) built from labellings of T and a new root spin
SpinLabelling join_labelling(const CouplingTree& t, const SpinLabelling& alpha1,
                             const SpinLabelling& alpha2, HalfInt root);

// labelling of leaf_duplicate(T) with leaf pairs from alpha1/alpha2 and
// node labels from alpha3
SpinLabelling duplicate_labelling(const CouplingTree& t, const SpinLabelling& alpha1,
                                  const SpinLabelling& alpha2, const SpinLabelling& alpha3);

// shared cache of coupled states for one fixed tree, safe for concurrent use
class CoupledStateCache {
public:
  std::shared_ptr<const CoupledState> get(const CouplingTree& t, const SpinLabelling& alpha,
                                          HalfInt m);

private:
  std::mutex mutex_;
  std::map<std::pair<std::vector<int>, int>, std::shared_ptr<const CoupledState>> map_;
};

// Projection-sum evaluation of every R(T.T|T^vee) overlap at once: for the
// given alpha1, alpha2, returns the map (j3_root, alpha3) -> coefficient
// covering every root spin j3 in <j1, j2> and every labelling alpha3 of T
// compatible with the leaf triangles (restricted to vertex spins <= cap
// when one is given). Entirely independent of the 9-lambda factorization,
// so it serves as its oracle.
std::map<std::pair<HalfInt, SpinLabelling>, SurdSum> projection_recouplings(
    const CouplingTree& t, const SpinLabelling& alpha1, const SpinLabelling& alpha2,
    std::optional<HalfInt> vertex_cap = std::nullopt, CoupledStateCache* cache = nullptr);

// Change-of-tree matrix R(T2|T1)^{alpha2}_{alpha1} with identity leaf
// permutation; rows run over L^{T2}(leaves, root), columns over
// L^{T1}(leaves, root), both in enumeration order. Real orthogonal.
struct ChangeOfTree {
  std::vector<SpinLabelling> row_labellings; // labellings of t2
  std::vector<SpinLabelling> col_labellings; // labellings of t1
  SurdMatrix coeff;                          // coeff(row, col), exact
};

ChangeOfTree change_of_tree(const CouplingTree& t1, const CouplingTree& t2,
                            const std::vector<HalfInt>& leaves, HalfInt root);

} // namespace qc

#endif
