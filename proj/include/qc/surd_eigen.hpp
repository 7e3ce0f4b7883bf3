#ifndef QC_SURD_EIGEN_HPP
#define QC_SURD_EIGEN_HPP

#include "qc/surd.hpp"

#include <Eigen/Core>

// NumTraits so that exact SurdSum scalars can live in Eigen matrices
// (transpose, products and equality are all that is used).
namespace Eigen {

template <>
struct NumTraits<qc::SurdSum> : GenericNumTraits<qc::SurdSum> {
  using Real = qc::SurdSum;
  using NonInteger = qc::SurdSum;
  using Nested = qc::SurdSum;
  using Literal = long long;

  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 8,
    MulCost = 16
  };

  static inline Real epsilon() { return qc::SurdSum(); }
  static inline Real dummy_precision() { return qc::SurdSum(); }
  static inline int digits10() { return 0; }
};

} // namespace Eigen

namespace qc {
using SurdMatrix = Eigen::Matrix<SurdSum, Eigen::Dynamic, Eigen::Dynamic>;
}

#endif
