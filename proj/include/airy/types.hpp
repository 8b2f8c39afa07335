#ifndef AIRY_TYPES_HPP
#define AIRY_TYPES_HPP

#include <Eigen/Core>

namespace airy {

template <int N>
using Vec = Eigen::Matrix<double, N, 1>;

template <int N>
using Mat = Eigen::Matrix<double, N, N>;

using Vec5 = Vec<5>;
using Mat5 = Mat<5>;

/// Five components in the chart of the state they were evaluated at.
using Tangent5 = Vec5;
/// Partial derivatives in the chart of the state they were evaluated at.
using Gradient5 = Vec5;

}  // namespace airy

#endif  // AIRY_TYPES_HPP
