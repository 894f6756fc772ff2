#pragma once

#include <Eigen/Dense>

#include "dirac/jet.hpp"

namespace dirac {

template <class T>
using VecX = Eigen::Matrix<T, Eigen::Dynamic, 1>;
template <class T>
using MatX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = VecX<double>;
using Mat = MatX<double>;

template <class V>
using scalar_of = typename std::decay_t<V>::Scalar;

}  // namespace dirac
