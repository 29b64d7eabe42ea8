#pragma once

#include <Eigen/Core>

namespace wassreg {

// Pool-adjacent-violators: least-squares projection onto non-decreasing
// sequences with uniform weights.
Eigen::VectorXd isotonic_fit(const Eigen::VectorXd& y);

}  // namespace wassreg
