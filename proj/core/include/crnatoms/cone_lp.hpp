#pragma once

#include <Eigen/Dense>

namespace crn {

/// Largest t <= 1 for which some kappa >= 0 with kappa_k >= t, sum(kappa) <= 1
/// and rows * kappa >= t exists; kappa = 0 makes this at least 0. The open cone
/// {kappa > 0 : rows * kappa > 0} is nonempty iff the result is positive.
/// Rows should be normalized by the caller. `kappa` receives an optimizer.
///
/// Dense tableau simplex with Bland's rule; meant for a handful of columns.
double max_cone_margin(const Eigen::MatrixXd& rows, Eigen::VectorXd& kappa);

}  // namespace crn
