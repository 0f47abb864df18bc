#include "crnatoms/cone_lp.hpp"

#include <limits>
#include <vector>

namespace crn {

double max_cone_margin(const Eigen::MatrixXd& rows, Eigen::VectorXd& kappa) {
  // Substitute t = tau - 1 so that the origin is feasible:
  //   maximize tau  s.t.  -rows*kappa + tau <= 1,  -kappa_k + tau <= 1,
  //                       sum(kappa) <= 1,  tau <= 2,  kappa, tau >= 0.
  const Eigen::Index n = rows.cols();
  const Eigen::Index m = rows.rows() + n + 2;
  const Eigen::Index vars = n + 1;  // kappa, tau
  const Eigen::Index cols = vars + m + 1;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, cols);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < rows.rows(); ++i, ++r) {
    t.row(r).head(n) = -rows.row(i);
    t(r, n) = 1.0;
    t(r, cols - 1) = 1.0;
  }
  for (Eigen::Index k = 0; k < n; ++k, ++r) {
    t(r, k) = -1.0;
    t(r, n) = 1.0;
    t(r, cols - 1) = 1.0;
  }
  t.row(r).head(n).setOnes();
  t(r++, cols - 1) = 1.0;
  t(r, n) = 1.0;
  t(r++, cols - 1) = 2.0;
  for (Eigen::Index i = 0; i < m; ++i) t(i, vars + i) = 1.0;
  // Objective row holds reduced costs of the maximization.
  t(m, n) = 1.0;

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) basis[static_cast<std::size_t>(i)] = vars + i;

  constexpr double eps = 1e-12;
  for (int iter = 0; iter < 10000; ++iter) {
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < cols - 1; ++j)
      if (t(m, j) > eps) {
        enter = j;
        break;
      }
    if (enter < 0) break;
    Eigen::Index leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      if (t(i, enter) <= eps) continue;
      double ratio = t(i, cols - 1) / t(i, enter);
      if (ratio < best - eps ||
          (ratio <= best + eps && leave >= 0 && basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
        best = ratio;
        leave = i;
      }
    }
    if (leave < 0) break;  // unbounded cannot happen: tau <= 2
    t.row(leave) /= t(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i)
      if (i != leave && t(i, enter) != 0.0) t.row(i) -= t(i, enter) * t.row(leave);
    basis[static_cast<std::size_t>(leave)] = enter;
  }

  Eigen::VectorXd z = Eigen::VectorXd::Zero(vars);
  for (Eigen::Index i = 0; i < m; ++i)
    if (basis[static_cast<std::size_t>(i)] < vars) z[basis[static_cast<std::size_t>(i)]] = t(i, cols - 1);
  kappa = z.head(n);
  return z[n] - 1.0;
}

}  // namespace crn
