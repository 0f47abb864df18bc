#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "crnatoms/network.hpp"

namespace crn {

/// Positive rate constants aligned with `Network::reactions()`.
struct RateAssignment {
  std::vector<double> values;

  static RateAssignment uniform(const Network& net, double k = 1.0);
  /// Throws PreconditionError if a reaction of `net` has no entry.
  static RateAssignment from_map(const Network& net, const std::map<Reaction, double>& rates);
};

/// A network bound to rate constants: f(x) = sum_k kappa_k x^{y_k} (y'_k - y_k).
class MassActionSystem {
 public:
  MassActionSystem(Network net, RateAssignment rates);

  const Network& network() const { return net_; }
  const RateAssignment& rates() const { return rates_; }
  std::size_t dimension() const { return net_.species_count(); }

  Eigen::VectorXd evaluate(const Eigen::VectorXd& x) const;
  /// Monomial derivatives use exponent decrement, so x_j = 0 is fine.
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;

  /// 1 / (1 + max kappa): residuals are reported as ||f||_inf times this.
  double residual_scale() const { return residual_scale_; }
  double scaled_residual(const Eigen::VectorXd& x) const;

  std::size_t stoich_dim() const { return stoich_dim_; }
  bool full_dimensional() const { return stoich_dim_ == dimension(); }
  /// Orthonormal basis of the stoichiometric subspace (s x sigma).
  const Eigen::MatrixXd& stoich_basis() const { return stoich_basis_; }
  /// Orthonormal basis of its orthogonal complement (s x (s - sigma)).
  const Eigen::MatrixXd& conservation_basis() const { return conservation_basis_; }

 private:
  struct Term {
    double rate;
    std::vector<std::pair<std::size_t, int>> exponents;  // nonzero reactant coefficients
    std::vector<std::pair<std::size_t, double>> change;  // nonzero entries of y' - y
  };

  Network net_;
  RateAssignment rates_;
  std::vector<Term> terms_;
  double residual_scale_ = 1.0;
  std::size_t stoich_dim_ = 0;
  Eigen::MatrixXd stoich_basis_;
  Eigen::MatrixXd conservation_basis_;
};

MassActionSystem build_system(const Network& net, const RateAssignment& rates);

/// Numerical thresholds for steady-state classification.
struct Tolerances {
  double residual = 1e-10;    ///< on the scaled residual
  double degenerate = 1e-8;   ///< on |det| / prod(row norms) of the projected Jacobian,
                              ///< each row norm floored at 1e-6 of the largest
  double eigenvalue = 1e-9;   ///< stability margin, relative to the spectral radius
};

struct SolverConfig {
  std::size_t starts = 200;
  double start_low = 1e-3;
  double start_high = 1e3;
  int max_iterations = 100;
  double dedup_tol = 1e-6;
  Tolerances tol;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  /// Deterministic starts tried before the random ones.
  std::vector<Eigen::VectorXd> extra_starts;
  /// Point fixing the compatibility class when the stoichiometric subspace
  /// is not full-dimensional; defaults to the all-ones vector.
  std::optional<Eigen::VectorXd> class_point;
};

struct SteadyStateReport {
  Eigen::VectorXd x;
  double residual = 0.0;
  double jacobian_det = 0.0;      ///< det of the Jacobian restricted to the stoichiometric subspace
  double degeneracy_margin = 0.0; ///< |det| / prod of row norms of that matrix
  std::vector<std::complex<double>> eigenvalues;
  bool nondegenerate = false;
  bool exponentially_stable = false;
};

class ResidualTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Classifies a point already known to be a steady state. Throws
/// ResidualTooLarge when the scaled residual exceeds `tol.residual`.
SteadyStateReport classify_steady_state(const MassActionSystem& sys, const Eigen::VectorXd& x,
                                        const Tolerances& tol = {});

/// The degeneracy and stability part of classify_steady_state, for a
/// Jacobian already projected onto the stoichiometric subspace. Used where
/// the residual map is a rescaled mass-action system.
SteadyStateReport classify_projected(const Eigen::VectorXd& x, double residual, const Eigen::MatrixXd& projected,
                                     const Tolerances& tol = {});

/// Multistart damped Newton over log-uniform positive starts. The returned
/// list is deduplicated in log coordinates and ordered by first discovery;
/// it is not guaranteed to be complete.
std::vector<SteadyStateReport> find_steady_states(const MassActionSystem& sys, const SolverConfig& config = {});

/// Residual function with Jacobian for the generic Newton driver.
using ResidualFn = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd& jac)>;

struct NewtonOptions {
  int max_iterations = 100;
  double residual_tol = 1e-10;
  double residual_scale = 1.0;  ///< residual = scale * ||f||_inf
  int polish_steps = 3;
};

struct NewtonResult {
  Eigen::VectorXd x;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Damped Newton in the open positive orthant: the step is halved until the
/// iterate stays positive, then backtracked on ||f||^2. Non-square systems
/// are solved in the least-squares sense.
NewtonResult damped_newton(const ResidualFn& fn, Eigen::VectorXd x0, const NewtonOptions& opts);

/// Newton on f restricted to the compatibility class of `class_point`
/// (ignored for full-dimensional systems).
NewtonResult newton_steady_state(const MassActionSystem& sys, const Eigen::VectorXd& x0, int max_iterations,
                                 double residual_tol, const Eigen::VectorXd* class_point = nullptr);

/// Relative distance max_i |log a_i - log b_i|.
double log_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace crn
