#include "crnatoms/mass_action.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "crnatoms/parallel.hpp"

namespace crn {

namespace {
constexpr double kRowNormFloor = 1e-6;
}  // namespace

RateAssignment RateAssignment::uniform(const Network& net, double k) {
  return {std::vector<double>(net.reaction_count(), k)};
}

RateAssignment RateAssignment::from_map(const Network& net, const std::map<Reaction, double>& rates) {
  RateAssignment out;
  for (const Reaction& r : net.reactions()) {
    auto it = rates.find(r);
    if (it == rates.end()) throw PreconditionError("rate missing for a reaction");
    out.values.push_back(it->second);
  }
  return out;
}

MassActionSystem::MassActionSystem(Network net, RateAssignment rates)
    : net_(std::move(net)), rates_(std::move(rates)) {
  if (rates_.values.size() != net_.reaction_count())
    throw PreconditionError("rate assignment does not match the reaction set");
  double kmax = 0.0;
  for (std::size_t k = 0; k < net_.reaction_count(); ++k) {
    double rate = rates_.values[k];
    if (!(rate > 0.0) || !std::isfinite(rate)) throw PreconditionError("rate constants must be positive");
    kmax = std::max(kmax, rate);
    const Reaction& r = net_.reaction(k);
    Term t{rate, {}, {}};
    for (std::size_t i = 0; i < net_.species_count(); ++i) {
      if (r.reactant[i] != 0) t.exponents.emplace_back(i, static_cast<int>(r.reactant[i]));
      if (r.product[i] != r.reactant[i]) t.change.emplace_back(i, static_cast<double>(r.product[i] - r.reactant[i]));
    }
    terms_.push_back(std::move(t));
  }
  residual_scale_ = 1.0 / (1.0 + kmax);

  const std::size_t s = net_.species_count();
  stoich_dim_ = stoich_subspace_dim(net_);
  if (stoich_dim_ == s) {
    stoich_basis_ = Eigen::MatrixXd::Identity(s, s);
    conservation_basis_ = Eigen::MatrixXd(s, 0);
  } else {
    Eigen::MatrixXd gamma(s, net_.reaction_count());
    for (std::size_t k = 0; k < net_.reaction_count(); ++k) {
      auto v = net_.reaction(k).vector();
      for (std::size_t i = 0; i < s; ++i) gamma(i, k) = static_cast<double>(v[i]);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(gamma, Eigen::ComputeFullU);
    stoich_basis_ = svd.matrixU().leftCols(stoich_dim_);
    conservation_basis_ = svd.matrixU().rightCols(s - stoich_dim_);
  }
}

MassActionSystem build_system(const Network& net, const RateAssignment& rates) { return {net, rates}; }

Eigen::VectorXd MassActionSystem::evaluate(const Eigen::VectorXd& x) const {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(dimension());
  for (const Term& t : terms_) {
    double v = t.rate;
    for (auto [i, e] : t.exponents) v *= std::pow(x[i], e);
    for (auto [i, c] : t.change) f[i] += c * v;
  }
  return f;
}

Eigen::MatrixXd MassActionSystem::jacobian(const Eigen::VectorXd& x) const {
  const std::size_t s = dimension();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(s, s);
  for (const Term& t : terms_) {
    for (auto [j, ej] : t.exponents) {
      // d/dx_j of kappa x^y = kappa y_j x^(y - e_j)
      double v = t.rate * ej;
      for (auto [i, e] : t.exponents) v *= std::pow(x[i], i == j ? e - 1 : e);
      for (auto [i, c] : t.change) jac(i, j) += c * v;
    }
  }
  return jac;
}

double MassActionSystem::scaled_residual(const Eigen::VectorXd& x) const {
  return residual_scale_ * evaluate(x).lpNorm<Eigen::Infinity>();
}

double log_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) d = std::max(d, std::abs(std::log(a[i]) - std::log(b[i])));
  return d;
}

NewtonResult damped_newton(const ResidualFn& fn, Eigen::VectorXd x0, const NewtonOptions& opts) {
  NewtonResult res;
  res.x = std::move(x0);
  Eigen::VectorXd f;
  Eigen::MatrixXd jac;
  auto residual_of = [&](const Eigen::VectorXd& f_) { return opts.residual_scale * f_.lpNorm<Eigen::Infinity>(); };
  auto finite = [](const Eigen::VectorXd& v) { return v.allFinite(); };

  fn(res.x, f, jac);
  if (!finite(f)) return res;
  res.residual = residual_of(f);
  int polish_left = opts.polish_steps;
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (res.residual <= opts.residual_tol) {
      res.converged = true;
      if (polish_left-- <= 0) break;
    }
    Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-f);
    if (!finite(step)) break;
    double t = 1.0;
    int guard = 0;
    while (((res.x + t * step).array() <= 0.0).any() && guard++ < 80) t *= 0.5;
    if (guard >= 80) break;

    const double f2 = f.squaredNorm();
    Eigen::VectorXd x_new, f_new;
    Eigen::MatrixXd jac_new;
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      x_new = res.x + t * step;
      fn(x_new, f_new, jac_new);
      if (finite(f_new) && f_new.squaredNorm() <= (1.0 - 1e-4 * t) * f2) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    double r_new = residual_of(f_new);
    if (res.converged && r_new >= res.residual) break;  // polishing no longer helps
    res.x = std::move(x_new);
    f = std::move(f_new);
    jac = std::move(jac_new);
    res.residual = r_new;
    res.iterations = it + 1;
  }
  res.converged = res.residual <= opts.residual_tol && (res.x.array() > 0.0).all();
  return res;
}

NewtonResult newton_steady_state(const MassActionSystem& sys, const Eigen::VectorXd& x0, int max_iterations,
                                 double residual_tol, const Eigen::VectorXd* class_point) {
  NewtonOptions opts;
  opts.max_iterations = max_iterations;
  opts.residual_tol = residual_tol;
  opts.residual_scale = sys.residual_scale();
  if (sys.full_dimensional()) {
    return damped_newton(
        [&](const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd& jac) {
          f = sys.evaluate(x);
          jac = sys.jacobian(x);
        },
        x0, opts);
  }
  // Append the affine class constraints W^T x = W^T c0, scaled to the rate
  // scale so one residual norm covers both blocks.
  const std::size_t s = sys.dimension();
  const Eigen::MatrixXd& w = sys.conservation_basis();
  const Eigen::Index c = w.cols();
  Eigen::VectorXd point = class_point ? *class_point : Eigen::VectorXd::Ones(static_cast<Eigen::Index>(s));
  Eigen::VectorXd target = w.transpose() * point;
  const double weight = 1.0 / sys.residual_scale();
  return damped_newton(
      [&](const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd& jac) {
        f.resize(static_cast<Eigen::Index>(s) + c);
        jac.resize(static_cast<Eigen::Index>(s) + c, static_cast<Eigen::Index>(s));
        f.head(static_cast<Eigen::Index>(s)) = sys.evaluate(x);
        f.tail(c) = weight * (w.transpose() * x - target);
        jac.topRows(static_cast<Eigen::Index>(s)) = sys.jacobian(x);
        jac.bottomRows(c) = weight * w.transpose();
      },
      x0, opts);
}

SteadyStateReport classify_steady_state(const MassActionSystem& sys, const Eigen::VectorXd& x, const Tolerances& tol) {
  const double residual = sys.scaled_residual(x);
  if (!(residual <= tol.residual))
    throw ResidualTooLarge("classify_steady_state: residual " + std::to_string(residual) + " above tolerance");
  const Eigen::MatrixXd& basis = sys.stoich_basis();
  return classify_projected(x, residual, basis.transpose() * sys.jacobian(x) * basis, tol);
}

SteadyStateReport classify_projected(const Eigen::VectorXd& x, double residual, const Eigen::MatrixXd& projected,
                                     const Tolerances& tol) {
  SteadyStateReport rep;
  rep.x = x;
  rep.residual = residual;
  rep.jacobian_det = projected.determinant();
  // A row that cancels to roundoff would also cancel out of the Hadamard
  // ratio, so row norms are floored relative to the largest one.
  double max_row = 0.0;
  for (Eigen::Index i = 0; i < projected.rows(); ++i) max_row = std::max(max_row, projected.row(i).norm());
  double norms = 1.0;
  for (Eigen::Index i = 0; i < projected.rows(); ++i)
    norms *= std::max(projected.row(i).norm(), kRowNormFloor * max_row);
  rep.degeneracy_margin = norms > 0.0 ? std::abs(rep.jacobian_det) / norms : 0.0;
  rep.nondegenerate = rep.degeneracy_margin > tol.degenerate;

  if (projected.rows() > 0) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(projected, false);
    const auto& ev = es.eigenvalues();
    double radius = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
      rep.eigenvalues.push_back(ev[i]);
      radius = std::max(radius, std::abs(ev[i]));
    }
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), [](const auto& a, const auto& b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    bool all_negative = std::all_of(rep.eigenvalues.begin(), rep.eigenvalues.end(),
                                    [&](const auto& l) { return l.real() < -tol.eigenvalue * radius; });
    rep.exponentially_stable = rep.nondegenerate && all_negative;
  }
  return rep;
}

std::vector<SteadyStateReport> find_steady_states(const MassActionSystem& sys, const SolverConfig& config) {
  const std::size_t s = sys.dimension();
  const std::size_t total = config.extra_starts.size() + config.starts;
  std::vector<std::optional<SteadyStateReport>> found(total);
  const Eigen::VectorXd* class_point = config.class_point ? &*config.class_point : nullptr;

  parallel_for(total, config.threads, [&](std::size_t idx) {
    Eigen::VectorXd x0(static_cast<Eigen::Index>(s));
    if (idx < config.extra_starts.size()) {
      x0 = config.extra_starts[idx];
    } else {
      std::mt19937_64 rng(mix_seed(config.seed, idx));
      std::uniform_real_distribution<double> u(std::log(config.start_low), std::log(config.start_high));
      for (std::size_t i = 0; i < s; ++i) x0[static_cast<Eigen::Index>(i)] = std::exp(u(rng));
    }
    auto nr = newton_steady_state(sys, x0, config.max_iterations, config.tol.residual, class_point);
    if (!nr.converged) return;
    if (sys.scaled_residual(nr.x) > config.tol.residual) return;
    found[idx] = classify_steady_state(sys, nr.x, config.tol);
  });

  std::vector<SteadyStateReport> out;
  for (auto& cand : found) {
    if (!cand) continue;
    auto dup = std::find_if(out.begin(), out.end(),
                            [&](const SteadyStateReport& r) { return log_distance(r.x, cand->x) <= config.dedup_tol; });
    if (dup == out.end()) out.push_back(std::move(*cand));
    else if (cand->residual < dup->residual) *dup = std::move(*cand);
  }
  return out;
}

}  // namespace crn
