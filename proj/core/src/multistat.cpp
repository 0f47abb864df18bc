#include "crnatoms/multistat.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "crnatoms/cone_lp.hpp"
#include "crnatoms/enumerator.hpp"
#include "crnatoms/parallel.hpp"
#include "crnatoms/parser.hpp"

namespace crn {

namespace {

Coeff sum_where_exceeds(const Complex& from, const Complex& to) {
  Coeff sum = 0;
  for (std::size_t i = 0; i < from.size(); ++i)
    if (to[i] > from[i]) sum += from[i];
  return sum;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

// Reaction with species i moved to position map[i] of a complex of size s.
Reaction map_reaction(const Reaction& r, const std::vector<SpeciesIndex>& map, std::size_t s) {
  Reaction out{Complex(s), Complex(s)};
  for (std::size_t i = 0; i < map.size(); ++i) {
    out.reactant[map[i]] = r.reactant[i];
    out.product[map[i]] = r.product[i];
  }
  return out;
}

Eigen::VectorXd map_state(const Eigen::VectorXd& x, const std::vector<SpeciesIndex>& map, std::size_t s) {
  Eigen::VectorXd out = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(s));
  for (std::size_t i = 0; i < map.size(); ++i)
    out[static_cast<Eigen::Index>(map[i])] = x[static_cast<Eigen::Index>(i)];
  return out;
}

Tolerances tolerances_of(const VerifyConfig& cfg) {
  return {cfg.residual, cfg.degenerate, cfg.eigenvalue};
}

// Known witness for the three-species running example.
struct KnownWitness {
  const char* network;
  std::vector<std::pair<const char*, double>> rates;
  std::array<std::array<double, 3>, 2> states;
};

const std::vector<KnownWitness>& known_witnesses() {
  static const std::vector<KnownWitness> table = {
      {"0 <-> A; 0 <-> B; 0 <-> C; 2A <-> A+B; A+B <-> A+C",
       {{"0 -> A", 1.0},
        {"A -> 0", 1.0},
        {"0 -> B", 1.0},
        {"B -> 0", 1.0},
        {"0 -> C", 41774.858},
        {"C -> 0", 1.0},
        {"2A -> A+B", 2.5081e-4},
        {"A+B -> 2A", 7.3335e-3},
        {"A+B -> A+C", 1.1614e-4},
        {"A+C -> A+B", 7.5610e-5}},
       {{{63.143335, 136.35902, 41577.356}, {25473.839, 1007.5644, 15295.454}}}},
  };
  return table;
}

// Fully open CFSTR. Rescaling species maps mass-action systems onto each
// other, so one state is pinned at the all-ones vector and the other is
// b = exp(v). Both are steady states exactly when the inflow and outflow
// rates solved from each species' two balance equations are positive. For a
// fixed b those conditions are linear and homogeneous in the non-flow rates,
// so whether any non-flow rates work is a small linear program. Species with
// no net change in any non-flow reaction (catalysts) take the same value at
// every steady state, so v_i = 0 there.
struct AnchoredSampler {
  const Network& net;
  std::vector<std::size_t> in_index, out_index, non_flow;
  std::vector<bool> catalyst;

  explicit AnchoredSampler(const Network& n) : net(n) {
    const std::size_t s = net.species_count();
    in_index.assign(s, 0);
    out_index.assign(s, 0);
    catalyst.assign(s, true);
    for (std::size_t i = 0; i < s; ++i) {
      in_index[i] = *net.index_of(inflow(s, i));
      out_index[i] = *net.index_of(outflow(s, i));
    }
    for (std::size_t k = 0; k < net.reaction_count(); ++k) {
      const Reaction& r = net.reaction(k);
      if (r.is_flow()) continue;
      non_flow.push_back(k);
      for (std::size_t i = 0; i < s; ++i)
        if (r.product[i] != r.reactant[i]) catalyst[i] = false;
    }
  }

  // Best normalized margin over non-flow rates for this b; `kappa` receives
  // the maximizing non-flow rates (up to scale).
  double margin(const Eigen::VectorXd& b, Eigen::VectorXd& kappa) const {
    const std::size_t s = net.species_count();
    const auto n = static_cast<Eigen::Index>(non_flow.size());
    std::vector<double> rho(non_flow.size());
    for (std::size_t j = 0; j < non_flow.size(); ++j) {
      const Reaction& r = net.reaction(non_flow[j]);
      double v = 1.0;
      for (std::size_t i = 0; i < s; ++i)
        if (r.reactant[i] != 0) v *= std::pow(b[static_cast<Eigen::Index>(i)], static_cast<double>(r.reactant[i]));
      rho[j] = v;
    }
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(2 * s), n);
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < s; ++i) {
      if (catalyst[i]) continue;
      const double d = b[static_cast<Eigen::Index>(i)] - 1.0;
      const double sign = d > 0 ? 1.0 : -1.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const Reaction& rx = net.reaction(non_flow[static_cast<std::size_t>(j)]);
        const double gamma = static_cast<double>(rx.product[i] - rx.reactant[i]);
        rows(r, j) = sign * gamma * (rho[static_cast<std::size_t>(j)] - 1.0);      // outflow rate * |d|
        rows(r + 1, j) = rows(r, j) - std::abs(d) * gamma;                        // inflow rate * |d|
      }
      r += 2;
    }
    rows.conservativeResize(r, n);
    for (Eigen::Index i = 0; i < r; ++i) {
      double norm = rows.row(i).norm();
      if (norm == 0.0) return -1.0;
      rows.row(i) /= norm;
    }
    return max_cone_margin(rows, kappa);
  }

  bool solve_flows(std::vector<double>& rates, const Eigen::VectorXd& b) const {
    const auto s = b.size();
    Eigen::VectorXd na = Eigen::VectorXd::Zero(s), nb = Eigen::VectorXd::Zero(s);
    for (std::size_t k : non_flow) {
      const Reaction& r = net.reaction(k);
      double vb = rates[k];
      for (Eigen::Index i = 0; i < s; ++i)
        if (r.reactant[static_cast<std::size_t>(i)] != 0)
          vb *= std::pow(b[i], static_cast<double>(r.reactant[static_cast<std::size_t>(i)]));
      for (Eigen::Index i = 0; i < s; ++i) {
        const double c = static_cast<double>(r.product[static_cast<std::size_t>(i)] - r.reactant[static_cast<std::size_t>(i)]);
        na[i] += rates[k] * c;
        nb[i] += vb * c;
      }
    }
    for (Eigen::Index i = 0; i < s; ++i) {
      const auto si = static_cast<std::size_t>(i);
      double out = 1.0, in = 1.0;
      if (!catalyst[si]) {
        out = (nb[i] - na[i]) / (b[i] - 1.0);
        in = out - na[i];
      }
      if (!(out > 0.0) || !(in > 0.0) || !std::isfinite(out) || !std::isfinite(in)) return false;
      rates[out_index[si]] = out;
      rates[in_index[si]] = in;
    }
    return true;
  }
};

std::optional<Witness> try_sample(const Network& net, const SearchConfig& cfg, std::size_t sample,
                                  const AnchoredSampler* anchored) {
  const std::size_t s = net.species_count();
  std::mt19937_64 rng(mix_seed(cfg.seed, sample));
  std::vector<double> rates(net.reaction_count());
  for (double& k : rates) k = log_uniform(rng, cfg.rate_low, cfg.rate_high);

  auto attempt = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) -> std::optional<Witness> {
    Witness w;
    w.network = net;
    w.rates.values = rates;
    w.reports[0].x = a;
    w.reports[1].x = b;
    try {
      Witness v = verify_witness(net, w, cfg.verify);
      v.seed = cfg.seed;
      v.budget = cfg.budget;
      v.sample = sample;
      v.provenance = "search";
      return v;
    } catch (const WitnessError&) {
      return std::nullopt;
    }
  };

  if (anchored) {
    // Random b, then a (1+1) evolution strategy on the LP margin over log b.
    const auto sd = static_cast<Eigen::Index>(s);
    const double spread = log_uniform(rng, cfg.spread_low, cfg.spread_high);
    std::uniform_real_distribution<double> offset(-spread, spread);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(sd);
    for (Eigen::Index i = 0; i < sd; ++i)
      if (!anchored->catalyst[static_cast<std::size_t>(i)]) v[i] = offset(rng);
    Eigen::VectorXd kappa;
    double score = anchored->margin(v.array().exp(), kappa);
    double sigma = std::max(spread, 0.05);
    std::normal_distribution<double> normal;
    for (std::size_t it = 0; it <= cfg.refine_steps; ++it) {
      if (score > cfg.lp_margin) {
        const Eigen::VectorXd b = v.array().exp();
        const double scale = 1.0 / kappa.maxCoeff();
        for (std::size_t j = 0; j < anchored->non_flow.size(); ++j)
          rates[anchored->non_flow[j]] = kappa[static_cast<Eigen::Index>(j)] * scale;
        if (anchored->solve_flows(rates, b))
          if (auto w = attempt(Eigen::VectorXd::Ones(sd), b)) return w;
        return std::nullopt;
      }
      if (it == cfg.refine_steps) break;
      Eigen::VectorXd q = v;
      for (Eigen::Index i = 0; i < sd; ++i)
        if (!anchored->catalyst[static_cast<std::size_t>(i)]) q[i] = std::clamp(q[i] + sigma * normal(rng), -10.0, 10.0);
      Eigen::VectorXd kq;
      double sq = anchored->margin(q.array().exp(), kq);
      if (sq >= score) {
        v = std::move(q);
        kappa = std::move(kq);
        score = sq;
        sigma = std::min(sigma * 1.5, 4.0);
      } else {
        sigma = std::max(sigma * 0.85, 1e-3);
      }
    }
    return std::nullopt;
  }

  MassActionSystem sys(net, RateAssignment{rates});
  SolverConfig solver = cfg.solver;
  solver.seed = mix_seed(cfg.seed ^ 0x5eedULL, sample);
  solver.threads = 1;
  auto states = find_steady_states(sys, solver);
  std::vector<const SteadyStateReport*> good;
  for (const auto& st : states)
    if (st.nondegenerate) good.push_back(&st);
  for (std::size_t i = 0; i < good.size(); ++i)
    for (std::size_t j = i + 1; j < good.size(); ++j)
      if (auto w = attempt(good[i]->x, good[j]->x)) return w;
  return std::nullopt;
}

}  // namespace

bool one_reaction_multistationary(const Network& net) {
  if (!net.is_cfstr()) throw PreconditionError("one_reaction_multistationary: network is not a CFSTR");
  auto nf = net.non_flow_reactions();
  if (nf.size() == 1) return sum_where_exceeds(nf[0].reactant, nf[0].product) > 1;
  if (nf.size() == 2 && nf[0].reversed() == nf[1])
    return sum_where_exceeds(nf[0].reactant, nf[0].product) > 1 ||
           sum_where_exceeds(nf[0].product, nf[0].reactant) > 1;
  throw PreconditionError("one_reaction_multistationary: expected one non-flow reaction or reversible pair");
}

Witness verify_witness(const Network& net, const Witness& w, const VerifyConfig& cfg) {
  using K = WitnessError::Kind;
  const auto s = static_cast<Eigen::Index>(net.species_count());
  if (w.rates.values.size() != net.reaction_count())
    throw WitnessError(K::malformed, "witness rates do not match the network");
  for (const auto& rep : w.reports)
    if (rep.x.size() != s) throw WitnessError(K::malformed, "witness state has the wrong dimension");
  for (const auto& rep : w.reports)
    if (!rep.x.allFinite() || (rep.x.array() <= 0.0).any())
      throw WitnessError(K::nonpositive, "witness state is not strictly positive");

  MassActionSystem sys = [&] {
    try {
      return MassActionSystem(net, w.rates);
    } catch (const PreconditionError& e) {
      throw WitnessError(K::malformed, e.what());
    }
  }();

  const Eigen::VectorXd& x0 = w.reports[0].x;
  if (!sys.full_dimensional()) {
    const Eigen::MatrixXd& cons = sys.conservation_basis();
    double gap = (cons.transpose() * (w.reports[1].x - x0)).norm();
    if (gap > 1e-8 * (x0.norm() + w.reports[1].x.norm()))
      throw WitnessError(K::incompatible, "witness states lie in different compatibility classes");
  }

  Witness out = w;
  out.network = net;
  out.network_id = network_id(net);
  for (std::size_t i = 0; i < 2; ++i) {
    const Eigen::VectorXd& start = w.reports[i].x;
    auto nr = newton_steady_state(sys, start, cfg.max_iterations, cfg.residual, &x0);
    if (!nr.converged) throw WitnessError(K::diverged, "refinement did not reach the residual tolerance");
    if ((nr.x.array() <= 0.0).any()) throw WitnessError(K::nonpositive, "refined state left the positive orthant");
    if (log_distance(nr.x, start) > 0.1) throw WitnessError(K::diverged, "refinement moved away from the state");
    out.reports[i] = classify_steady_state(sys, nr.x, tolerances_of(cfg));
  }
  if (log_distance(out.reports[0].x, out.reports[1].x) <= cfg.distinct)
    throw WitnessError(K::merged, "witness states merge under refinement");
  for (const auto& rep : out.reports)
    if (!rep.nondegenerate) throw WitnessError(K::degenerate, "witness state has a degenerate Jacobian");
  return out;
}

std::optional<Witness> replay_witness(const Network& net, const VerifyConfig& cfg) {
  for (const KnownWitness& pub : known_witnesses()) {
    Network a = parse_network(pub.network);
    auto sigma = find_isomorphism(a, net);
    if (!sigma) continue;
    std::map<Reaction, double> rates;
    for (const auto& [text, k] : pub.rates) {
      Network single = parse_network(text);
      // Re-express the single reaction over the species of `a`, then map.
      std::vector<SpeciesIndex> to_a(single.species_count());
      for (std::size_t i = 0; i < single.species_count(); ++i) to_a[i] = *a.species_index(single.species()[i]);
      Reaction in_a = map_reaction(single.reaction(0), to_a, a.species_count());
      rates[map_reaction(in_a, *sigma, net.species_count())] = k;
    }
    Witness w;
    w.network = net;
    w.rates = RateAssignment::from_map(net, rates);
    for (std::size_t i = 0; i < 2; ++i) {
      Eigen::VectorXd x = Eigen::Map<const Eigen::Vector3d>(pub.states[i].data());
      w.reports[i].x = map_state(x, *sigma, net.species_count());
    }
    try {
      Witness v = verify_witness(net, w, cfg);
      v.provenance = "replay";
      return v;
    } catch (const WitnessError&) {
      continue;
    }
  }
  return std::nullopt;
}

std::optional<Witness> search_witness(const Network& net, const SearchConfig& cfg) {
  if (!net.is_cfstr()) throw PreconditionError("search_witness: network is not a CFSTR");
  if (cfg.replay) {
    if (auto w = replay_witness(net, cfg.verify)) {
      w->seed = cfg.seed;
      w->budget = cfg.budget;
      return w;
    }
  }
  std::optional<AnchoredSampler> anchored;
  if (net.is_fully_open()) anchored.emplace(net);
  const AnchoredSampler* sampler = anchored ? &*anchored : nullptr;

  const std::size_t threads = std::max<std::size_t>(1, cfg.threads);
  const std::size_t batch = threads == 1 ? 1 : threads * 4;
  for (std::size_t begin = 0; begin < cfg.budget; begin += batch) {
    const std::size_t n = std::min(batch, cfg.budget - begin);
    std::vector<std::optional<Witness>> found(n);
    parallel_for(n, threads, [&](std::size_t i) { found[i] = try_sample(net, cfg, begin + i, sampler); });
    for (auto& w : found)
      if (w) return w;
  }
  return std::nullopt;
}

namespace {

struct PathPoint {
  std::array<Eigen::VectorXd, 2> x;
};

// Newton-continues both states through one homotopy step; fails when a
// state does not converge, jumps branch, degenerates, or the two merge.
bool continue_step(const std::function<ResidualFn(std::size_t)>& fn_for, const NewtonOptions& opts,
                   PathPoint& point, LiftStep& step,
                   const std::function<SteadyStateReport(const Eigen::VectorXd&)>& classify, double distinct) {
  PathPoint next;
  for (std::size_t i = 0; i < 2; ++i) {
    NewtonResult nr = damped_newton(fn_for(i), point.x[i], opts);
    if (!nr.converged) return false;
    step.drift[i] = log_distance(nr.x, point.x[i]);
    if (step.drift[i] > 0.5) return false;
    SteadyStateReport rep;
    try {
      rep = classify(nr.x);
    } catch (const ResidualTooLarge&) {
      return false;
    }
    if (!rep.nondegenerate) return false;
    step.residual[i] = nr.residual;
    step.margin[i] = rep.degeneracy_margin;
    step.stable[i] = rep.exponentially_stable;
    next.x[i] = nr.x;
  }
  if (log_distance(next.x[0], next.x[1]) <= distinct) return false;
  point = std::move(next);
  return true;
}

std::vector<double> geometric_grid(double first, double last, std::size_t steps) {
  std::vector<double> grid;
  if (steps <= 1) return {last};
  for (std::size_t j = 0; j < steps; ++j)
    grid.push_back(first * std::pow(last / first, static_cast<double>(j) / static_cast<double>(steps - 1)));
  grid.back() = last;
  return grid;
}

Witness witness_from(const Network& net, std::vector<double> rates, const PathPoint& point, const Witness& src,
                     const VerifyConfig& cfg) {
  Witness w;
  w.network = net;
  w.rates.values = std::move(rates);
  w.reports[0].x = point.x[0];
  w.reports[1].x = point.x[1];
  Witness v = verify_witness(net, w, cfg);
  v.seed = src.seed;
  v.budget = src.budget;
  v.sample = src.sample;
  v.provenance = "lift";
  return v;
}

}  // namespace

LiftResult lift_subnetwork(const Witness& w, const Network& g, const LiftSchedule& schedule) {
  const Network& n = w.network;
  if (n.species_count() != g.species_count())
    throw PreconditionError("lift_subnetwork: networks must share their species");
  if (stoich_subspace_dim(n) != stoich_subspace_dim(g))
    throw PreconditionError("lift_subnetwork: stoichiometric subspaces differ");
  auto cert = find_embedding(n, g);
  if (!cert) throw PreconditionError("lift_subnetwork: not a subnetwork");
  const std::size_t s = g.species_count();

  std::vector<double> base(g.reaction_count(), 0.0);
  std::vector<bool> extra(g.reaction_count(), true);
  double log_sum = 0.0;
  for (std::size_t j = 0; j < n.reaction_count(); ++j) {
    const std::size_t k = cert->preimages[j].front();
    base[k] = w.rates.values[j];
    extra[k] = false;
    log_sum += std::log(w.rates.values[j]);
  }
  const double geomean = std::exp(log_sum / static_cast<double>(n.reaction_count()));

  PathPoint source;
  for (std::size_t i = 0; i < 2; ++i) source.x[i] = map_state(w.state(i), cert->species_map, s);

  LiftResult result;
  const bool any_extra = std::find(extra.begin(), extra.end(), true) != extra.end();
  double dagger = schedule.kappa_dagger * geomean;
  if (!any_extra) {
    result.witness = witness_from(g, base, source, w, schedule.verify);
    return result;
  }

  auto rates_at = [&](double lambda, double kd) {
    std::vector<double> r = base;
    for (std::size_t k = 0; k < r.size(); ++k)
      if (extra[k]) r[k] = lambda * kd;
    return r;
  };
  const auto grid = geometric_grid(schedule.initial, 1.0, schedule.steps);
  const Tolerances tol{schedule.residual, schedule.verify.degenerate, schedule.verify.eigenvalue};
  NewtonOptions opts;
  opts.max_iterations = schedule.newton_iterations;
  opts.residual_tol = schedule.residual;

  for (std::size_t attempt = 0; attempt <= schedule.max_halvings; ++attempt, dagger *= 0.5) {
    PathPoint point = source;
    std::vector<LiftStep> path;
    bool ok = true;
    for (double lambda : grid) {
      MassActionSystem sys(g, RateAssignment{rates_at(lambda, dagger)});
      opts.residual_scale = sys.residual_scale();
      LiftStep step;
      step.stage = "lambda";
      step.parameter = lambda;
      // Each state stays in its own compatibility class.
      const std::array<Eigen::VectorXd, 2> anchors = point.x;
      auto fn_for = [&](std::size_t i) -> ResidualFn {
        return [&sys, &anchors, i, s](const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd& jac) {
          if (sys.full_dimensional()) {
            f = sys.evaluate(x);
            jac = sys.jacobian(x);
            return;
          }
          const Eigen::MatrixXd& c = sys.conservation_basis();
          const auto sd = static_cast<Eigen::Index>(s);
          const double wgt = 1.0 / sys.residual_scale();
          f.resize(sd + c.cols());
          jac.resize(sd + c.cols(), sd);
          f.head(sd) = sys.evaluate(x);
          f.tail(c.cols()) = wgt * c.transpose() * (x - anchors[i]);
          jac.topRows(sd) = sys.jacobian(x);
          jac.bottomRows(c.cols()) = wgt * c.transpose();
        };
      };
      if (!continue_step(fn_for, opts, point, step,
                         [&](const Eigen::VectorXd& x) { return classify_steady_state(sys, x, tol); },
                         schedule.verify.distinct)) {
        ok = false;
        break;
      }
      path.push_back(step);
    }
    if (!ok) continue;
    try {
      result.witness = witness_from(g, rates_at(1.0, dagger), point, w, schedule.verify);
    } catch (const WitnessError&) {
      continue;
    }
    result.path = std::move(path);
    result.kappa_dagger = dagger;
    return result;
  }
  throw LiftError("lift_subnetwork: continuation failed after " + std::to_string(schedule.max_halvings) +
                  " halvings of the added rates");
}

LiftResult lift_embedded(const Witness& w, const Network& g, const LiftSchedule& schedule) {
  const Network& n = w.network;
  if (stoich_subspace_dim(n) != n.species_count())
    throw PreconditionError("lift_embedded: the embedded network must be full-dimensional");
  auto cert = find_embedding(n, g);
  if (!cert) throw PreconditionError("lift_embedded: not an embedded network");
  const std::size_t sg = g.species_count();

  // Current network and states over the kept species, ordered by index in g.
  std::vector<SpeciesIndex> current = cert->species_map;
  std::sort(current.begin(), current.end());
  auto position_in = [](const std::vector<SpeciesIndex>& set, SpeciesIndex x) {
    return static_cast<std::size_t>(std::lower_bound(set.begin(), set.end(), x) - set.begin());
  };
  std::vector<SpeciesIndex> to_current(n.species_count());
  for (std::size_t i = 0; i < n.species_count(); ++i) to_current[i] = position_in(current, cert->species_map[i]);

  auto names_of = [&](const std::vector<SpeciesIndex>& set) {
    std::vector<std::string> names;
    for (SpeciesIndex j : set) names.push_back(g.species()[j]);
    return names;
  };

  std::map<Reaction, double> rate_of;
  for (std::size_t k = 0; k < n.reaction_count(); ++k)
    rate_of[map_reaction(n.reaction(k), to_current, current.size())] = w.rates.values[k];
  std::vector<Reaction> reactions;
  for (const auto& [r, k] : rate_of) reactions.push_back(r);
  Network m(names_of(current), reactions);
  std::vector<double> m_rates = RateAssignment::from_map(m, rate_of).values;
  PathPoint point;
  for (std::size_t i = 0; i < 2; ++i) point.x[i] = map_state(w.state(i), to_current, current.size());

  std::vector<SpeciesIndex> missing;
  for (SpeciesIndex j = 0; j < sg; ++j)
    if (!std::binary_search(current.begin(), current.end(), j)) missing.push_back(j);

  LiftResult result;
  NewtonOptions opts;
  opts.max_iterations = schedule.newton_iterations;
  opts.residual_tol = schedule.residual;
  const Tolerances tol{schedule.residual, schedule.verify.degenerate, schedule.verify.eigenvalue};

  for (SpeciesIndex x_new : missing) {
    const std::string& name = g.species()[x_new];
    std::vector<SpeciesIndex> next_set = current;
    next_set.insert(next_set.begin() + static_cast<std::ptrdiff_t>(position_in(current, x_new)), x_new);
    const std::size_t px = position_in(next_set, x_new);
    const std::size_t s = next_set.size();

    // g restricted to the next species set, with coordinates in next_set order.
    std::vector<bool> keep_g(sg, false);
    for (SpeciesIndex j : next_set) keep_g[j] = true;
    std::vector<Reaction> h;
    for (const Reaction& r : g.reactions()) {
      Reaction rr = restrict_reaction(r, keep_g);
      if (!rr.is_trivial() && std::find(h.begin(), h.end(), rr) == h.end()) h.push_back(rr);
    }

    auto only_x = [&](Coeff a, Coeff b) {
      Complex ca(s), cb(s);
      ca[px] = a;
      cb[px] = b;
      return Reaction{ca, cb};
    };
    std::vector<Reaction> flow_type;
    for (auto [a, b] : {std::pair<Coeff, Coeff>{0, 1}, std::pair<Coeff, Coeff>{1, 2}}) {
      Reaction fwd = only_x(a, b);
      if (std::count(h.begin(), h.end(), fwd) && std::count(h.begin(), h.end(), fwd.reversed())) {
        flow_type = {fwd, fwd.reversed()};
        break;
      }
    }
    if (flow_type.empty())
      throw FlowTypeMissing("lift_embedded: no flow-type subnetwork (0 <-> X or X <-> 2X) for species " + name);

    // One preimage in h for each reaction of the current network.
    std::vector<bool> drop_x(s, true);
    drop_x[px] = false;
    std::map<Reaction, double> lifted;
    for (std::size_t k = 0; k < m.reaction_count(); ++k) {
      auto it = std::find_if(h.begin(), h.end(), [&](const Reaction& r) {
        return std::find(flow_type.begin(), flow_type.end(), r) == flow_type.end() &&
               restrict_reaction(r, drop_x) == m.reaction(k) && !lifted.count(r);
      });
      if (it == h.end()) throw LiftError("lift_embedded: reaction has no preimage when restoring " + name);
      lifted[*it] = m_rates[k];
    }
    std::vector<Reaction> step_reactions;
    for (const auto& [r, k] : lifted) step_reactions.push_back(r);
    step_reactions.insert(step_reactions.end(), flow_type.begin(), flow_type.end());
    Network gp(names_of(next_set), step_reactions);
    std::vector<bool> is_flow_type(gp.reaction_count(), false);
    for (const Reaction& r : flow_type) is_flow_type[*gp.index_of(r)] = true;
    auto rates_at = [&](double delta) {
      std::vector<double> r(gp.reaction_count());
      for (std::size_t k = 0; k < r.size(); ++k)
        r[k] = is_flow_type[k] ? 1.0 / delta : lifted.at(gp.reaction(k));
      return r;
    };
    double base_max = 1.0;
    for (const auto& [r, k] : lifted) base_max = std::max(base_max, k);

    PathPoint start;
    for (std::size_t i = 0; i < 2; ++i) {
      start.x[i].resize(static_cast<Eigen::Index>(s));
      for (std::size_t c = 0, src = 0; c < s; ++c)
        start.x[i][static_cast<Eigen::Index>(c)] = c == px ? 1.0 : point.x[i][static_cast<Eigen::Index>(src++)];
    }

    bool done = false;
    double target = schedule.target_delta;
    for (std::size_t attempt = 0; attempt <= schedule.max_delta_halvings && !done; ++attempt, target *= 0.5) {
      PathPoint p = start;
      std::vector<LiftStep> path;
      bool ok = true;
      for (double delta : geometric_grid(std::min(schedule.initial, target), target, schedule.steps)) {
        MassActionSystem sys(gp, RateAssignment{rates_at(delta)});
        // Row px scaled by delta: F(delta, x) = h(x) + delta (0, ..., f_X(x)).
        ResidualFn fn = [&](const Eigen::VectorXd& x, Eigen::VectorXd& f, Eigen::MatrixXd& jac) {
          f = sys.evaluate(x);
          jac = sys.jacobian(x);
          f[static_cast<Eigen::Index>(px)] *= delta;
          jac.row(static_cast<Eigen::Index>(px)) *= delta;
        };
        opts.residual_scale = 1.0 / (1.0 + base_max);
        LiftStep step;
        step.stage = name;
        step.parameter = delta;
        // Classified on the scaled map: the 1/delta flow row would swamp the
        // others in the unscaled Jacobian. gp is full-dimensional.
        auto classify = [&](const Eigen::VectorXd& x) {
          Eigen::VectorXd f;
          Eigen::MatrixXd jac;
          fn(x, f, jac);
          const double r = f.lpNorm<Eigen::Infinity>() * opts.residual_scale;
          if (!(r <= tol.residual)) throw ResidualTooLarge("lift_embedded: residual above tolerance");
          return classify_projected(x, r, jac, tol);
        };
        if (!continue_step([&](std::size_t) { return fn; }, opts, p, step, classify, schedule.verify.distinct)) {
          ok = false;
          break;
        }
        path.push_back(step);
      }
      if (!ok) continue;
      try {
        Witness v = witness_from(gp, rates_at(target), p, w, schedule.verify);
        m = gp;
        m_rates = v.rates.values;
        point.x = {v.state(0), v.state(1)};
        result.path.insert(result.path.end(), path.begin(), path.end());
        done = true;
      } catch (const WitnessError&) {
        continue;
      }
    }
    if (!done) throw LiftError("lift_embedded: continuation failed while restoring species " + name);
    current = next_set;
  }

  Witness restored = witness_from(m, m_rates, point, w, schedule.verify);
  LiftResult tail = lift_subnetwork(restored, g, schedule);
  result.path.insert(result.path.end(), tail.path.begin(), tail.path.end());
  result.witness = std::move(tail.witness);
  result.kappa_dagger = tail.kappa_dagger;
  return result;
}

}  // namespace crn
