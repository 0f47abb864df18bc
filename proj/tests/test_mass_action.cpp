#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>

#include "crnatoms/mass_action.hpp"
#include "crnatoms/parser.hpp"
#include "test_util.hpp"

using namespace crn;

namespace {

RateAssignment rates_by_text(const Network& net, const std::map<std::string, double>& by_text) {
  RateAssignment r;
  for (const auto& rx : net.reactions()) r.values.push_back(by_text.at(reaction_text(net, rx)));
  return r;
}

// Term-by-term evaluation with std::pow.
Eigen::VectorXd oracle_f(const Network& net, const RateAssignment& k, const Eigen::VectorXd& x) {
  Eigen::VectorXd f = Eigen::VectorXd::Zero(net.species_count());
  for (std::size_t j = 0; j < net.reaction_count(); ++j) {
    const Reaction& r = net.reaction(j);
    double mono = k.values[j];
    for (std::size_t i = 0; i < net.species_count(); ++i) mono *= std::pow(x[i], double(r.reactant[i]));
    for (std::size_t i = 0; i < net.species_count(); ++i) f[i] += mono * double(r.product[i] - r.reactant[i]);
  }
  return f;
}

Eigen::VectorXd random_positive(std::mt19937_64& rng, std::size_t s, double lo = 0.2, double hi = 3.0) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Eigen::VectorXd x(s);
  for (std::size_t i = 0; i < s; ++i) x[i] = std::exp(u(rng));
  return x;
}

const char* kRunning = "0 <-> A; 0 <-> B; 0 <-> C; 2A <-> A+B; A+B <-> A+C";

std::map<std::string, double> example_rates() {
  return {{"0 -> A", 1.0},        {"A -> 0", 1.0},          {"0 -> B", 1.0},
          {"B -> 0", 1.0},        {"0 -> C", 41774.858},    {"C -> 0", 1.0},
          {"2A -> A+B", 2.5081e-4}, {"A+B -> 2A", 7.3335e-3}, {"A+B -> A+C", 1.1614e-4},
          {"A+C -> A+B", 7.5610e-5}};
}

}  // namespace

TEST(Evaluate, RunningExampleOdes) {
  Network net = parse_network(kRunning);
  std::map<std::string, double> k = {{"0 -> A", 1.1}, {"A -> 0", 1.2},     {"0 -> B", 1.3},     {"B -> 0", 1.4},
                                     {"0 -> C", 1.5}, {"C -> 0", 1.6},     {"2A -> A+B", 1.7},  {"A+B -> 2A", 1.8},
                                     {"A+B -> A+C", 1.9}, {"A+C -> A+B", 2.0}};
  MassActionSystem sys = build_system(net, rates_by_text(net, k));
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd x = random_positive(rng, 3);
    const double a = x[*net.species_index("A")], b = x[*net.species_index("B")], c = x[*net.species_index("C")];
    const double fa = 1.1 - 1.2 * a - 1.7 * a * a + 1.8 * a * b;
    const double fb = 1.3 - 1.4 * b + 1.7 * a * a - 1.8 * a * b - 1.9 * a * b + 2.0 * a * c;
    const double fc = 1.5 - 1.6 * c + 1.9 * a * b - 2.0 * a * c;
    Eigen::VectorXd f = sys.evaluate(x);
    EXPECT_NEAR(f[*net.species_index("A")], fa, 1e-12);
    EXPECT_NEAR(f[*net.species_index("B")], fb, 1e-12);
    EXPECT_NEAR(f[*net.species_index("C")], fc, 1e-12);
  }
}

TEST(Evaluate, SmallCases) {
  Network in = parse_network("0 -> A");
  EXPECT_DOUBLE_EQ(build_system(in, RateAssignment::uniform(in, 2.0)).evaluate(Eigen::VectorXd::Constant(1, 5.0))[0], 2.0);
  Network cancel = parse_network("A -> 2A; A -> 0");
  MassActionSystem sys = build_system(cancel, RateAssignment::uniform(cancel));
  for (double a : {0.0, 0.5, 7.0}) EXPECT_DOUBLE_EQ(sys.evaluate(Eigen::VectorXd::Constant(1, a))[0], 0.0);
  Eigen::MatrixXd j = build_system(parse_network("0 <-> A"), RateAssignment::uniform(parse_network("0 <-> A")))
                          .jacobian(Eigen::VectorXd::Constant(1, 3.0));
  EXPECT_DOUBLE_EQ(j(0, 0), -1.0);
}

TEST(Evaluate, ZeroToTheZeroIsOne) {
  Network net = parse_network("A+B -> 2B; 0 -> A");
  MassActionSystem sys = build_system(net, RateAssignment::uniform(net));
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2);
  EXPECT_EQ(sys.evaluate(x), oracle_f(net, sys.rates(), x));
  Eigen::MatrixXd j = sys.jacobian(x);
  EXPECT_TRUE(j.allFinite());
}

TEST(Evaluate, MatchesTermByTermOracle) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> k(0.1, 10.0);
  for (int t = 0; t < 300; ++t) {
    Network net = crn::testing::random_network(rng, 4, 6, 3);
    RateAssignment r;
    for (std::size_t j = 0; j < net.reaction_count(); ++j) r.values.push_back(k(rng));
    MassActionSystem sys = build_system(net, r);
    Eigen::VectorXd x = random_positive(rng, net.species_count());
    ASSERT_LT((sys.evaluate(x) - oracle_f(net, r, x)).lpNorm<Eigen::Infinity>(), 1e-10);
  }
}

TEST(Jacobian, MatchesCentralDifferences) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> k(0.1, 10.0);
  for (int t = 0; t < 300; ++t) {
    Network net = crn::testing::random_network(rng, 4, 6, 3);
    RateAssignment r;
    for (std::size_t j = 0; j < net.reaction_count(); ++j) r.values.push_back(k(rng));
    MassActionSystem sys = build_system(net, r);
    Eigen::VectorXd x = random_positive(rng, net.species_count(), 0.5, 2.0);
    Eigen::MatrixXd j = sys.jacobian(x);
    for (std::size_t c = 0; c < net.species_count(); ++c) {
      const double h = 1e-6 * x[c];
      Eigen::VectorXd xp = x, xm = x;
      xp[c] += h;
      xm[c] -= h;
      Eigen::VectorXd fd = (sys.evaluate(xp) - sys.evaluate(xm)) / (2 * h);
      const double scale = std::max(1.0, j.col(c).lpNorm<Eigen::Infinity>());
      ASSERT_LT((fd - j.col(c)).lpNorm<Eigen::Infinity>() / scale, 1e-6);
    }
  }
}

TEST(Rates, FromMapRequiresEveryReaction) {
  Network net = parse_network("0 <-> A");
  std::map<Reaction, double> partial{{net.reaction(0), 1.0}};
  EXPECT_THROW(RateAssignment::from_map(net, partial), PreconditionError);
}

TEST(SteadyStates, LinearInflowOutflow) {
  Network net = parse_network("0 -> A; A -> 0");
  MassActionSystem sys = build_system(net, rates_by_text(net, {{"0 -> A", 3.0}, {"A -> 0", 1.0}}));
  auto states = find_steady_states(sys);
  ASSERT_EQ(states.size(), 1u);
  EXPECT_NEAR(states[0].x[0], 3.0, 1e-9);
  EXPECT_TRUE(states[0].exponentially_stable);
}

TEST(SteadyStates, FlowPairEigenvalue) {
  Network net = parse_network("0 <-> A");
  MassActionSystem sys = build_system(net, RateAssignment::uniform(net));
  auto rep = classify_steady_state(sys, Eigen::VectorXd::Ones(1));
  EXPECT_TRUE(rep.nondegenerate);
  EXPECT_TRUE(rep.exponentially_stable);
  ASSERT_EQ(rep.eigenvalues.size(), 1u);
  EXPECT_NEAR(rep.eigenvalues[0].real(), -1.0, 1e-12);
}

TEST(SteadyStates, ClosedFormOfSecondLiftingExample) {
  Network net = parse_network("0 <-> A; 3A <-> 2A+B");
  MassActionSystem sys = build_system(
      net, rates_by_text(net, {{"0 -> A", 1.0}, {"A -> 0", 2.0}, {"3A -> 2A+B", 3.0}, {"2A+B -> 3A", 4.0}}));
  Eigen::VectorXd expected(2);
  expected << 0.5, 0.375;
  EXPECT_LT(sys.evaluate(expected).lpNorm<Eigen::Infinity>(), 1e-15);
  auto states = find_steady_states(sys);
  ASSERT_EQ(states.size(), 1u);
  EXPECT_LT((states[0].x - expected).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(SteadyStates, RunningExampleHasTwoNondegenerateStates) {
  Network net = parse_network(kRunning);
  MassActionSystem sys = build_system(net, rates_by_text(net, example_rates()));
  const Eigen::Vector3d p1(63.143335, 136.35902, 41577.356), p2(25473.839, 1007.5644, 15295.454);
  auto to_net = [&](const Eigen::Vector3d& abc) {
    Eigen::VectorXd x(3);
    x[*net.species_index("A")] = abc[0];
    x[*net.species_index("B")] = abc[1];
    x[*net.species_index("C")] = abc[2];
    return x;
  };
  SolverConfig cfg;
  cfg.extra_starts = {to_net(p1), to_net(p2)};
  auto states = find_steady_states(sys, cfg);
  for (const Eigen::Vector3d& p : {p1, p2}) {
    bool found = false;
    for (const auto& s : states) {
      if (log_distance(s.x, to_net(p)) < 1e-4) {
        found = true;
        EXPECT_TRUE(s.nondegenerate);
        EXPECT_LE(s.residual, 1e-10);
      }
    }
    EXPECT_TRUE(found);
  }
}

TEST(SteadyStates, DegenerateFamilyWhenRatesCoincide) {
  Network net = parse_network("B -> A; B -> C; A+C -> 2B");
  MassActionSystem sys = build_system(net, rates_by_text(net, {{"B -> A", 1.5}, {"B -> C", 1.5}, {"A+C -> 2B", 0.7}}));
  EXPECT_FALSE(sys.full_dimensional());
  std::mt19937_64 rng(5);
  std::size_t seen = 0;
  for (int t = 0; t < 5; ++t) {
    SolverConfig cfg;
    cfg.starts = 40;
    cfg.seed = t;
    cfg.class_point = random_positive(rng, 3);
    for (const auto& s : find_steady_states(sys, cfg)) {
      ++seen;
      EXPECT_FALSE(s.nondegenerate) << s.x.transpose();
      EXPECT_LT(s.degeneracy_margin, 1e-8);
    }
  }
  EXPECT_GT(seen, 0u);

  // Unequal rates give nondegenerate states.
  MassActionSystem other =
      build_system(net, rates_by_text(net, {{"B -> A", 1.0}, {"B -> C", 2.0}, {"A+C -> 2B", 0.7}}));
  for (const auto& s : find_steady_states(other)) EXPECT_TRUE(s.nondegenerate);
}

TEST(SteadyStates, InvariantUnderRateScaling) {
  Network net = parse_network(kRunning);
  RateAssignment base = rates_by_text(net, example_rates());
  RateAssignment scaled = base;
  for (double& v : scaled.values) v *= 7.5;
  MassActionSystem a = build_system(net, base), b = build_system(net, scaled);
  SolverConfig cfg;
  cfg.seed = 11;
  for (const auto& s : find_steady_states(a, cfg)) {
    auto r = classify_steady_state(b, s.x);
    EXPECT_EQ(r.nondegenerate, s.nondegenerate);
    EXPECT_EQ(r.exponentially_stable, s.exponentially_stable);
  }
}

TEST(SteadyStates, DeterministicForASeed) {
  Network net = parse_network(kRunning);
  MassActionSystem sys = build_system(net, rates_by_text(net, example_rates()));
  SolverConfig cfg;
  cfg.seed = 99;
  cfg.starts = 60;
  auto a = find_steady_states(sys, cfg);
  cfg.threads = 3;
  auto b = find_steady_states(sys, cfg);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].x, b[i].x);
}

TEST(SteadyStates, EveryReportIsPositiveAndConsistent) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> k(0.1, 10.0);
  for (int t = 0; t < 40; ++t) {
    Network net = cfstr_closure(crn::testing::random_network(rng, 3, 3), true);
    RateAssignment r;
    for (std::size_t j = 0; j < net.reaction_count(); ++j) r.values.push_back(k(rng));
    SolverConfig cfg;
    cfg.starts = 30;
    for (const auto& s : find_steady_states(build_system(net, r), cfg)) {
      EXPECT_TRUE((s.x.array() > 0).all());
      EXPECT_LE(s.residual, 1e-10);
      if (s.exponentially_stable) {
        EXPECT_TRUE(s.nondegenerate);
      }
    }
  }
}

TEST(Classify, RefusesNonSteadyPoints) {
  Network net = parse_network("0 -> A; A -> 0");
  MassActionSystem sys = build_system(net, rates_by_text(net, {{"0 -> A", 3.0}, {"A -> 0", 1.0}}));
  EXPECT_THROW(classify_steady_state(sys, Eigen::VectorXd::Ones(1)), ResidualTooLarge);
}
