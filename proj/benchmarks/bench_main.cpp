#include <benchmark/benchmark.h>

#include <map>

#include "crnatoms/enumerator.hpp"
#include "crnatoms/injectivity.hpp"
#include "crnatoms/mass_action.hpp"
#include "crnatoms/multistat.hpp"
#include "crnatoms/parser.hpp"

using namespace crn;

namespace {

const char* kRunning = "0 <-> A; 0 <-> B; 0 <-> C; 2A <-> A+B; A+B <-> A+C";

MassActionSystem running_system() {
  Network net = parse_network(kRunning);
  const std::map<std::string, double> k = {{"0 -> A", 1.0},          {"A -> 0", 1.0},         {"0 -> B", 1.0},
                                           {"B -> 0", 1.0},          {"0 -> C", 41774.858},   {"C -> 0", 1.0},
                                           {"2A -> A+B", 2.5081e-4}, {"A+B -> 2A", 7.3335e-3}, {"A+B -> A+C", 1.1614e-4},
                                           {"A+C -> A+B", 7.5610e-5}};
  RateAssignment r;
  for (const auto& rx : net.reactions()) r.values.push_back(k.at(reaction_text(net, rx)));
  return build_system(net, r);
}

}  // namespace

static void BM_Canonicalize(benchmark::State& state) {
  const std::vector<const char*> texts = {"2A <-> A+B; A+B <-> A+C", "A+B <-> C+D; C <-> E+F",
                                          "A+B <-> C+D; E+F <-> G+H"};
  Network net = parse_network(texts[static_cast<std::size_t>(state.range(0))]);
  for (auto _ : state) benchmark::DoNotOptimize(canonicalize(net));
  state.SetLabel(std::to_string(net.species_count()) + " species");
}
BENCHMARK(BM_Canonicalize)->DenseRange(0, 2);

static void BM_JacobianCriterion(benchmark::State& state) {
  Network net = cfstr_closure(parse_network("A+B <-> C+D; E+F <-> 2G"), true);
  for (auto _ : state) benchmark::DoNotOptimize(jacobian_criterion(net));
}
BENCHMARK(BM_JacobianCriterion);

static void BM_LeibnizOracle(benchmark::State& state) {
  Network net = cfstr_closure(parse_network("2A <-> A+B; A+B <-> A+C"), true);
  for (auto _ : state) benchmark::DoNotOptimize(leibniz_oracle(net));
}
BENCHMARK(BM_LeibnizOracle);

static void BM_EnumerateAll(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_all());
}
BENCHMARK(BM_EnumerateAll)->Unit(benchmark::kMillisecond);

static void BM_NewtonFromPrintedState(benchmark::State& state) {
  MassActionSystem sys = running_system();
  Eigen::VectorXd x0(3);
  x0 << 63.14, 136.4, 41577.0;
  for (auto _ : state) benchmark::DoNotOptimize(newton_steady_state(sys, x0, 100, 1e-10));
}
BENCHMARK(BM_NewtonFromPrintedState);

static void BM_FindSteadyStates(benchmark::State& state) {
  MassActionSystem sys = running_system();
  SolverConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(find_steady_states(sys, cfg));
}
BENCHMARK(BM_FindSteadyStates)->Unit(benchmark::kMillisecond);

static void BM_SearchWitness(benchmark::State& state) {
  Network net = cfstr_closure(parse_network("2B -> A; A -> A+B"), true);
  SearchConfig cfg;
  cfg.replay = false;
  for (auto _ : state) benchmark::DoNotOptimize(search_witness(net, cfg));
}
BENCHMARK(BM_SearchWitness)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
