#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnatoms/mass_action.hpp"
#include "crnatoms/network.hpp"

namespace crn {

/// Closed-form test for a CFSTR with a single non-flow reaction
/// a.X -> b.X (true iff sum over {i : b_i > a_i} of a_i exceeds 1) or a
/// single reversible pair a.X <-> b.X (that, or the same sum taken in the
/// reverse direction). Throws PreconditionError for any other shape.
bool one_reaction_multistationary(const Network& net);

/// Rate constants plus two distinct nondegenerate positive steady states.
struct Witness {
  std::string network_id;
  Network network;
  RateAssignment rates;
  std::array<SteadyStateReport, 2> reports;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
  std::size_t sample = 0;             ///< index of the successful rate sample
  std::string provenance = "search";  ///< "search", "lift" or "replay"

  const Eigen::VectorXd& state(std::size_t i) const { return reports[i].x; }
};

struct VerifyConfig {
  double residual = 1e-12;   ///< scaled residual after refinement
  double distinct = 1e-6;    ///< minimum log-coordinate distance
  double degenerate = 1e-8;  ///< see Tolerances::degenerate
  double eigenvalue = 1e-9;
  int max_iterations = 100;
};

class WitnessError : public std::runtime_error {
 public:
  enum class Kind { diverged, merged, degenerate, nonpositive, incompatible, malformed };
  WitnessError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Newton-refines both states of `w` for `net` and checks positivity,
/// compatibility, distinctness and nondegeneracy. Returns the refined
/// witness; throws WitnessError otherwise.
Witness verify_witness(const Network& net, const Witness& w, const VerifyConfig& cfg = {});

struct SearchConfig {
  std::size_t budget = 500;  ///< rate samples
  std::uint64_t seed = 0;
  double rate_low = 1e-5;
  double rate_high = 1e5;
  /// Fully open CFSTRs: one candidate state is the all-ones vector, the
  /// other b = exp(v) with v uniform in [-L, L]^s and L log-uniform in
  /// [spread_low, spread_high]. For fixed b the non-flow rates come from a
  /// max-margin linear program and the flow rates are then solved for; if
  /// the margin is not above lp_margin, a local search over v runs for up
  /// to refine_steps steps within the same sample. The rate range above is
  /// used only by the generic sampler for other CFSTRs.
  double spread_low = 1e-2;
  double spread_high = 10.0;
  std::size_t refine_steps = 200;
  double lp_margin = 1e-9;
  SolverConfig solver;
  VerifyConfig verify;
  std::size_t threads = 1;
  bool replay = true;
};

/// Samples rate constants and returns the first verified witness by sample
/// index. An empty result only means none was found within the budget.
std::optional<Witness> search_witness(const Network& net, const SearchConfig& cfg = {});

/// Known two-state witnesses tried before sampling when `cfg.replay`.
std::optional<Witness> replay_witness(const Network& net, const VerifyConfig& cfg = {});

struct LiftSchedule {
  enum class Mode { subnetwork, embedded };
  Mode mode = Mode::subnetwork;
  std::size_t steps = 64;
  double initial = 1e-12;         ///< first nonzero homotopy parameter
  double kappa_dagger = 1e-6;     ///< extra-reaction rates, relative to geomean(kappa*)
  std::size_t max_halvings = 40;
  double target_delta = 1.0;
  std::size_t max_delta_halvings = 20;
  int newton_iterations = 100;
  double residual = 1e-10;
  VerifyConfig verify;
};

/// One accepted continuation step.
struct LiftStep {
  std::string stage;  ///< "lambda" or the restored species name
  double parameter = 0.0;
  std::array<double, 2> residual{};
  std::array<double, 2> margin{};
  std::array<double, 2> drift{};  ///< log distance to the previous point
  std::array<bool, 2> stable{};
};

struct LiftResult {
  Witness witness;
  std::vector<LiftStep> path;
  double kappa_dagger = 0.0;  ///< absolute value finally used (subnetwork stage)
};

class LiftError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FlowTypeMissing : public LiftError {
 public:
  using LiftError::LiftError;
};

/// Continues both states of `w` (a witness for a subnetwork of `g` with the
/// same stoichiometric subspace) to a verified witness of `g`, ramping the
/// extra reactions' rates from 0 to kappa_dagger.
LiftResult lift_subnetwork(const Witness& w, const Network& g, const LiftSchedule& schedule = {});

/// Restores the species of `g` missing from the witness network one at a
/// time (delta homotopy; requires a 0 <-> X or X <-> 2X pair in g for each),
/// then finishes with lift_subnetwork. Throws FlowTypeMissing when a
/// restored species has no such pair.
LiftResult lift_embedded(const Witness& w, const Network& g, const LiftSchedule& schedule = {});

}  // namespace crn
