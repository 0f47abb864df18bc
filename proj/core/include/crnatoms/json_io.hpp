#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "crnatoms/mass_action.hpp"
#include "crnatoms/multistat.hpp"
#include "crnatoms/network.hpp"

namespace crn {

class JsonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses `text` and reorders species to match `species` by name.
Network network_with_species(std::string_view text, const std::vector<std::string>& species);

/// One-line JSON object:
///   {network_id, network, species, reactions, rates, states, reports,
///    seed, budget, sample, provenance}
/// `rates` is aligned with `reactions`; `states` and report vectors with
/// `species`. Doubles are written with round-trip precision.
std::string witness_to_json(const Witness& w);
Witness witness_from_json(std::string_view text);

std::string report_to_json(const SteadyStateReport& r);

/// Reads a JSON-lines witness store; blank lines are skipped.
std::vector<Witness> read_witness_store(const std::string& path);
void append_witness(const std::string& path, const Witness& w);

}  // namespace crn
