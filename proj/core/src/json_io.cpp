#include "crnatoms/json_io.hpp"

#include <algorithm>
#include <fstream>

#include "crnatoms/enumerator.hpp"
#include "crnatoms/parser.hpp"
#include "json_detail.hpp"

namespace crn {

using nlohmann::json;

Network network_with_species(std::string_view text, const std::vector<std::string>& species) {
  Network parsed = parse_network(text);
  if (parsed.species_count() != species.size()) throw JsonError("species list does not match the network");
  std::vector<SpeciesIndex> perm(species.size());
  for (std::size_t i = 0; i < species.size(); ++i) {
    auto it = std::find(species.begin(), species.end(), parsed.species()[i]);
    if (it == species.end()) throw JsonError("unknown species " + parsed.species()[i]);
    perm[i] = static_cast<SpeciesIndex>(it - species.begin());
  }
  return relabel(parsed, perm);
}

namespace detail {

json report_json(const SteadyStateReport& r) {
  json eig = json::array();
  for (const auto& l : r.eigenvalues) eig.push_back({l.real(), l.imag()});
  return {{"x", std::vector<double>(r.x.data(), r.x.data() + r.x.size())},
          {"residual", r.residual},
          {"det", r.jacobian_det},
          {"margin", r.degeneracy_margin},
          {"eigenvalues", eig},
          {"nondegenerate", r.nondegenerate},
          {"stable", r.exponentially_stable}};
}

SteadyStateReport report_from(const json& j) {
  SteadyStateReport r;
  auto x = j.at("x").get<std::vector<double>>();
  r.x = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  r.residual = j.value("residual", 0.0);
  r.jacobian_det = j.value("det", 0.0);
  r.degeneracy_margin = j.value("margin", 0.0);
  if (j.contains("eigenvalues"))
    for (const auto& e : j.at("eigenvalues")) r.eigenvalues.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  r.nondegenerate = j.value("nondegenerate", false);
  r.exponentially_stable = j.value("stable", false);
  return r;
}

json witness_json(const Witness& w) {
  json reactions = json::array();
  for (const Reaction& r : w.network.reactions()) reactions.push_back(reaction_text(w.network, r));
  json states = json::array(), reports = json::array();
  for (const auto& rep : w.reports) {
    states.push_back(std::vector<double>(rep.x.data(), rep.x.data() + rep.x.size()));
    reports.push_back(report_json(rep));
  }
  return {{"network_id", w.network_id.empty() ? network_id(w.network) : w.network_id},
          {"network", serialize_network(w.network)},
          {"species", w.network.species()},
          {"reactions", reactions},
          {"rates", w.rates.values},
          {"states", states},
          {"reports", reports},
          {"seed", w.seed},
          {"budget", w.budget},
          {"sample", w.sample},
          {"provenance", w.provenance}};
}

Witness witness_from(const json& j) {
  Witness w;
  w.network = network_with_species(j.at("network").get<std::string>(), j.at("species").get<std::vector<std::string>>());
  w.network_id = j.value("network_id", network_id(w.network));
  auto rates = j.at("rates").get<std::vector<double>>();
  if (rates.size() != w.network.reaction_count()) throw JsonError("rates do not match the reactions");
  if (j.contains("reactions")) {
    // Align by reaction text in case the stored order differs.
    auto texts = j.at("reactions").get<std::vector<std::string>>();
    if (texts.size() != rates.size()) throw JsonError("reactions and rates differ in length");
    std::vector<double> aligned(rates.size(), -1.0);
    for (std::size_t k = 0; k < w.network.reaction_count(); ++k) {
      auto it = std::find(texts.begin(), texts.end(), reaction_text(w.network, w.network.reaction(k)));
      if (it == texts.end()) throw JsonError("reaction list does not match the network");
      aligned[k] = rates[static_cast<std::size_t>(it - texts.begin())];
    }
    rates = std::move(aligned);
  }
  w.rates.values = std::move(rates);
  const auto& states = j.at("states");
  if (states.size() != 2) throw JsonError("a witness needs exactly two states");
  for (std::size_t i = 0; i < 2; ++i) {
    if (j.contains("reports")) w.reports[i] = report_from(j.at("reports").at(i));
    auto x = states.at(i).get<std::vector<double>>();
    if (x.size() != w.network.species_count()) throw JsonError("state length does not match the species");
    w.reports[i].x = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  }
  w.seed = j.value("seed", std::uint64_t{0});
  w.budget = j.value("budget", std::size_t{0});
  w.sample = j.value("sample", std::size_t{0});
  w.provenance = j.value("provenance", std::string("search"));
  return w;
}

}  // namespace detail

std::string witness_to_json(const Witness& w) { return detail::witness_json(w).dump(); }

Witness witness_from_json(std::string_view text) {
  try {
    return detail::witness_from(json::parse(text));
  } catch (const json::exception& e) {
    throw JsonError(std::string("witness JSON: ") + e.what());
  }
}

std::string report_to_json(const SteadyStateReport& r) { return detail::report_json(r).dump(); }

std::vector<Witness> read_witness_store(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw JsonError("cannot open " + path);
  std::vector<Witness> out;
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) out.push_back(witness_from_json(line));
  return out;
}

void append_witness(const std::string& path, const Witness& w) {
  std::ofstream out(path, std::ios::app);
  if (!out) throw JsonError("cannot write " + path);
  out << witness_to_json(w) << '\n';
}

}  // namespace crn
