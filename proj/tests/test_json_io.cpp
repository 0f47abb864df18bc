#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include <json.hpp>

#include "crnatoms/json_io.hpp"
#include "crnatoms/parser.hpp"

using namespace crn;

namespace {

Witness sample_witness() {
  Network net = cfstr_closure(parse_network("A -> 2A; A+B -> 0"), true);
  SearchConfig cfg;
  cfg.seed = 2;
  auto w = search_witness(net, cfg);
  if (!w) throw std::runtime_error("no witness");
  return *w;
}

}  // namespace

TEST(NetworkWithSpecies, FollowsTheGivenOrder) {
  Network n = network_with_species("A+B -> 2B; 0 <-> C", {"C", "B", "A"});
  EXPECT_EQ(n.species(), (std::vector<std::string>{"C", "B", "A"}));
  EXPECT_TRUE(same_named_network(n, parse_network("A+B -> 2B; 0 <-> C")));
  EXPECT_THROW(network_with_species("A -> B", {"A"}), JsonError);
  EXPECT_THROW(network_with_species("A -> B", {"A", "C"}), JsonError);
}

TEST(WitnessJson, RoundTripIsExact) {
  Witness w = sample_witness();
  Witness back = witness_from_json(witness_to_json(w));
  EXPECT_EQ(back.network, w.network);
  EXPECT_EQ(back.network_id, w.network_id);
  EXPECT_EQ(back.rates.values, w.rates.values);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(back.state(i), w.state(i));
    EXPECT_EQ(back.reports[i].residual, w.reports[i].residual);
    EXPECT_EQ(back.reports[i].eigenvalues, w.reports[i].eigenvalues);
    EXPECT_EQ(back.reports[i].nondegenerate, w.reports[i].nondegenerate);
    EXPECT_EQ(back.reports[i].exponentially_stable, w.reports[i].exponentially_stable);
  }
  EXPECT_EQ(back.seed, w.seed);
  EXPECT_EQ(back.sample, w.sample);
  EXPECT_EQ(back.provenance, w.provenance);
  EXPECT_EQ(witness_to_json(back), witness_to_json(w));
}

TEST(WitnessJson, RatesAlignByReactionText) {
  Witness w = sample_witness();
  auto j = nlohmann::json::parse(witness_to_json(w));
  auto reactions = j["reactions"];
  auto rates = j["rates"];
  std::reverse(reactions.begin(), reactions.end());
  std::reverse(rates.begin(), rates.end());
  j["reactions"] = reactions;
  j["rates"] = rates;
  EXPECT_EQ(witness_from_json(j.dump()).rates.values, w.rates.values);
}

TEST(WitnessJson, Schema) {
  auto j = nlohmann::json::parse(witness_to_json(sample_witness()));
  for (const char* key : {"network_id", "network", "species", "reactions", "rates", "states", "reports", "seed",
                          "budget", "sample", "provenance"})
    EXPECT_TRUE(j.contains(key)) << key;
  for (const char* key : {"x", "residual", "det", "eigenvalues", "nondegenerate", "stable"})
    EXPECT_TRUE(j["reports"][0].contains(key)) << key;
}

TEST(WitnessJson, Errors) {
  EXPECT_THROW(witness_from_json("{"), JsonError);
  EXPECT_THROW(witness_from_json("{}"), JsonError);
  auto j = nlohmann::json::parse(witness_to_json(sample_witness()));
  j["states"].erase(1);
  EXPECT_THROW(witness_from_json(j.dump()), JsonError);
  j = nlohmann::json::parse(witness_to_json(sample_witness()));
  j["rates"].erase(0);
  EXPECT_THROW(witness_from_json(j.dump()), JsonError);
}

TEST(WitnessStore, AppendAndRead) {
  auto path = (std::filesystem::temp_directory_path() / "crnatoms_store_test.jsonl").string();
  std::remove(path.c_str());
  Witness w = sample_witness();
  append_witness(path, w);
  append_witness(path, w);
  auto all = read_witness_store(path);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[1].rates.values, w.rates.values);
  std::remove(path.c_str());
  EXPECT_THROW(read_witness_store(path), JsonError);
}

TEST(ReportJson, Fields) {
  Network net = parse_network("0 <-> A");
  auto rep = classify_steady_state(build_system(net, RateAssignment::uniform(net)), Eigen::VectorXd::Ones(1));
  auto j = nlohmann::json::parse(report_to_json(rep));
  EXPECT_EQ(j["x"][0].get<double>(), 1.0);
  EXPECT_EQ(j["eigenvalues"][0][0].get<double>(), -1.0);
  EXPECT_TRUE(j["stable"].get<bool>());
}
