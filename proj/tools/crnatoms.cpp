// crnatoms command-line front end.
//
// Exit codes: 0 success, 1 usage, 2 input error, 3 analysis failure.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "crnatoms/atlas.hpp"
#include "crnatoms/enumerator.hpp"
#include "crnatoms/injectivity.hpp"
#include "crnatoms/json_io.hpp"
#include "crnatoms/multistat.hpp"
#include "crnatoms/network.hpp"
#include "crnatoms/parser.hpp"

#include <json.hpp>

namespace {

using namespace crn;

enum Exit { ok = 0, usage = 1, input_error = 2, analysis_failure = 3 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AnalysisFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Network read_network(const std::string& path) {
  const std::string text = read_text(path);
  try {
    return parse_network(text);
  } catch (const ParseError& e) {
    throw InputError(path + ": " + e.what());
  } catch (const PreconditionError& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string non_flow_text(const Network& net) {
  std::string out;
  for (const Reaction& r : net.non_flow_reactions()) out += (out.empty() ? "" : "; ") + reaction_text(net, r);
  return out.empty() ? "(none)" : out;
}

std::string partition_text(const std::vector<Coeff>& parts) {
  std::string s = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
  return s + ")";
}

std::string vector_text(const Eigen::VectorXd& x) {
  std::ostringstream out;
  out.precision(10);
  out << "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) out << (i ? ", " : "") << x[i];
  out << ")";
  return out.str();
}

// Banner with the effective configuration, on stderr so stdout stays clean.
void banner(const std::string& cmd, const std::vector<std::pair<std::string, std::string>>& cfg) {
  std::cerr << "# crnatoms " << cmd;
  for (const auto& [k, v] : cfg) std::cerr << " " << k << "=" << v;
  std::cerr << "\n";
}

int cmd_parse(const std::string& file) {
  Network net = read_network(file);
  banner("parse", {{"file", file}});
  std::cout << "network:   " << serialize_network(net) << "\n";
  std::cout << "canonical: " << serialize_network(canonical_network(net)) << "\n";
  std::cout << "id:        " << network_id(net) << "\n";
  std::cout << "species:   " << net.species_count() << "  reactions: " << net.reaction_count() << "\n";
  return ok;
}

int cmd_analyze(const std::string& file) {
  Network net = read_network(file);
  banner("analyze", {{"file", file}});
  Network cfstr = cfstr_closure(net, true);
  std::cout << "network:          " << serialize_network(net) << "\n";
  std::cout << "non-flow:         " << non_flow_text(net) << "\n";
  Network nf = [&] {
    try {
      return Network(net.species(), net.non_flow_reactions());
    } catch (const PreconditionError&) {
      return Network();
    }
  }();
  if (!nf.empty() && nf.is_reversible())
    std::cout << "tm partition:     " << partition_text(tm_partition(nf)) << "\n";
  else
    std::cout << "tm partition:     (undefined: non-flow part is not reversible)\n";
  std::cout << "stoich dimension: " << stoich_subspace_dim(net) << " of " << net.species_count() << "\n";
  std::cout << "decoupled:        " << (is_decoupled(net) ? "yes" : "no") << "\n";

  auto jc = jacobian_criterion(cfstr);
  std::cout << "jacobian criterion (fully open CFSTR): " << (jc.passes ? "passes" : "fails") << "  ("
            << jc.positive_terms.size() << " positive, " << jc.negative_terms.size() << " negative, "
            << jc.zero_terms_count << " zero terms)\n";
  if (!jc.passes) {
    auto subset = [&](const std::vector<std::size_t>& s) {
      std::string out = "{";
      for (std::size_t i = 0; i < s.size(); ++i) out += (i ? ", " : "") + reaction_text(cfstr, cfstr.reaction(s[i]));
      return out + "}";
    };
    std::cout << "  positive term:  " << subset(jc.positive_terms.front()) << "\n";
    std::cout << "  negative term:  " << subset(jc.negative_terms.front()) << "\n";
  }
  try {
    bool mss = one_reaction_multistationary(cfstr);
    std::cout << "one-reaction classification: " << (mss ? "multistationary" : "not multistationary") << "\n";
  } catch (const PreconditionError&) {
  }
  return ok;
}

int cmd_enumerate(int m, const std::string& partition, bool count_only) {
  banner("enumerate", {{"m", m ? std::to_string(m) : "all"}, {"partition", partition.empty() ? "all" : partition}});
  std::vector<EnumeratedNetwork> nets;
  if (!partition.empty()) {
    Partition p;
    std::string digits;
    for (char c : partition) {
      if (std::isdigit(static_cast<unsigned char>(c)))
        digits += c;
      else if (c != '(' && c != ')' && c != ',' && c != ' ')
        throw InputError("bad partition " + partition);
      else if (!digits.empty()) {
        p.parts.push_back(std::stoi(digits));
        digits.clear();
      }
    }
    if (!digits.empty()) p.parts.push_back(std::stoi(digits));
    std::sort(p.parts.rbegin(), p.parts.rend());
    if (p.parts.empty() || p.sum() > 8 || p.parts.back() < 1) throw InputError("bad partition " + partition);
    if (m && p.sum() != m) throw InputError("partition does not sum to --m");
    nets = enumerate_by_partition(p);
  } else {
    for (auto& e : enumerate_all())
      if (!m || e.m() == m) nets.push_back(std::move(e));
  }
  if (count_only) {
    std::size_t total = 0;
    for (int mm = 4; mm <= 8; ++mm) {
      if (m && mm != m) continue;
      auto v = partition_count_vector(nets, mm);
      std::size_t sum = 0;
      std::cout << "m=" << mm << " (";
      for (std::size_t i = 0; i < v.size(); ++i) {
        std::cout << (i ? "," : "") << v[i];
        sum += v[i];
      }
      std::cout << ") " << sum << "\n";
      total += sum;
    }
    std::cout << "total " << total << "\n";
    return ok;
  }
  for (const auto& e : nets)
    std::cout << nlohmann::json{{"id", e.id}, {"canonical_text", e.canonical_text}, {"partition", e.partition.to_string()}, {"m", e.m()}}
                     .dump()
              << "\n";
  return ok;
}

int cmd_search(const std::string& file, const SearchConfig& cfg, const std::string& out, bool close) {
  Network net = read_network(file);
  if (close) net = cfstr_closure(net, true);
  if (!net.is_cfstr()) throw InputError("not a CFSTR (every species needs X -> 0); pass --cfstr to close it");
  banner("search", {{"file", file},
                    {"seed", std::to_string(cfg.seed)},
                    {"budget", std::to_string(cfg.budget)},
                    {"threads", std::to_string(cfg.threads)},
                    {"out", out}});
  auto w = search_witness(net, cfg);
  if (!w) {
    std::cout << "no witness found within budget " << cfg.budget << " (this is not a proof of monostationarity)\n";
    return analysis_failure;
  }
  write_file(out, witness_to_json(*w) + "\n");
  std::cout << "witness (" << w->provenance << ", sample " << w->sample << ") for " << serialize_network(w->network)
            << "\n";
  for (std::size_t i = 0; i < 2; ++i)
    std::cout << "  x" << i + 1 << " = " << vector_text(w->state(i)) << "  margin " << w->reports[i].degeneracy_margin
              << (w->reports[i].exponentially_stable ? "  stable" : "  unstable") << "\n";
  std::cout << "written to " << out << "\n";
  return ok;
}

int cmd_lift(const std::string& witness_file, const std::string& target_file, const std::string& mode,
             const std::string& out) {
  Witness w;
  try {
    w = witness_from_json(read_text(witness_file));
  } catch (const JsonError& e) {
    throw InputError(witness_file + ": " + e.what());
  } catch (const ParseError& e) {
    throw InputError(witness_file + ": " + e.what());
  }
  Network g = read_network(target_file);
  banner("lift", {{"witness", witness_file}, {"target", target_file}, {"mode", mode}, {"out", out}});
  try {
    w = verify_witness(w.network, w);
  } catch (const WitnessError& e) {
    throw InputError(witness_file + ": witness does not verify: " + e.what());
  }
  LiftSchedule schedule;
  schedule.mode = mode == "embedded" ? LiftSchedule::Mode::embedded : LiftSchedule::Mode::subnetwork;
  LiftResult r;
  try {
    r = mode == "embedded" ? lift_embedded(w, g, schedule) : lift_subnetwork(w, g, schedule);
  } catch (const PreconditionError& e) {
    throw AnalysisFailure(e.what());
  } catch (const LiftError& e) {
    throw AnalysisFailure(e.what());
  }
  write_file(out, witness_to_json(r.witness) + "\n");
  std::cout << "lifted to " << serialize_network(r.witness.network) << " in " << r.path.size() << " steps\n";
  for (std::size_t i = 0; i < 2; ++i) std::cout << "  x" << i + 1 << " = " << vector_text(r.witness.state(i)) << "\n";
  std::cout << "written to " << out << "\n";
  return ok;
}

int cmd_atlas(const std::string& dir, const AtlasConfig& cfg) {
  banner("atlas", {{"out", dir},
                   {"seed", std::to_string(cfg.search.seed)},
                   {"budget", std::to_string(cfg.search.budget)},
                   {"threads", std::to_string(cfg.threads)}});
  std::filesystem::create_directories(dir);
  AtlasConfig local = cfg;
  local.checkpoint_dir = (std::filesystem::path(dir) / "checkpoints").string();
  AtlasReport report = run_pipeline(local);
  std::cout << census_summary(report);

  const auto path = [&](const char* name) { return (std::filesystem::path(dir) / name).string(); };
  write_file(path("report.json"), report_to_json(report));
  std::string store;
  for (const auto& r : report.records)
    if (r.witness) store += witness_to_json(*r.witness) + "\n";
  write_file(path("witnesses.jsonl"), store);

  auto minimal = minimal_mss_subnetworks(report.records, local);
  std::size_t two = 0, mixed = 0, lifted = 0;
  std::string minimal_store;
  std::vector<Network> nets;
  for (const auto& m : minimal) {
    (m.has_reversible_pair ? mixed : two) += 1;
    lifted += m.parent_witness ? 1 : 0;
    minimal_store += witness_to_json(m.witness) + "\n";
    nets.push_back(m.minimal);
  }
  write_file(path("minimal_witnesses.jsonl"), minimal_store);
  std::cout << "minimal sub-CFSTRs: " << minimal.size() << " (" << two << " two directed, " << mixed
            << " reversible plus directed); lifted back to parent: " << lifted << "\n";

  PosetGraph poset = build_poset(nets);
  write_file(path("poset.dot"), poset_to_dot(poset));
  write_file(path("poset.json"), poset_to_json(poset));
  const auto mins = poset.minimal_elements();
  std::cout << "poset: " << poset.nodes.size() << " nodes, " << poset.edges.size() << " edges, " << mins.size()
            << " atoms\n";
  for (std::size_t i : mins) std::cout << "  atom  " << poset.nodes[i].text << "\n";
  return lifted == minimal.size() ? ok : analysis_failure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chemical reaction network analysis: enumeration, Jacobian Criterion, multistationarity"};
  app.require_subcommand(1);
  std::size_t threads = 1;
  app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  std::string file, file2, mode = "sub", partition;
  std::string search_out = "witness.json", lift_out = "lifted.json", atlas_out = "atlas";
  int m = 0;
  bool count_only = false, close = false;
  SearchConfig search;
  AtlasConfig atlas;

  auto* parse = app.add_subcommand("parse", "validate a .crn file and print its canonical form");
  parse->add_option("file", file, ".crn file or -")->required();

  auto* analyze = app.add_subcommand("analyze", "TM partition, stoichiometric dimension, Jacobian Criterion");
  analyze->add_option("file", file, ".crn file or -")->required();

  auto* enumerate = app.add_subcommand("enumerate", "reversible bimolecular two-reaction networks as JSON lines");
  enumerate->add_option("--m", m, "total molecularity")->check(CLI::Range(4, 8));
  enumerate->add_option("--partition", partition, "e.g. \"(3,2,1)\"");
  enumerate->add_flag("--count-only", count_only, "print per-partition count vectors");

  auto* srch = app.add_subcommand("search", "search for a multistationarity witness");
  srch->add_option("file", file, ".crn file or -")->required();
  srch->add_option("--seed", search.seed, "master seed");
  srch->add_option("--budget", search.budget, "rate samples")->check(CLI::PositiveNumber);
  srch->add_option("--out", search_out, "witness JSON path")->capture_default_str();
  srch->add_flag("--cfstr", close, "search the fully open CFSTR closure");

  auto* lift = app.add_subcommand("lift", "lift a witness to a larger network");
  lift->add_option("witness", file, "witness JSON")->required();
  lift->add_option("target", file2, "target .crn file")->required();
  lift->add_option("--mode", mode, "sub or embedded")->check(CLI::IsMember({"sub", "embedded"}));
  lift->add_option("--out", lift_out, "lifted witness JSON path")->capture_default_str();

  auto* at = app.add_subcommand("atlas", "full classification pipeline");
  at->add_option("--out", atlas_out, "output directory")->capture_default_str();
  at->add_option("--seed", atlas.search.seed, "master seed");
  at->add_option("--budget", atlas.search.budget, "rate samples per network")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (*parse) return cmd_parse(file);
    if (*analyze) return cmd_analyze(file);
    if (*enumerate) return cmd_enumerate(m, partition, count_only);
    if (*srch) {
      search.threads = threads;
      return cmd_search(file, search, search_out, close);
    }
    if (*lift) return cmd_lift(file, file2, mode, lift_out);
    if (*at) {
      atlas.threads = threads;
      return cmd_atlas(atlas_out, atlas);
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input_error;
  } catch (const AnalysisFailure& e) {
    std::cerr << "analysis failed: " << e.what() << "\n";
    return analysis_failure;
  } catch (const std::exception& e) {
    std::cerr << "analysis failed: " << e.what() << "\n";
    return analysis_failure;
  }
  return usage;
}
