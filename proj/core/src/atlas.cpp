#include "crnatoms/atlas.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "crnatoms/injectivity.hpp"
#include "crnatoms/parallel.hpp"
#include "crnatoms/parser.hpp"
#include "json_detail.hpp"

namespace crn {

using nlohmann::json;

std::string to_string(Classification c) {
  switch (c) {
    case Classification::ruled_out_tm: return "ruled-out-TM";
    case Classification::ruled_out_jc: return "ruled-out-JC";
    case Classification::multistationary: return "multistationary";
    case Classification::no_witness_found: return "no-witness-found";
  }
  return "?";
}

namespace {

// Search results cached as JSON lines: {key, found, witness?}.
class Checkpoint {
 public:
  Checkpoint(const std::string& dir, const std::string& stage, std::uint64_t seed, std::size_t budget)
      : stage_(stage), seed_(seed), budget_(budget) {
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    path_ = (std::filesystem::path(dir) / (stage + ".jsonl")).string();
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        json j = json::parse(line);
        if (j.value("stage", "") != stage_ || j.value("seed", std::uint64_t{0}) != seed_ ||
            j.value("budget", std::size_t{0}) != budget_)
          continue;
        std::optional<Witness> w;
        if (j.value("found", false)) w = detail::witness_from(j.at("witness"));
        cache_[j.at("network_id").get<std::string>()] = std::move(w);
      } catch (const std::exception&) {
        // A truncated last line from an interrupted run is simply redone.
      }
    }
  }

  std::optional<std::optional<Witness>> lookup(const std::string& id) const {
    auto it = cache_.find(id);
    if (it == cache_.end()) return std::nullopt;
    return it->second;
  }

  void store(const std::string& id, const std::optional<Witness>& w) {
    if (path_.empty()) return;
    json j = {{"network_id", id}, {"stage", stage_}, {"seed", seed_}, {"budget", budget_}, {"found", w.has_value()}};
    if (w) j["witness"] = detail::witness_json(*w);
    std::lock_guard<std::mutex> lock(mutex_);
    std::ofstream out(path_, std::ios::app);
    out << j.dump() << '\n';
  }

 private:
  std::string stage_, path_;
  std::uint64_t seed_;
  std::size_t budget_;
  std::map<std::string, std::optional<Witness>> cache_;
  std::mutex mutex_;
};

std::optional<Witness> cached_search(Checkpoint& cp, const Network& net, const SearchConfig& cfg) {
  const std::string id = network_id(net);
  if (auto hit = cp.lookup(id)) {
    if (!*hit) return std::nullopt;
    // Stored witnesses are re-verified against the network at hand but
    // returned as stored, so a resumed run reproduces the same report.
    try {
      Witness w = **hit;
      w.network = verify_witness(net, w, cfg.verify).network;
      return w;
    } catch (const std::exception&) {
    }
  }
  SearchConfig local = cfg;
  local.threads = 1;
  auto w = search_witness(net, local);
  cp.store(id, w);
  return w;
}

Network non_flow_part(const Network& net) { return Network(net.species(), net.non_flow_reactions()); }

}  // namespace

void tally(AtlasReport& report) {
  report.by_partition.clear();
  report.by_m.clear();
  report.totals = {};
  for (int m = 4; m <= 8; ++m) report.by_partition[m].resize(partitions(m).size());
  for (const auto& r : report.records) {
    const int m = r.entry.m();
    const auto parts = partitions(m);
    const auto pos = static_cast<std::size_t>(std::find(parts.begin(), parts.end(), r.entry.partition) - parts.begin());
    for (CensusRow* row : {&report.by_partition[m][pos], &report.by_m[m], &report.totals}) {
      row->networks += 1;
      row->tm_gt_2 += r.tm_all_le_2 ? 0 : 1;
      row->jc_fail += r.jc_passes ? 0 : 1;
      row->multistationary += r.classification == Classification::multistationary ? 1 : 0;
    }
  }
}

AtlasReport run_pipeline(const AtlasConfig& cfg) {
  AtlasReport report;
  report.seed = cfg.search.seed;
  report.budget = cfg.search.budget;
  for (auto& e : enumerate_all()) {
    AnalysisRecord r;
    r.cfstr = cfstr_closure(e.network, true);
    r.tm_all_le_2 = e.partition.max_part_at_most(2);
    r.jc_passes = jacobian_criterion(r.cfstr).passes;
    r.entry = std::move(e);
    report.records.push_back(std::move(r));
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < report.records.size(); ++i)
    if (!report.records[i].jc_passes) pending.push_back(i);
  Checkpoint cp(cfg.checkpoint_dir, "search", cfg.search.seed, cfg.search.budget);
  parallel_for(pending.size(), cfg.threads, [&](std::size_t j) {
    AnalysisRecord& r = report.records[pending[j]];
    r.witness = cached_search(cp, r.cfstr, cfg.search);
  });

  for (auto& r : report.records) {
    if (r.witness)
      r.classification = Classification::multistationary;
    else if (r.jc_passes)
      r.classification = r.tm_all_le_2 ? Classification::ruled_out_tm : Classification::ruled_out_jc;
    else
      r.classification = Classification::no_witness_found;
  }
  tally(report);
  return report;
}

std::vector<Network> directed_variants(const Network& reversible_non_flow) {
  std::vector<Reaction> rs = reversible_non_flow.non_flow_reactions();
  std::vector<std::pair<Reaction, Reaction>> pairs;
  std::vector<bool> used(rs.size(), false);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    if (used[i]) continue;
    auto it = std::find(rs.begin(), rs.end(), rs[i].reversed());
    if (it == rs.end()) throw PreconditionError("directed_variants: reaction without its reverse");
    used[i] = used[static_cast<std::size_t>(it - rs.begin())] = true;
    pairs.emplace_back(rs[i], *it);
  }
  if (pairs.size() != 2) throw PreconditionError("directed_variants: expected two reversible pairs");
  std::vector<Network> out;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a == 2 && b == 2) continue;
      std::vector<Reaction> keep;
      for (auto [choice, pair] : {std::pair{a, pairs[0]}, std::pair{b, pairs[1]}}) {
        if (choice != 1) keep.push_back(pair.first);
        if (choice != 0) keep.push_back(pair.second);
      }
      out.push_back(cfstr_closure(Network(reversible_non_flow.species(), keep), true));
    }
  return out;
}

std::vector<MinimalRecord> minimal_mss_subnetworks(const std::vector<AnalysisRecord>& records, const AtlasConfig& cfg) {
  std::vector<const AnalysisRecord*> parents;
  for (const auto& r : records)
    if (r.classification == Classification::multistationary) parents.push_back(&r);

  struct Job {
    std::size_t parent;
    Network variant;
    std::optional<Witness> witness;
  };
  std::vector<Job> jobs;
  for (std::size_t p = 0; p < parents.size(); ++p)
    for (auto& v : directed_variants(parents[p]->entry.network)) jobs.push_back({p, std::move(v), std::nullopt});

  Checkpoint cp(cfg.checkpoint_dir, "variants", cfg.search.seed, cfg.search.budget);
  parallel_for(jobs.size(), cfg.threads, [&](std::size_t j) {
    // Passing the criterion rules multistationarity out.
    if (jacobian_criterion(jobs[j].variant).passes) return;
    jobs[j].witness = cached_search(cp, jobs[j].variant, cfg.search);
  });

  std::vector<MinimalRecord> out(parents.size());
  for (std::size_t p = 0; p < parents.size(); ++p) {
    MinimalRecord& rec = out[p];
    rec.parent_id = parents[p]->entry.id;
    rec.parent = parents[p]->cfstr;
    std::vector<const Job*> mss;
    for (const auto& j : jobs)
      if (j.parent == p && j.witness) mss.push_back(&j);
    if (mss.empty())
      throw MinimalityError("no multistationary directed variant for " + parents[p]->entry.canonical_text);
    std::size_t fewest = SIZE_MAX;
    for (const Job* j : mss) fewest = std::min(fewest, j->variant.non_flow_reactions().size());
    std::vector<const Job*> smallest;
    for (const Job* j : mss)
      if (j->variant.non_flow_reactions().size() == fewest) smallest.push_back(j);
    if (smallest.size() != 1)
      throw MinimalityError(std::to_string(smallest.size()) + " minimal variants for " + parents[p]->entry.canonical_text);
    const Job& best = *smallest.front();
    for (const Job* j : mss) {
      rec.multistationary_variants.push_back(j->variant);
      for (const Reaction& r : best.variant.non_flow_reactions())
        if (!j->variant.contains(r))
          throw MinimalityError("minimal variant is not below every multistationary variant of " +
                                parents[p]->entry.canonical_text);
    }
    rec.minimal = best.variant;
    rec.witness = *best.witness;
    const auto nf = rec.minimal.non_flow_reactions();
    rec.non_flow_reactions = nf.size();
    rec.has_reversible_pair = std::any_of(nf.begin(), nf.end(), [&](const Reaction& r) {
      return std::find(nf.begin(), nf.end(), r.reversed()) != nf.end();
    });
  }

  if (cfg.lift_to_parent) {
    parallel_for(out.size(), cfg.threads, [&](std::size_t p) {
      try {
        out[p].parent_witness = lift_subnetwork(out[p].witness, out[p].parent, cfg.lift).witness;
      } catch (const std::exception& e) {
        out[p].lift_error = e.what();
      }
    });
  }
  return out;
}

Coeff molecule_count(const Network& net, std::optional<SpeciesIndex> x) {
  std::set<Complex> complexes;
  for (const Reaction& r : net.non_flow_reactions()) {
    complexes.insert(r.reactant);
    complexes.insert(r.product);
  }
  Coeff total = 0;
  for (const Complex& c : complexes) total += x ? c[*x] : c.molecularity();
  return total;
}

std::vector<std::size_t> PosetGraph::minimal_elements() const {
  std::vector<bool> incoming(nodes.size(), false);
  for (const auto& e : edges) incoming[e.to] = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!incoming[i]) out.push_back(i);
  return out;
}

std::optional<std::size_t> PosetGraph::find(const Network& net) const {
  const CanonicalForm form = canonicalize(cfstr_closure(net, true));
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (canonicalize(nodes[i].network) == form) return i;
  return std::nullopt;
}

PosetGraph build_poset(const std::vector<Network>& nets) {
  PosetGraph g;
  std::set<CanonicalForm> seen;
  for (const Network& n : nets) {
    Network closed = canonical_network(cfstr_closure(n, true));
    if (!seen.insert(canonicalize(closed)).second) continue;
    PosetNode node;
    node.text = serialize_network(non_flow_part(closed));
    node.id = network_id(closed);
    node.molecules = molecule_count(closed);
    node.network = std::move(closed);
    g.nodes.push_back(std::move(node));
  }
  std::sort(g.nodes.begin(), g.nodes.end(), [](const PosetNode& a, const PosetNode& b) {
    return std::tie(a.molecules, a.text) < std::tie(b.molecules, b.text);
  });
  std::map<CanonicalForm, std::size_t> index;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) index[canonicalize(g.nodes[i].network)] = i;

  for (std::size_t to = 0; to < g.nodes.size(); ++to) {
    const Network& big = g.nodes[to].network;
    for (SpeciesIndex x = 0; x < big.species_count(); ++x) {
      const SpeciesIndex removed[] = {x};
      Network small = remove_species(big, removed);
      if (small.empty()) continue;
      auto it = index.find(canonicalize(cfstr_closure(small, true)));
      if (it == index.end() || it->second == to) continue;
      g.edges.push_back({it->second, to, big.species()[x], molecule_count(big, x)});
    }
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const PosetEdge& a, const PosetEdge& b) {
    return std::tie(a.from, a.to, a.species) < std::tie(b.from, b.to, b.species);
  });
  return g;
}

std::vector<Network> atoms(const PosetGraph& poset) {
  std::vector<Network> out;
  for (std::size_t i : poset.minimal_elements()) out.push_back(poset.nodes[i].network);
  return out;
}

std::vector<std::size_t> atoms_below(const PosetGraph& poset, std::size_t from) {
  std::vector<bool> seen(poset.nodes.size(), false);
  std::vector<std::size_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    std::size_t v = stack.back();
    stack.pop_back();
    for (const auto& e : poset.edges)
      if (e.to == v && !seen[e.from]) {
        seen[e.from] = true;
        stack.push_back(e.from);
      }
  }
  std::vector<std::size_t> out;
  for (std::size_t i : poset.minimal_elements())
    if (seen[i]) out.push_back(i);
  return out;
}

std::string poset_to_dot(const PosetGraph& poset) {
  std::ostringstream out;
  out << "digraph poset {\n";
  if (!poset.nodes.empty()) out << "  rankdir=BT;\n  node [shape=box, fontname=\"Helvetica\"];\n";
  const auto mins = poset.minimal_elements();
  std::map<Coeff, std::vector<std::size_t>> by_height;
  for (std::size_t i = 0; i < poset.nodes.size(); ++i) {
    const bool atom = std::binary_search(mins.begin(), mins.end(), i);
    out << "  n" << i << " [label=\"" << poset.nodes[i].text << "\"";
    if (atom) out << ", color=red, fontcolor=red, penwidth=2";
    out << "];\n";
    by_height[poset.nodes[i].molecules].push_back(i);
  }
  for (const auto& [h, ids] : by_height) {
    out << "  { rank=same;";
    for (std::size_t i : ids) out << " n" << i << ";";
    out << " }  // " << h << " molecules\n";
  }
  for (const auto& e : poset.edges)
    out << "  n" << e.from << " -> n" << e.to << " [label=\"" << e.label() << "\"];\n";
  out << "}\n";
  return out.str();
}

std::string poset_to_json(const PosetGraph& poset) {
  const auto mins = poset.minimal_elements();
  json nodes = json::array(), edges = json::array();
  for (std::size_t i = 0; i < poset.nodes.size(); ++i)
    nodes.push_back({{"index", i},
                     {"id", poset.nodes[i].id},
                     {"network", poset.nodes[i].text},
                     {"molecules", poset.nodes[i].molecules},
                     {"atom", std::binary_search(mins.begin(), mins.end(), i)}});
  for (const auto& e : poset.edges)
    edges.push_back({{"from", e.from}, {"to", e.to}, {"species", e.species}, {"count", e.count}, {"label", e.label()}});
  return json{{"nodes", nodes}, {"edges", edges}, {"atoms", mins}}.dump(2) + "\n";
}

namespace {

json row_json(const CensusRow& r) {
  return {{"networks", r.networks}, {"tm_gt_2", r.tm_gt_2}, {"jc_fail", r.jc_fail}, {"multistationary", r.multistationary}};
}

}  // namespace

std::string report_to_json(const AtlasReport& report) {
  json by_m = json::object(), by_partition = json::object();
  for (const auto& [m, row] : report.by_m) by_m[std::to_string(m)] = row_json(row);
  for (const auto& [m, rows] : report.by_partition) {
    json arr = json::array();
    const auto parts = partitions(m);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      json j = row_json(rows[i]);
      j["partition"] = parts[i].to_string();
      arr.push_back(j);
    }
    by_partition[std::to_string(m)] = arr;
  }
  json records = json::array();
  for (const auto& r : report.records) {
    json j = {{"network_id", r.entry.id},
              {"network", r.entry.canonical_text},
              {"tm_partition", r.entry.partition.to_string()},
              {"tm_all_le_2", r.tm_all_le_2},
              {"jc_passes", r.jc_passes},
              {"classification", to_string(r.classification)}};
    if (r.witness) j["witness"] = detail::witness_json(*r.witness);
    records.push_back(j);
  }
  return json{{"seed", report.seed},
              {"budget", report.budget},
              {"totals", row_json(report.totals)},
              {"by_m", by_m},
              {"by_partition", by_partition},
              {"records", records}}
             .dump(2) +
         "\n";
}

std::string census_summary(const AtlasReport& report) {
  std::ostringstream out;
  auto vec = [](const std::vector<CensusRow>& rows, std::size_t CensusRow::*field) {
    std::string s = "(";
    for (std::size_t i = 0; i < rows.size(); ++i) s += (i ? "," : "") + std::to_string(rows[i].*field);
    return s + ")";
  };
  for (const auto& [m, rows] : report.by_partition) {
    const CensusRow& t = report.by_m.at(m);
    out << "m=" << m << "  networks " << vec(rows, &CensusRow::networks) << " = " << t.networks << "  TM>2 "
        << vec(rows, &CensusRow::tm_gt_2) << " = " << t.tm_gt_2 << "  JC fail " << vec(rows, &CensusRow::jc_fail)
        << " = " << t.jc_fail << "  MSS " << vec(rows, &CensusRow::multistationary) << " = " << t.multistationary
        << "\n";
  }
  out << "total  networks " << report.totals.networks << "  TM>2 " << report.totals.tm_gt_2 << "  JC fail "
      << report.totals.jc_fail << "  MSS " << report.totals.multistationary << "\n";
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace crn
