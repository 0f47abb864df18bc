#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnatoms/enumerator.hpp"
#include "crnatoms/multistat.hpp"
#include "crnatoms/network.hpp"

namespace crn {

enum class Classification { ruled_out_tm, ruled_out_jc, multistationary, no_witness_found };

/// "ruled-out-TM", "ruled-out-JC", "multistationary", "no-witness-found".
std::string to_string(Classification c);

struct AnalysisRecord {
  EnumeratedNetwork entry;  ///< non-flow reactions, canonical labeling
  Network cfstr;            ///< fully open closure of entry.network
  bool tm_all_le_2 = false;
  bool jc_passes = false;
  std::optional<Witness> witness;
  Classification classification = Classification::no_witness_found;
};

/// Counts in the layout of the census table.
struct CensusRow {
  std::size_t networks = 0;
  std::size_t tm_gt_2 = 0;
  std::size_t jc_fail = 0;
  std::size_t multistationary = 0;
};

struct AtlasConfig {
  SearchConfig search;
  std::size_t threads = 1;
  /// JSON-lines checkpoints are read from and appended to this directory
  /// when non-empty; entries are keyed by (network id, stage, seed, budget).
  std::string checkpoint_dir;
  /// Lift each minimal sub-CFSTR witness back to its parent.
  bool lift_to_parent = true;
  LiftSchedule lift;
};

struct AtlasReport {
  std::vector<AnalysisRecord> records;  ///< enumeration order
  std::map<int, std::vector<CensusRow>> by_partition;  ///< per m, in partitions(m) order
  std::map<int, CensusRow> by_m;
  CensusRow totals;
  std::uint64_t seed = 0;
  std::size_t budget = 0;
};

/// enumerate_all, then the TM filter, the Jacobian Criterion and the
/// witness search on the CFSTR closure of every network. The criterion is
/// evaluated on every network so that the TM bound can be cross-checked.
AtlasReport run_pipeline(const AtlasConfig& cfg = {});

/// Census rows recomputed from records.
void tally(AtlasReport& report);

class MinimalityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MinimalRecord {
  std::string parent_id;
  Network parent;   ///< fully open CFSTR of the reversible network
  Network minimal;  ///< fully open CFSTR of the minimal sub-CFSTR
  Witness witness;  ///< for `minimal`
  std::size_t non_flow_reactions = 0;  ///< directed non-flow reactions of `minimal`
  bool has_reversible_pair = false;
  std::vector<Network> multistationary_variants;  ///< closures, including `minimal`
  std::optional<Witness> parent_witness;          ///< lifted, when requested
  std::string lift_error;
};

/// The 8 proper sub-CFSTRs of a reversible two-pair network obtained by
/// making one or both pairs directed (closures, deterministic order).
std::vector<Network> directed_variants(const Network& reversible_non_flow);

/// For every multistationary record, searches its directed variants and
/// returns the one with fewest non-flow reactions. Throws MinimalityError
/// unless that variant is unique and a subnetwork of every multistationary
/// variant.
std::vector<MinimalRecord> minimal_mss_subnetworks(const std::vector<AnalysisRecord>& records,
                                                   const AtlasConfig& cfg = {});

/// Sum over the distinct complexes of the non-flow reactions of the
/// coefficient of `x` (or of all species when x is absent).
Coeff molecule_count(const Network& net, std::optional<SpeciesIndex> x = std::nullopt);

struct PosetNode {
  Network network;  ///< fully open CFSTR, canonical labeling
  std::string text;  ///< non-flow reactions
  std::string id;
  Coeff molecules = 0;
};

/// `from` is the embedded network of `to` obtained by removing `species`.
struct PosetEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  std::string species;  ///< name in `to`
  Coeff count = 0;      ///< molecules of that species in `to`

  std::string label() const { return species + "(" + std::to_string(count) + ")"; }
};

struct PosetGraph {
  std::vector<PosetNode> nodes;  ///< sorted by (molecules, text)
  std::vector<PosetEdge> edges;  ///< sorted by (from, to, species)

  /// Nodes with no incoming edge.
  std::vector<std::size_t> minimal_elements() const;
  std::optional<std::size_t> find(const Network& net) const;
};

/// Nodes are the given networks up to relabeling (closures taken);
/// an edge n -> g whenever removing one species of g gives n.
PosetGraph build_poset(const std::vector<Network>& nets);
std::vector<Network> atoms(const PosetGraph& poset);

/// Nodes reachable from `from` following edges backwards (toward atoms).
std::vector<std::size_t> atoms_below(const PosetGraph& poset, std::size_t from);

std::string poset_to_dot(const PosetGraph& poset);
std::string poset_to_json(const PosetGraph& poset);
std::string report_to_json(const AtlasReport& report);
/// Lines like "m=5  (1,4,7,8,10,9,2)  total 41" plus a totals line.
std::string census_summary(const AtlasReport& report);

/// Writes `content` to `path`; throws std::runtime_error if unwritable.
void write_file(const std::string& path, const std::string& content);

}  // namespace crn
