#pragma once

#include <compare>
#include <string>
#include <vector>

#include "crnatoms/network.hpp"

namespace crn {

/// Integer partition with parts in weakly decreasing order.
struct Partition {
  std::vector<int> parts;

  int sum() const;
  std::string to_string() const;  // "(5,2,1)"
  bool max_part_at_most(int bound) const;

  auto operator<=>(const Partition&) const = default;
  bool operator==(const Partition&) const = default;
};

/// Partitions of m in decreasing lexicographic order: (m), (m-1,1), ... .
std::vector<Partition> partitions(int m);

/// One enumerated reversible network, stored in canonical labeling.
struct EnumeratedNetwork {
  Network network;  ///< the four non-flow reactions, canonical species names
  Partition partition;
  std::string canonical_text;
  std::string id;

  int m() const { return partition.sum(); }
};

struct EnumerationOptions {
  /// Drop networks whose reactions split into species-disjoint parts.
  /// Table counts of the reversible bimolecular two-reaction census include
  /// such networks, so the default keeps them.
  bool drop_decoupled = false;
};

/// Stable 64-bit FNV-1a of the canonical text, as 16 hex digits.
std::string network_id(const Network& net);

/// All reversible bimolecular two-reaction networks with the given total
/// molecularity partition, one per relabeling class, sorted by canonical
/// form. Requires p.sum() <= 8.
std::vector<EnumeratedNetwork> enumerate_by_partition(const Partition& p,
                                                      const EnumerationOptions& opts = {});

/// Union over m = 4..8, sorted by (m, partition order, canonical form).
std::vector<EnumeratedNetwork> enumerate_all(const EnumerationOptions& opts = {});

/// Per-partition counts for one m, in `partitions(m)` order.
std::vector<std::size_t> partition_count_vector(const std::vector<EnumeratedNetwork>& nets, int m);

}  // namespace crn
