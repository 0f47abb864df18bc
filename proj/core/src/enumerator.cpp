#include "crnatoms/enumerator.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <numeric>

#include "crnatoms/parser.hpp"

namespace crn {

int Partition::sum() const { return std::accumulate(parts.begin(), parts.end(), 0); }

std::string Partition::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(parts[i]);
  }
  return out + ")";
}

bool Partition::max_part_at_most(int bound) const {
  return std::all_of(parts.begin(), parts.end(), [&](int p) { return p <= bound; });
}

std::vector<Partition> partitions(int m) {
  if (m < 1) throw PreconditionError("partitions: m must be at least 1");
  std::vector<Partition> out;
  std::vector<int> current;
  auto recurse = [&](auto& self, int remaining, int max_part) -> void {
    if (remaining == 0) {
      out.push_back({current});
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      current.push_back(p);
      self(self, remaining - p, p);
      current.pop_back();
    }
  };
  recurse(recurse, m, m);
  return out;
}

std::string network_id(const Network& net) {
  std::string text = serialize_network(canonical_network(net));
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

constexpr std::size_t kSlots = 8;
using Filling = std::array<int, kSlots>;  // 0 = empty slot, i >= 1 = species i

Complex slot_complex(const Filling& f, std::size_t first, std::size_t species_count) {
  Complex c(species_count);
  for (std::size_t k = first; k < first + 2; ++k)
    if (f[k] > 0) c[f[k] - 1] += 1;
  return c;
}

bool flow_pair(const Complex& a, const Complex& b) {
  return (a.is_zero() && b.molecularity() == 1) || (b.is_zero() && a.molecularity() == 1);
}

// Fillings of the eight slots "[]+[] <-> []+[]   []+[] <-> []+[]" with the
// multiset {0^(8-m), 1^m1, 2^m2, ...}. Species with equal parts are
// interchangeable, so only fillings where they first appear in index order
// are produced.
template <typename Visit>
void for_each_filling(const Partition& p, Visit&& visit) {
  const std::size_t n = p.parts.size();
  std::vector<int> remaining(n + 1);
  remaining[0] = static_cast<int>(kSlots) - p.sum();
  for (std::size_t i = 0; i < n; ++i) remaining[i + 1] = p.parts[i];
  std::vector<bool> seen(n + 1, false);
  Filling f{};
  auto recurse = [&](auto& self, std::size_t slot) -> void {
    if (slot == kSlots) {
      visit(f);
      return;
    }
    for (std::size_t label = 0; label <= n; ++label) {
      if (remaining[label] == 0) continue;
      if (label >= 2 && !seen[label] && p.parts[label - 1] == p.parts[label - 2] && !seen[label - 1])
        continue;
      bool first = !seen[label];
      seen[label] = true;
      --remaining[label];
      f[slot] = static_cast<int>(label);
      self(self, slot + 1);
      ++remaining[label];
      if (first) seen[label] = false;
    }
  };
  recurse(recurse, 0);
}

}  // namespace

std::vector<EnumeratedNetwork> enumerate_by_partition(const Partition& p, const EnumerationOptions& opts) {
  if (p.sum() > static_cast<int>(kSlots)) throw PreconditionError("enumerate_by_partition: m must be <= 8");
  const std::size_t s = p.parts.size();
  std::map<CanonicalForm, Network> classes;
  for_each_filling(p, [&](const Filling& f) {
    Complex a = slot_complex(f, 0, s), b = slot_complex(f, 2, s);
    Complex c = slot_complex(f, 4, s), d = slot_complex(f, 6, s);
    if (a == b || c == d) return;                           // trivial reaction
    if (flow_pair(a, b) || flow_pair(c, d)) return;         // not a non-flow pair
    if ((a == c && b == d) || (a == d && b == c)) return;   // repeated reaction
    Network net = Network::with_default_names(s, {{a, b}, {b, a}, {c, d}, {d, c}});
    if (opts.drop_decoupled && is_decoupled(net)) return;
    auto form = canonicalize(net);
    if (!classes.contains(form)) classes.emplace(std::move(form), canonical_network(net));
  });
  std::vector<EnumeratedNetwork> out;
  for (auto& [form, net] : classes) {
    EnumeratedNetwork e{net, p, serialize_network(net), network_id(net)};
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<EnumeratedNetwork> enumerate_all(const EnumerationOptions& opts) {
  std::vector<EnumeratedNetwork> out;
  std::map<CanonicalForm, bool> seen;
  for (int m = 4; m <= 8; ++m) {
    for (const auto& p : partitions(m)) {
      for (auto& e : enumerate_by_partition(p, opts)) {
        if (!seen.emplace(canonicalize(e.network), true).second) continue;
        out.push_back(std::move(e));
      }
    }
  }
  return out;
}

std::vector<std::size_t> partition_count_vector(const std::vector<EnumeratedNetwork>& nets, int m) {
  auto parts = partitions(m);
  std::vector<std::size_t> counts(parts.size(), 0);
  for (const auto& e : nets) {
    if (e.m() != m) continue;
    auto it = std::find(parts.begin(), parts.end(), e.partition);
    if (it != parts.end()) ++counts[static_cast<std::size_t>(it - parts.begin())];
  }
  return counts;
}

}  // namespace crn
