#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "crnatoms/network.hpp"
#include "crnatoms/parser.hpp"

namespace crn::testing {

inline std::string fixture(const std::string& name) { return std::string(CRNATOMS_FIXTURES) + "/" + name; }

// Random complex of molecularity <= max_mol over s species.
inline Complex random_complex(std::mt19937_64& rng, std::size_t s, int max_mol = 2) {
  Complex c(s);
  std::uniform_int_distribution<int> mol(0, max_mol);
  std::uniform_int_distribution<std::size_t> pick(0, s - 1);
  const int n = mol(rng);
  for (int i = 0; i < n; ++i) c[pick(rng)] += 1;
  return c;
}

// Random well-formed network: species that end up unused are compacted away.
inline Network random_network(std::mt19937_64& rng, std::size_t s, std::size_t reactions, int max_mol = 2) {
  for (;;) {
    std::vector<Reaction> rs;
    for (std::size_t tries = 0; rs.size() < reactions && tries < 100; ++tries) {
      Reaction r{random_complex(rng, s, max_mol), random_complex(rng, s, max_mol)};
      if (r.is_trivial() || std::find(rs.begin(), rs.end(), r) != rs.end()) continue;
      rs.push_back(r);
    }
    std::vector<bool> used(s, false);
    for (const auto& r : rs)
      for (std::size_t i = 0; i < s; ++i) used[i] = used[i] || r.reactant[i] || r.product[i];
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < s; ++i)
      if (used[i]) keep.push_back(i);
    if (keep.empty()) continue;
    std::vector<Reaction> compact;
    for (const auto& r : rs) {
      Complex a(keep.size()), b(keep.size());
      for (std::size_t j = 0; j < keep.size(); ++j) {
        a[j] = r.reactant[keep[j]];
        b[j] = r.product[keep[j]];
      }
      compact.push_back({a, b});
    }
    return Network::with_default_names(keep.size(), compact);
  }
}

inline std::vector<SpeciesIndex> random_permutation(std::mt19937_64& rng, std::size_t s) {
  std::vector<SpeciesIndex> p(s);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// Sorted reaction list after relabeling by perm; the brute-force equivalence key.
inline std::vector<Reaction> relabeled_reactions(const Network& net, const std::vector<SpeciesIndex>& perm) {
  std::vector<Reaction> out;
  const std::size_t s = net.species_count();
  for (const auto& r : net.reactions()) {
    Complex a(s), b(s);
    for (std::size_t i = 0; i < s; ++i) {
      a[perm[i]] = r.reactant[i];
      b[perm[i]] = r.product[i];
    }
    out.push_back({a, b});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Equivalence by trying all s! relabelings.
inline bool brute_equivalent(const Network& a, const Network& b) {
  if (a.species_count() != b.species_count() || a.reaction_count() != b.reaction_count()) return false;
  std::vector<SpeciesIndex> perm(a.species_count());
  std::iota(perm.begin(), perm.end(), 0);
  auto target = b.reactions();
  std::sort(target.begin(), target.end());
  do {
    if (relabeled_reactions(a, perm) == target) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

}  // namespace crn::testing
