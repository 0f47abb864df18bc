#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace crn {

using Coeff = std::int64_t;
using SpeciesIndex = std::size_t;

/// Raised when an operation is called outside its documented domain.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A complex over a fixed species count, stored densely. Entry i is the
/// stoichiometric coefficient of species i; the zero complex is all zeros.
class Complex {
 public:
  Complex() = default;
  explicit Complex(std::size_t species_count) : coeffs_(species_count, 0) {}
  explicit Complex(std::vector<Coeff> coeffs);

  std::size_t size() const { return coeffs_.size(); }
  Coeff operator[](SpeciesIndex i) const { return coeffs_[i]; }
  Coeff& operator[](SpeciesIndex i) { return coeffs_[i]; }
  const std::vector<Coeff>& coeffs() const { return coeffs_; }

  Coeff molecularity() const;
  bool is_zero() const { return molecularity() == 0; }
  bool contains(SpeciesIndex i) const { return coeffs_[i] != 0; }

  auto operator<=>(const Complex&) const = default;
  bool operator==(const Complex&) const = default;

 private:
  std::vector<Coeff> coeffs_;
};

struct Reaction {
  Complex reactant;
  Complex product;

  std::vector<Coeff> vector() const;  // product - reactant
  Reaction reversed() const { return {product, reactant}; }
  bool is_trivial() const { return reactant == product; }
  /// Inflow 0 -> X or outflow X -> 0.
  bool is_flow() const;

  auto operator<=>(const Reaction&) const = default;
  bool operator==(const Reaction&) const = default;
};

/// Species set plus a duplicate-free set of non-trivial reactions. The
/// reactions are kept sorted by (reactant, product) coefficient vectors, so
/// reaction indices are stable for a given network value.
class Network {
 public:
  Network() = default;
  /// Validates: no trivial reaction, no duplicate, every species used.
  Network(std::vector<std::string> species, std::vector<Reaction> reactions);

  /// Species named "A", "B", ... by index.
  static Network with_default_names(std::size_t species_count,
                                    std::vector<Reaction> reactions);

  std::size_t species_count() const { return species_.size(); }
  std::size_t reaction_count() const { return reactions_.size(); }
  bool empty() const { return reactions_.empty(); }
  const std::vector<std::string>& species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  const Reaction& reaction(std::size_t k) const { return reactions_[k]; }

  std::optional<std::size_t> index_of(const Reaction& r) const;
  std::optional<SpeciesIndex> species_index(const std::string& name) const;
  bool contains(const Reaction& r) const { return index_of(r).has_value(); }

  /// Distinct complexes, sorted.
  std::vector<Complex> complexes() const;

  bool is_reversible() const;
  bool is_cfstr() const;
  bool is_fully_open() const;

  /// Reactions that are neither inflows nor outflows.
  std::vector<Reaction> non_flow_reactions() const;

  bool operator==(const Network&) const = default;

 private:
  std::vector<std::string> species_;
  std::vector<Reaction> reactions_;
};

std::string default_species_name(SpeciesIndex i);

Complex unit_complex(std::size_t species_count, SpeciesIndex i, Coeff c = 1);
Reaction inflow(std::size_t species_count, SpeciesIndex i);
Reaction outflow(std::size_t species_count, SpeciesIndex i);

/// Restriction to the complement of `removed`: species dropped from every
/// complex, trivial reactions dropped, duplicates merged, then any species
/// left without an occurrence dropped. Absent indices are ignored.
Network remove_species(const Network& net, std::span<const SpeciesIndex> removed);

/// The network induced by a subset of reactions; species and complexes are
/// restricted to those occurring in `keep`.
Network subnetwork(const Network& net, std::span<const Reaction> keep);

/// `subnetwork(net, keep_reactions)` followed by removal of every species
/// outside `keep_species`. Each kept species must occur in a kept reaction.
Network embedded_network(const Network& net, std::span<const SpeciesIndex> keep_species,
                         std::span<const Reaction> keep_reactions);

/// Relabel species: species i of `net` becomes species perm[i] of the result.
Network relabel(const Network& net, std::span<const SpeciesIndex> perm);

/// Adds X -> 0 for every species, and 0 -> X when `fully_open`.
Network cfstr_closure(const Network& net, bool fully_open = true);

/// Rank over Q of the reaction-vector matrix.
std::size_t stoich_subspace_dim(const Network& net);

/// Per-species total molecularity over reversible pairs. Throws
/// PreconditionError for a non-reversible network.
std::vector<Coeff> total_molecularities(const Network& net);
Coeff total_molecularity(const Network& net, SpeciesIndex x);
/// Weakly decreasing multiset of total molecularities.
std::vector<Coeff> tm_partition(const Network& net);

/// True when the reactions split into two nonempty classes with disjoint
/// species supports. The zero complex carries no species.
bool is_decoupled(const Network& net);

/// Canonical representative of the species-relabeling class.
struct CanonicalForm {
  std::vector<Coeff> code;

  auto operator<=>(const CanonicalForm&) const = default;
  bool operator==(const CanonicalForm&) const = default;
};

struct Canonicalization {
  CanonicalForm form;
  /// perm[i] = canonical index of species i.
  std::vector<SpeciesIndex> perm;
};

Canonicalization canonicalization(const Network& net);
CanonicalForm canonicalize(const Network& net);
/// The canonical relabeling with species named "A", "B", ... .
Network canonical_network(const Network& net);
bool equivalent(const Network& a, const Network& b);
/// A species map sigma with relabel(a, sigma) == b up to names, if any.
std::optional<std::vector<SpeciesIndex>> find_isomorphism(const Network& a, const Network& b);

/// Witness for `n` being an embedded network of `g`.
struct EmbeddingCertificate {
  /// species_map[i] = index in g of species i of n.
  std::vector<SpeciesIndex> species_map;
  /// Indices into g.reactions() whose restriction produces n.
  std::vector<std::size_t> reactions;
  /// For each reaction of n, the g reactions restricting onto it.
  std::vector<std::vector<std::size_t>> preimages;
};

/// Searches species/reaction subsets of `g` for one whose embedded network is
/// equivalent to `n`. Tries the name-preserving species map first.
std::optional<EmbeddingCertificate> find_embedding(const Network& n, const Network& g);
bool is_embedded_in(const Network& n, const Network& g);

/// Reaction restricted to the species flagged in `keep` (same length as the
/// reaction's complexes); indices are compacted in order.
Reaction restrict_reaction(const Reaction& r, const std::vector<bool>& keep);

}  // namespace crn
