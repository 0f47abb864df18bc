#include "crnatoms/network.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "crnatoms/exact.hpp"

namespace crn {

Complex::Complex(std::vector<Coeff> coeffs) : coeffs_(std::move(coeffs)) {
  for (Coeff c : coeffs_)
    if (c < 0) throw PreconditionError("complex coefficients must be nonnegative");
}

Coeff Complex::molecularity() const { return std::accumulate(coeffs_.begin(), coeffs_.end(), Coeff{0}); }

std::vector<Coeff> Reaction::vector() const {
  std::vector<Coeff> v(reactant.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = product[i] - reactant[i];
  return v;
}

bool Reaction::is_flow() const {
  return (reactant.is_zero() && product.molecularity() == 1) ||
         (product.is_zero() && reactant.molecularity() == 1);
}

std::string default_species_name(SpeciesIndex i) {
  if (i < 26) return std::string(1, static_cast<char>('A' + i));
  return "X" + std::to_string(i);
}

Network::Network(std::vector<std::string> species, std::vector<Reaction> reactions)
    : species_(std::move(species)), reactions_(std::move(reactions)) {
  const std::size_t s = species_.size();
  std::set<std::string> names(species_.begin(), species_.end());
  if (names.size() != s) throw PreconditionError("species names must be unique");
  for (const Reaction& r : reactions_) {
    if (r.reactant.size() != s || r.product.size() != s)
      throw PreconditionError("complex dimension does not match species count");
    if (r.is_trivial()) throw PreconditionError("trivial reaction (reactant equals product)");
  }
  std::sort(reactions_.begin(), reactions_.end());
  if (std::adjacent_find(reactions_.begin(), reactions_.end()) != reactions_.end())
    throw PreconditionError("duplicate reaction");
  std::vector<bool> used(s, false);
  for (const Reaction& r : reactions_)
    for (std::size_t i = 0; i < s; ++i)
      if (r.reactant[i] != 0 || r.product[i] != 0) used[i] = true;
  for (std::size_t i = 0; i < s; ++i)
    if (!used[i]) throw PreconditionError("species " + species_[i] + " occurs in no reaction");
}

Network Network::with_default_names(std::size_t species_count, std::vector<Reaction> reactions) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < species_count; ++i) names.push_back(default_species_name(i));
  return Network(std::move(names), std::move(reactions));
}

std::optional<std::size_t> Network::index_of(const Reaction& r) const {
  auto it = std::lower_bound(reactions_.begin(), reactions_.end(), r);
  if (it == reactions_.end() || *it != r) return std::nullopt;
  return static_cast<std::size_t>(it - reactions_.begin());
}

std::optional<SpeciesIndex> Network::species_index(const std::string& name) const {
  auto it = std::find(species_.begin(), species_.end(), name);
  if (it == species_.end()) return std::nullopt;
  return static_cast<SpeciesIndex>(it - species_.begin());
}

std::vector<Complex> Network::complexes() const {
  std::set<Complex> out;
  for (const Reaction& r : reactions_) {
    out.insert(r.reactant);
    out.insert(r.product);
  }
  return {out.begin(), out.end()};
}

bool Network::is_reversible() const {
  return std::all_of(reactions_.begin(), reactions_.end(),
                     [&](const Reaction& r) { return contains(r.reversed()); });
}

bool Network::is_cfstr() const {
  for (std::size_t i = 0; i < species_count(); ++i)
    if (!contains(outflow(species_count(), i))) return false;
  return true;
}

bool Network::is_fully_open() const {
  if (!is_cfstr()) return false;
  for (std::size_t i = 0; i < species_count(); ++i)
    if (!contains(inflow(species_count(), i))) return false;
  return true;
}

std::vector<Reaction> Network::non_flow_reactions() const {
  std::vector<Reaction> out;
  std::copy_if(reactions_.begin(), reactions_.end(), std::back_inserter(out),
               [](const Reaction& r) { return !r.is_flow(); });
  return out;
}

Complex unit_complex(std::size_t species_count, SpeciesIndex i, Coeff c) {
  Complex out(species_count);
  out[i] = c;
  return out;
}

Reaction inflow(std::size_t species_count, SpeciesIndex i) {
  return {Complex(species_count), unit_complex(species_count, i)};
}

Reaction outflow(std::size_t species_count, SpeciesIndex i) {
  return {unit_complex(species_count, i), Complex(species_count)};
}

Reaction restrict_reaction(const Reaction& r, const std::vector<bool>& keep) {
  std::vector<Coeff> a, b;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (!keep[i]) continue;
    a.push_back(r.reactant[i]);
    b.push_back(r.product[i]);
  }
  return {Complex(std::move(a)), Complex(std::move(b))};
}

namespace {

// Builds a well-formed network from reactions over `names`: drops trivial
// reactions, merges duplicates, then drops species that no longer occur.
Network compact(const std::vector<std::string>& names, std::vector<Reaction> reactions) {
  std::erase_if(reactions, [](const Reaction& r) { return r.is_trivial(); });
  std::sort(reactions.begin(), reactions.end());
  reactions.erase(std::unique(reactions.begin(), reactions.end()), reactions.end());
  std::vector<bool> used(names.size(), false);
  for (const Reaction& r : reactions)
    for (std::size_t i = 0; i < names.size(); ++i)
      if (r.reactant[i] != 0 || r.product[i] != 0) used[i] = true;
  std::vector<std::string> kept_names;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (used[i]) kept_names.push_back(names[i]);
  std::vector<Reaction> out;
  out.reserve(reactions.size());
  for (const Reaction& r : reactions) out.push_back(restrict_reaction(r, used));
  return Network(std::move(kept_names), std::move(out));
}

}  // namespace

Network remove_species(const Network& net, std::span<const SpeciesIndex> removed) {
  std::vector<bool> keep(net.species_count(), true);
  for (SpeciesIndex i : removed)
    if (i < keep.size()) keep[i] = false;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) names.push_back(net.species()[i]);
  std::vector<Reaction> restricted;
  for (const Reaction& r : net.reactions()) restricted.push_back(restrict_reaction(r, keep));
  return compact(names, std::move(restricted));
}

Network subnetwork(const Network& net, std::span<const Reaction> keep) {
  for (const Reaction& r : keep)
    if (!net.contains(r)) throw PreconditionError("subnetwork: reaction not in network");
  return compact(net.species(), {keep.begin(), keep.end()});
}

Network embedded_network(const Network& net, std::span<const SpeciesIndex> keep_species,
                         std::span<const Reaction> keep_reactions) {
  for (const Reaction& r : keep_reactions)
    if (!net.contains(r)) throw PreconditionError("embedded_network: reaction not in network");
  std::vector<bool> keep(net.species_count(), false);
  for (SpeciesIndex i : keep_species) {
    if (i >= keep.size()) throw PreconditionError("embedded_network: species index out of range");
    bool used = std::any_of(keep_reactions.begin(), keep_reactions.end(), [&](const Reaction& r) {
      return r.reactant[i] != 0 || r.product[i] != 0;
    });
    if (!used) throw PreconditionError("embedded_network: species " + net.species()[i] +
                                       " is not involved in the kept reactions");
    keep[i] = true;
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < keep.size(); ++i)
    if (keep[i]) names.push_back(net.species()[i]);
  std::vector<Reaction> restricted;
  for (const Reaction& r : keep_reactions) restricted.push_back(restrict_reaction(r, keep));
  return compact(names, std::move(restricted));
}

Network relabel(const Network& net, std::span<const SpeciesIndex> perm) {
  const std::size_t s = net.species_count();
  if (perm.size() != s) throw PreconditionError("relabel: permutation size mismatch");
  std::vector<std::string> names(s);
  for (std::size_t i = 0; i < s; ++i) names[perm[i]] = net.species()[i];
  std::vector<Reaction> out;
  for (const Reaction& r : net.reactions()) {
    Complex a(s), b(s);
    for (std::size_t i = 0; i < s; ++i) {
      a[perm[i]] = r.reactant[i];
      b[perm[i]] = r.product[i];
    }
    out.push_back({std::move(a), std::move(b)});
  }
  return Network(std::move(names), std::move(out));
}

Network cfstr_closure(const Network& net, bool fully_open) {
  const std::size_t s = net.species_count();
  std::vector<Reaction> reactions = net.reactions();
  for (std::size_t i = 0; i < s; ++i) {
    reactions.push_back(outflow(s, i));
    if (fully_open) reactions.push_back(inflow(s, i));
  }
  std::sort(reactions.begin(), reactions.end());
  reactions.erase(std::unique(reactions.begin(), reactions.end()), reactions.end());
  return Network(net.species(), std::move(reactions));
}

std::size_t stoich_subspace_dim(const Network& net) {
  IntMatrix m(net.reaction_count(), net.species_count());
  for (std::size_t k = 0; k < net.reaction_count(); ++k) {
    auto v = net.reaction(k).vector();
    for (std::size_t i = 0; i < v.size(); ++i) m(k, i) = v[i];
  }
  return exact_rank(std::move(m));
}

std::vector<Coeff> total_molecularities(const Network& net) {
  if (!net.is_reversible()) throw PreconditionError("total molecularity requires a reversible network");
  std::vector<Coeff> tm(net.species_count(), 0);
  for (const Reaction& r : net.reactions()) {
    // Count each reversible pair once, from its smaller orientation.
    if (!(r < r.reversed())) continue;
    for (std::size_t i = 0; i < tm.size(); ++i) tm[i] += r.reactant[i] + r.product[i];
  }
  return tm;
}

Coeff total_molecularity(const Network& net, SpeciesIndex x) {
  if (x >= net.species_count()) throw PreconditionError("total_molecularity: species out of range");
  return total_molecularities(net)[x];
}

std::vector<Coeff> tm_partition(const Network& net) {
  auto tm = total_molecularities(net);
  std::sort(tm.begin(), tm.end(), std::greater<>());
  return tm;
}

bool is_decoupled(const Network& net) {
  const std::size_t s = net.species_count();
  std::vector<std::size_t> parent(s);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const Reaction& r : net.reactions()) {
    std::optional<std::size_t> first;
    for (std::size_t i = 0; i < s; ++i) {
      if (r.reactant[i] == 0 && r.product[i] == 0) continue;
      if (!first) first = i;
      else parent[find(i)] = find(*first);
    }
  }
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < s; ++i) roots.insert(find(i));
  return roots.size() > 1;
}

namespace {

using Signature = std::vector<std::pair<Coeff, Coeff>>;

// Relabeling-invariant per-species signature: the multiset of
// (reactant, product) coefficient pairs over reactions involving it.
std::vector<Signature> species_signatures(const Network& net) {
  std::vector<Signature> sig(net.species_count());
  for (const Reaction& r : net.reactions())
    for (std::size_t i = 0; i < sig.size(); ++i)
      if (r.reactant[i] != 0 || r.product[i] != 0) sig[i].emplace_back(r.reactant[i], r.product[i]);
  for (auto& s : sig) std::sort(s.begin(), s.end());
  return sig;
}

std::vector<Coeff> encode(const Network& net, const std::vector<SpeciesIndex>& perm) {
  const std::size_t s = net.species_count();
  std::vector<std::vector<Coeff>> rows;
  rows.reserve(net.reaction_count());
  for (const Reaction& r : net.reactions()) {
    std::vector<Coeff> row(2 * s);
    for (std::size_t i = 0; i < s; ++i) {
      row[perm[i]] = r.reactant[i];
      row[s + perm[i]] = r.product[i];
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end());
  std::vector<Coeff> code{static_cast<Coeff>(s), static_cast<Coeff>(rows.size())};
  for (const auto& row : rows) code.insert(code.end(), row.begin(), row.end());
  return code;
}

}  // namespace

Canonicalization canonicalization(const Network& net) {
  const std::size_t s = net.species_count();
  auto sig = species_signatures(net);
  // Species are first ordered by signature; only relabelings that permute
  // species within equal-signature blocks are searched.
  std::vector<SpeciesIndex> order(s);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return sig[a] < sig[b]; });
  std::vector<std::pair<std::size_t, std::size_t>> blocks;  // [begin, end) in `order`
  for (std::size_t i = 0; i < s;) {
    std::size_t j = i + 1;
    while (j < s && sig[order[j]] == sig[order[i]]) ++j;
    blocks.emplace_back(i, j);
    i = j;
  }

  Canonicalization best;
  std::vector<SpeciesIndex> arrangement = order;
  std::vector<SpeciesIndex> perm(s);
  bool have = false;
  // Odometer over the product of per-block permutations.
  for (auto [b, e] : blocks) std::sort(arrangement.begin() + b, arrangement.begin() + e);
  while (true) {
    for (std::size_t pos = 0; pos < s; ++pos) perm[arrangement[pos]] = pos;
    auto code = encode(net, perm);
    if (!have || code < best.form.code) {
      best.form.code = std::move(code);
      best.perm = perm;
      have = true;
    }
    std::size_t k = 0;
    for (; k < blocks.size(); ++k) {
      auto [b, e] = blocks[k];
      if (std::next_permutation(arrangement.begin() + b, arrangement.begin() + e)) break;
    }
    if (k == blocks.size()) break;
  }
  if (!have) best.form.code = encode(net, perm);
  return best;
}

CanonicalForm canonicalize(const Network& net) { return canonicalization(net).form; }

Network canonical_network(const Network& net) {
  auto c = canonicalization(net);
  Network relabeled = relabel(net, c.perm);
  return Network::with_default_names(relabeled.species_count(), relabeled.reactions());
}

bool equivalent(const Network& a, const Network& b) { return canonicalize(a) == canonicalize(b); }

std::optional<std::vector<SpeciesIndex>> find_isomorphism(const Network& a, const Network& b) {
  auto ca = canonicalization(a);
  auto cb = canonicalization(b);
  if (ca.form != cb.form) return std::nullopt;
  std::vector<SpeciesIndex> inv_b(b.species_count());
  for (std::size_t j = 0; j < inv_b.size(); ++j) inv_b[cb.perm[j]] = j;
  std::vector<SpeciesIndex> sigma(a.species_count());
  for (std::size_t i = 0; i < sigma.size(); ++i) sigma[i] = inv_b[ca.perm[i]];
  return sigma;
}

namespace {

std::optional<EmbeddingCertificate> try_species_map(const Network& n, const Network& g,
                                                    const std::vector<SpeciesIndex>& map) {
  const std::size_t sg = g.species_count();
  std::vector<bool> keep(sg, false);
  for (SpeciesIndex j : map) keep[j] = true;
  // Position of each kept g species in the compacted coordinates.
  std::vector<std::size_t> pos(sg, 0);
  for (std::size_t j = 0, p = 0; j < sg; ++j)
    if (keep[j]) pos[j] = p++;
  std::vector<Reaction> restricted;
  for (const Reaction& r : g.reactions()) restricted.push_back(restrict_reaction(r, keep));

  EmbeddingCertificate cert;
  cert.species_map = map;
  std::set<std::size_t> chosen;
  const std::size_t sn = n.species_count();
  for (const Reaction& r : n.reactions()) {
    Complex a(sn), b(sn);
    for (std::size_t i = 0; i < sn; ++i) {
      a[pos[map[i]]] = r.reactant[i];
      b[pos[map[i]]] = r.product[i];
    }
    Reaction target{a, b};
    std::vector<std::size_t> pre;
    for (std::size_t k = 0; k < restricted.size(); ++k)
      if (restricted[k] == target) pre.push_back(k);
    if (pre.empty()) return std::nullopt;
    chosen.insert(pre.begin(), pre.end());
    cert.preimages.push_back(std::move(pre));
  }
  cert.reactions.assign(chosen.begin(), chosen.end());
  return cert;
}

}  // namespace

std::optional<EmbeddingCertificate> find_embedding(const Network& n, const Network& g) {
  const std::size_t sn = n.species_count();
  const std::size_t sg = g.species_count();
  if (n.empty() || sn > sg || n.reaction_count() > g.reaction_count()) return std::nullopt;

  std::vector<SpeciesIndex> by_name;
  for (const auto& name : n.species())
    if (auto j = g.species_index(name)) by_name.push_back(*j);
  if (by_name.size() == sn)
    if (auto cert = try_species_map(n, g, by_name)) return cert;

  // All injective maps, via ordered choices of sn of the sg species.
  std::vector<SpeciesIndex> map(sn);
  std::vector<bool> taken(sg, false);
  std::optional<EmbeddingCertificate> found;
  auto recurse = [&](auto& self, std::size_t i) -> bool {
    if (i == sn) {
      found = try_species_map(n, g, map);
      return found.has_value();
    }
    for (SpeciesIndex j = 0; j < sg; ++j) {
      if (taken[j]) continue;
      taken[j] = true;
      map[i] = j;
      if (self(self, i + 1)) return true;
      taken[j] = false;
    }
    return false;
  };
  recurse(recurse, 0);
  return found;
}

bool is_embedded_in(const Network& n, const Network& g) { return find_embedding(n, g).has_value(); }

}  // namespace crn
