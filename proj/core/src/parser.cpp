#include "crnatoms/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace crn {

namespace {

enum class Arrow { Forward, Backward, Both };

using SparseComplex = std::map<std::size_t, Coeff>;

struct RawReaction {
  SparseComplex reactant;
  SparseComplex product;
  std::size_t offset;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Network run() {
    std::vector<RawReaction> raw;
    while (true) {
      skip_blank();
      if (at_end()) break;
      if (peek() == ';' || peek() == '\n') {
        ++pos_;
        continue;
      }
      statement(raw);
      skip_blank();
      if (at_end()) break;
      if (peek() != ';' && peek() != '\n') fail("expected ';' or newline");
      ++pos_;
    }
    if (raw.empty()) fail("empty input");

    const std::size_t s = names_.size();
    std::vector<Reaction> reactions;
    std::set<Reaction> seen;
    for (const auto& rr : raw) {
      Reaction r{dense(rr.reactant, s), dense(rr.product, s)};
      if (r.is_trivial()) throw ParseError(rr.offset, "trivial reaction (reactant equals product)");
      if (!seen.insert(r).second) throw ParseError(rr.offset, "duplicate reaction");
      reactions.push_back(std::move(r));
    }
    return Network(names_, std::move(reactions));
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> names_;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }

  void skip_blank() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }

  static Complex dense(const SparseComplex& c, std::size_t s) {
    Complex out(s);
    for (auto [i, v] : c) out[i] = v;
    return out;
  }

  std::size_t species(const std::string& name) {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it != names_.end()) return static_cast<std::size_t>(it - names_.begin());
    names_.push_back(name);
    return names_.size() - 1;
  }

  void statement(std::vector<RawReaction>& out) {
    std::size_t start = pos_;
    SparseComplex left = complex();
    skip_blank();
    auto arrow = parse_arrow();
    if (!arrow) fail("expected arrow");
    do {
      skip_blank();
      SparseComplex right = complex();
      if (*arrow != Arrow::Backward) out.push_back({left, right, start});
      if (*arrow != Arrow::Forward) out.push_back({right, left, start});
      left = std::move(right);
      skip_blank();
    } while ((arrow = parse_arrow()));
  }

  std::optional<Arrow> parse_arrow() {
    static const std::pair<std::string_view, Arrow> arrows[] = {
        {"<->", Arrow::Both},          {"->", Arrow::Forward},     {"<-", Arrow::Backward},
        {"⇄", Arrow::Both},       {"→", Arrow::Forward}, {"←", Arrow::Backward},
    };
    for (auto [tok, kind] : arrows) {
      if (starts_with(tok)) {
        pos_ += tok.size();
        return kind;
      }
    }
    return std::nullopt;
  }

  SparseComplex complex() {
    skip_blank();
    SparseComplex c;
    if (!at_end() && peek() == '0') {
      std::size_t save = pos_;
      ++pos_;
      // A bare "0" is the zero complex; "0A" or "02" is a coefficient error.
      if (at_end() || !std::isalnum(static_cast<unsigned char>(peek()))) return c;
      pos_ = save;
    }
    while (true) {
      skip_blank();
      term(c);
      skip_blank();
      if (!at_end() && peek() == '+') {
        ++pos_;
        continue;
      }
      return c;
    }
  }

  void term(SparseComplex& c) {
    if (at_end()) fail("expected term");
    Coeff coeff = 1;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      std::size_t start = pos_;
      Coeff v = 0;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
        v = v * 10 + (peek() - '0');
        if (v > 1'000'000) fail("coefficient too large");
        ++pos_;
      }
      if (v == 0) throw ParseError(start, "coefficient must be at least 1");
      coeff = v;
      skip_blank();
    }
    if (at_end() || !std::isalpha(static_cast<unsigned char>(peek()))) fail("expected species identifier");
    std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    c[species(name)] += coeff;
  }
};

}  // namespace

Network parse_network(std::string_view text) { return Parser(text).run(); }

namespace {

// Species indices sorted by name, so text does not depend on index order.
std::vector<SpeciesIndex> name_order(const Network& net) {
  std::vector<SpeciesIndex> order(net.species_count());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](SpeciesIndex a, SpeciesIndex b) { return net.species()[a] < net.species()[b]; });
  return order;
}

std::vector<Coeff> in_order(const Complex& c, const std::vector<SpeciesIndex>& order) {
  std::vector<Coeff> v;
  v.reserve(order.size());
  for (SpeciesIndex i : order) v.push_back(c[i]);
  return v;
}

std::string complex_text(const Network& net, const Complex& c, const std::vector<SpeciesIndex>& order) {
  if (c.is_zero()) return "0";
  std::string out;
  for (SpeciesIndex i : order) {
    if (c[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (c[i] != 1) out += std::to_string(c[i]);
    out += net.species()[i];
  }
  return out;
}

}  // namespace

std::string complex_text(const Network& net, const Complex& c) { return complex_text(net, c, name_order(net)); }

std::string reaction_text(const Network& net, const Reaction& r) {
  return complex_text(net, r.reactant) + " -> " + complex_text(net, r.product);
}

std::string serialize_network(const Network& net) {
  // Reactions in decreasing (reactant, product) order over name-sorted
  // species; a reversible pair is written once, larger complex first.
  const auto order = name_order(net);
  using Key = std::pair<std::vector<Coeff>, std::vector<Coeff>>;
  std::vector<std::pair<Key, const Reaction*>> keyed;
  for (const Reaction& r : net.reactions())
    keyed.push_back({{in_order(r.reactant, order), in_order(r.product, order)}, &r});
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  std::string out;
  for (const auto& [key, r] : keyed) {
    const bool reversible = net.contains(r->reversed());
    if (reversible && key.first < key.second) continue;  // emitted with its partner
    if (!out.empty()) out += "; ";
    out += complex_text(net, r->reactant, order);
    out += reversible ? " <-> " : " -> ";
    out += complex_text(net, r->product, order);
  }
  return out;
}

bool same_named_network(const Network& a, const Network& b) {
  if (a.species_count() != b.species_count() || a.reaction_count() != b.reaction_count()) return false;
  std::vector<SpeciesIndex> perm;
  for (const auto& name : a.species()) {
    auto j = b.species_index(name);
    if (!j) return false;
    perm.push_back(*j);
  }
  return relabel(a, perm).reactions() == b.reactions();
}

}  // namespace crn
