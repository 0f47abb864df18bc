#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "crnatoms/network.hpp"

namespace crn {

/// Parse failure; `offset` is the byte position in the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, const std::string& what)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Reads the .crn text format:
///
///   network := stmt ((";" | newline) stmt)*
///   stmt    := complex (arrow complex)+
///   arrow   := "->" | "<->" | "<-" | "→" | "⇄" | "←"
///   complex := "0" | term ("+" term)*
///   term    := [integer >= 1] identifier
///
/// Chains such as "2A <- A+B <- A" expand pairwise. Species are indexed in
/// order of first appearance. Blank statements are skipped; an input with no
/// reactions is an error.
Network parse_network(std::string_view text);

/// Deterministic text: species taken in name order, reactions in decreasing
/// (reactant, product) order, reversible pairs fused to "<->" with the larger
/// complex first, unit coefficients omitted.
std::string serialize_network(const Network& net);

/// Text of a complex using the network's species names.
std::string complex_text(const Network& net, const Complex& c);
std::string reaction_text(const Network& net, const Reaction& r);

/// Named-network equality: same species names and the same reactions once
/// species are matched by name.
bool same_named_network(const Network& a, const Network& b);

}  // namespace crn
