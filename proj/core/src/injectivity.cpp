#include "crnatoms/injectivity.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "crnatoms/exact.hpp"

namespace crn {

namespace {

constexpr std::size_t kMaxSubsets = 1'000'000;

std::size_t binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kMaxSubsets) return r;
  }
  return r;
}

void finish(JacobianCriterionResult& res) {
  res.passes = res.positive_terms.empty() || res.negative_terms.empty();
}

}  // namespace

JacobianCriterionResult jacobian_criterion(const Network& net) {
  if (!net.is_cfstr()) throw PreconditionError("jacobian_criterion: network is not a CFSTR");
  const std::size_t s = net.species_count();
  const std::size_t r = net.reaction_count();
  if (binomial(r, s) > kMaxSubsets) throw PreconditionError("jacobian_criterion: too many reaction subsets");

  JacobianCriterionResult res;
  std::vector<std::size_t> subset(s);
  std::iota(subset.begin(), subset.end(), 0);
  IntMatrix ys(s, s), gs(s, s);
  while (true) {
    for (std::size_t row = 0; row < s; ++row) {
      const Reaction& rx = net.reaction(subset[row]);
      for (std::size_t j = 0; j < s; ++j) {
        ys(row, j) = rx.reactant[j];
        gs(row, j) = rx.product[j] - rx.reactant[j];
      }
    }
    std::int64_t dy = bareiss_determinant(ys);
    std::int64_t c = dy == 0 ? 0 : dy * bareiss_determinant(gs);
    if (c > 0) res.positive_terms.push_back(subset);
    else if (c < 0) res.negative_terms.push_back(subset);
    else ++res.zero_terms_count;

    // Next combination in lexicographic order.
    std::size_t i = s;
    while (i > 0 && subset[i - 1] == r - s + i - 1) --i;
    if (i == 0) break;
    ++subset[i - 1];
    for (std::size_t j = i; j < s; ++j) subset[j] = subset[j - 1] + 1;
  }
  finish(res);
  return res;
}

JacobianCriterionResult leibniz_oracle(const Network& net) {
  if (!net.is_cfstr()) throw PreconditionError("leibniz_oracle: network is not a CFSTR");
  const std::size_t s = net.species_count();
  if (s > kLeibnizMaxSpecies) throw PreconditionError("leibniz_oracle: too many species");
  const std::size_t r = net.reaction_count();

  // Entry (i, j) of df is sum_k kappa_k (y'_ki - y_ki) y_kj x^(y_k - e_j):
  // keep the integer coefficient (y'_ki - y_ki) y_kj per reaction symbol k.
  struct Term {
    std::size_t reaction;
    std::int64_t coeff;
  };
  std::vector<std::vector<std::vector<Term>>> entry(s, std::vector<std::vector<Term>>(s));
  for (std::size_t k = 0; k < r; ++k) {
    const Reaction& rx = net.reaction(k);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) {
        std::int64_t c = (rx.product[i] - rx.reactant[i]) * rx.reactant[j];
        if (c != 0) entry[i][j].push_back({k, c});
      }
  }

  // The x-part of every product along a permutation is x^(sum y_k) / prod x,
  // fixed by the multiset of chosen reactions, so monomials are keyed by that
  // multiset alone.
  std::map<std::vector<std::size_t>, std::int64_t> coeffs;
  std::vector<std::size_t> chosen;
  std::vector<bool> used_col(s, false);
  auto expand = [&](auto& self, std::size_t row, int sign, std::int64_t product) -> void {
    if (row == s) {
      std::vector<std::size_t> key = chosen;
      std::sort(key.begin(), key.end());
      coeffs[key] += sign * product;
      return;
    }
    // Sign of the permutation tracked by counting inversions as columns are
    // placed: choosing column j flips sign once per already-used column > j.
    for (std::size_t j = 0; j < s; ++j) {
      if (used_col[j] || entry[row][j].empty()) continue;
      int flips = 0;
      for (std::size_t q = j + 1; q < s; ++q)
        if (used_col[q]) ++flips;
      int next_sign = (flips % 2) ? -sign : sign;
      used_col[j] = true;
      for (const Term& t : entry[row][j]) {
        chosen.push_back(t.reaction);
        self(self, row + 1, next_sign, product * t.coeff);
        chosen.pop_back();
      }
      used_col[j] = false;
    }
  };
  expand(expand, 0, 1, 1);

  JacobianCriterionResult res;
  for (const auto& [key, c] : coeffs) {
    if (c > 0) res.positive_terms.push_back(key);
    else if (c < 0) res.negative_terms.push_back(key);
    else ++res.zero_terms_count;
  }
  finish(res);
  return res;
}

}  // namespace crn
