#pragma once

#include <cstddef>
#include <vector>

#include "crnatoms/network.hpp"

namespace crn {

/// Outcome of the determinant-expansion sign test on a CFSTR Jacobian.
/// Each term is identified by the reaction indices (into the network's
/// reaction list) whose rate constants multiply together in it.
struct JacobianCriterionResult {
  bool passes = true;
  std::vector<std::vector<std::size_t>> positive_terms;
  std::vector<std::vector<std::size_t>> negative_terms;
  std::size_t zero_terms_count = 0;
};

/// Jacobian Criterion by subset expansion. With Y the reactant matrix and G
/// the reaction-vector matrix, det(df) = sum over s-subsets S of
/// det(Y_S) det(G_S) prod_{k in S} kappa_k x^{y_k} / prod x, so the term of
/// subset S has the sign of the exact integer det(Y_S) det(G_S).
///
/// Throws PreconditionError when `net` is not a CFSTR or when the number of
/// subsets exceeds 10^6.
JacobianCriterionResult jacobian_criterion(const Network& net);

/// Independent check: symbolic Leibniz expansion of det(df) over species
/// permutations, collecting coefficients per rate-constant monomial. Refuses
/// networks with more than kLeibnizMaxSpecies species.
JacobianCriterionResult leibniz_oracle(const Network& net);

inline constexpr std::size_t kLeibnizMaxSpecies = 8;

}  // namespace crn
