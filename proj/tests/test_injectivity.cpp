#include <gtest/gtest.h>

#include "crnatoms/enumerator.hpp"
#include "crnatoms/injectivity.hpp"
#include "crnatoms/parser.hpp"
#include "test_util.hpp"

using namespace crn;

namespace {
Network cfstr(const char* nonflow) { return cfstr_closure(parse_network(nonflow), true); }
}  // namespace

TEST(JacobianCriterion, Autocatalysis) {
  auto r = jacobian_criterion(cfstr("A -> 2A"));
  EXPECT_FALSE(r.passes);
  EXPECT_EQ(r.positive_terms.size() + r.negative_terms.size(), 2u);
  EXPECT_FALSE(leibniz_oracle(cfstr("A -> 2A")).passes);
}

TEST(JacobianCriterion, AnnihilationPasses) {
  EXPECT_TRUE(jacobian_criterion(cfstr("A+B -> 0")).passes);
  EXPECT_TRUE(leibniz_oracle(cfstr("A+B -> 0")).passes);
}

TEST(JacobianCriterion, PureFlowPasses) {
  Network n = parse_network("0 <-> A; 0 <-> B");
  EXPECT_TRUE(jacobian_criterion(n).passes);
  EXPECT_TRUE(leibniz_oracle(n).passes);
}

TEST(JacobianCriterion, RequiresCfstr) {
  EXPECT_THROW(jacobian_criterion(parse_network("A -> B")), PreconditionError);
  EXPECT_THROW(leibniz_oracle(parse_network("A -> B")), PreconditionError);
}

TEST(JacobianCriterion, OutflowTermAlwaysPresent) {
  auto all = enumerate_all();
  for (const auto& e : all) {
    Network c = cfstr_closure(e.network, true);
    auto r = jacobian_criterion(c);
    std::vector<std::size_t> outs;
    for (std::size_t i = 0; i < c.species_count(); ++i) outs.push_back(*c.index_of(outflow(c.species_count(), i)));
    std::sort(outs.begin(), outs.end());
    const auto& pos = r.positive_terms;
    const auto& neg = r.negative_terms;
    ASSERT_TRUE(std::find(pos.begin(), pos.end(), outs) != pos.end() ||
                std::find(neg.begin(), neg.end(), outs) != neg.end());
  }
}

TEST(JacobianCriterion, AgreesWithLeibnizOnCensus) {
  std::size_t small_pass = 0, small = 0, large_pass = 0;
  for (const auto& e : enumerate_all()) {
    Network c = cfstr_closure(e.network, true);
    const bool jc = jacobian_criterion(c).passes;
    ASSERT_EQ(jc, leibniz_oracle(c).passes) << e.canonical_text;
    if (e.partition.max_part_at_most(2)) {
      ++small;
      small_pass += jc;
    } else {
      large_pass += jc;
    }
  }
  EXPECT_EQ(small_pass, small);
  EXPECT_EQ(large_pass, 102u);
}

TEST(JacobianCriterion, AgreesWithLeibnizOnRandomCfstrs) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 400; ++trial) {
    Network c = cfstr_closure(crn::testing::random_network(rng, 4, 3), trial % 2 == 0);
    ASSERT_EQ(jacobian_criterion(c).passes, leibniz_oracle(c).passes) << serialize_network(c);
  }
}

TEST(JacobianCriterion, InvariantUnderRelabeling) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    Network c = cfstr_closure(crn::testing::random_network(rng, 4, 3), true);
    Network r = relabel(c, crn::testing::random_permutation(rng, c.species_count()));
    ASSERT_EQ(jacobian_criterion(c).passes, jacobian_criterion(r).passes);
  }
}

TEST(JacobianCriterion, FreshFlowSpeciesNeverBreaksAPass) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    Network c = cfstr_closure(crn::testing::random_network(rng, 3, 3), true);
    if (!jacobian_criterion(c).passes) continue;
    const std::size_t s = c.species_count();
    std::vector<Reaction> rs;
    for (const auto& r : c.reactions()) {
      std::vector<Coeff> a = r.reactant.coeffs(), b = r.product.coeffs();
      a.push_back(0);
      b.push_back(0);
      rs.push_back({Complex(a), Complex(b)});
    }
    rs.push_back(inflow(s + 1, s));
    rs.push_back(outflow(s + 1, s));
    ASSERT_TRUE(jacobian_criterion(Network::with_default_names(s + 1, rs)).passes);
  }
}
