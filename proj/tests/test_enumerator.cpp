#include <gtest/gtest.h>

#include <array>
#include <numeric>
#include <set>

#include "crnatoms/enumerator.hpp"
#include "crnatoms/parser.hpp"
#include "test_util.hpp"

using namespace crn;

namespace {

// Independent census of one partition: fill the eight slots
// (a+b <-> c+d, e+f <-> g+h) with every distinct arrangement of the species
// multiset (0 = empty slot), keep valid fillings, and count classes by the
// minimum over all species relabelings of a plain integer encoding.
std::size_t brute_force_count(const Partition& p) {
  const int s = static_cast<int>(p.parts.size());
  std::vector<int> slots(8 - p.sum(), 0);
  for (int i = 0; i < s; ++i) slots.insert(slots.end(), p.parts[i], i + 1);
  std::sort(slots.begin(), slots.end());

  using Cx = std::array<int, 8>;
  auto complex_of = [&](int a, int b) {
    Cx c{};
    if (a) ++c[a - 1];
    if (b) ++c[b - 1];
    return c;
  };
  auto molecularity = [](const Cx& c) { return std::accumulate(c.begin(), c.end(), 0); };
  using Pair = std::array<Cx, 2>;  // sorted
  std::set<std::array<Pair, 2>> fillings;
  do {
    Pair p1{complex_of(slots[0], slots[1]), complex_of(slots[2], slots[3])};
    Pair p2{complex_of(slots[4], slots[5]), complex_of(slots[6], slots[7])};
    bool ok = true;
    for (Pair* q : {&p1, &p2}) {
      std::sort(q->begin(), q->end());
      if ((*q)[0] == (*q)[1]) ok = false;  // trivial
      const int m0 = molecularity((*q)[0]), m1 = molecularity((*q)[1]);
      if ((m0 == 0 && m1 == 1) || (m0 == 1 && m1 == 0)) ok = false;  // flow pair
    }
    if (!ok || p1 == p2) continue;
    std::array<Pair, 2> key{p1, p2};
    std::sort(key.begin(), key.end());
    fillings.insert(key);
  } while (std::next_permutation(slots.begin(), slots.end()));

  std::set<std::array<Pair, 2>> classes;
  std::vector<int> perm(s);
  for (const auto& f : fillings) {
    std::iota(perm.begin(), perm.end(), 0);
    std::array<Pair, 2> best{};
    bool first = true;
    do {
      std::array<Pair, 2> g;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          Cx c{};
          for (int k = 0; k < s; ++k) c[perm[k]] = f[i][j][k];
          g[i][j] = c;
        }
      for (auto& q : g) std::sort(q.begin(), q.end());
      std::sort(g.begin(), g.end());
      if (first || g < best) best = g;
      first = false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    classes.insert(best);
  }
  return classes.size();
}

std::vector<std::size_t> vec(std::initializer_list<std::size_t> v) { return v; }

}  // namespace

TEST(Partitions, TableOfPartitions) {
  auto p4 = partitions(4);
  std::vector<std::string> text;
  for (const auto& p : p4) text.push_back(p.to_string());
  EXPECT_EQ(text, (std::vector<std::string>{"(4)", "(3,1)", "(2,2)", "(2,1,1)", "(1,1,1,1)"}));
  std::vector<std::size_t> counts;
  for (int m = 4; m <= 8; ++m) counts.push_back(partitions(m).size());
  EXPECT_EQ(counts, vec({5, 7, 11, 15, 22}));
  ASSERT_EQ(partitions(1).size(), 1u);
  EXPECT_EQ(partitions(1)[0].parts, std::vector<int>{1});
}

TEST(Partitions, LexicographicallyDecreasing) {
  for (int m = 1; m <= 10; ++m) {
    auto ps = partitions(m);
    for (std::size_t i = 1; i < ps.size(); ++i) ASSERT_GT(ps[i - 1].parts, ps[i].parts);
    for (const auto& p : ps) ASSERT_EQ(p.sum(), m);
  }
}

TEST(Enumerate, SmallCells) {
  EXPECT_EQ(enumerate_by_partition(Partition{{1, 1, 1, 1}}).size(), 3u);
  EXPECT_EQ(enumerate_by_partition(Partition{{4}}).size(), 0u);
}

TEST(Enumerate, PerPartitionVectors) {
  auto all = enumerate_all();
  EXPECT_EQ(partition_count_vector(all, 4), vec({0, 2, 2, 5, 3}));
  EXPECT_EQ(partition_count_vector(all, 5), vec({1, 4, 7, 8, 10, 9, 2}));
  EXPECT_EQ(partition_count_vector(all, 6), vec({0, 3, 6, 9, 7, 23, 12, 9, 23, 12, 3}));
  EXPECT_EQ(partition_count_vector(all, 8),
            vec({0, 0, 0, 1, 1, 3, 2, 1, 5, 4, 9, 4, 7, 8, 13, 12, 3, 5, 11, 9, 3, 1}));
  // The (2,1,1,1,1,1) cell is checked against the brute-force census below.
  auto m7 = partition_count_vector(all, 7);
  auto expected7 = vec({0, 1, 3, 4, 5, 13, 7, 9, 13, 26, 8, 12, 15, 0, 1});
  m7[13] = 0;
  EXPECT_EQ(m7, expected7);
}

TEST(Enumerate, MatchesBruteForceCensus) {
  for (int m = 4; m <= 8; ++m)
    for (const auto& p : partitions(m))
      ASSERT_EQ(enumerate_by_partition(p).size(), brute_force_count(p)) << p.to_string();
}

// Brute force and the enumerator agree on 6 for this cell.
TEST(Enumerate, TwoOneOneOneOneOneCell) {
  const Partition p{{2, 1, 1, 1, 1, 1}};
  EXPECT_EQ(brute_force_count(p), 6u);
  EXPECT_EQ(enumerate_by_partition(p).size(), 6u);
}

TEST(Enumerate, EmittedNetworkInvariants) {
  auto all = enumerate_all();
  std::set<CanonicalForm> forms;
  for (const auto& e : all) {
    const Network& n = e.network;
    ASSERT_TRUE(n.is_reversible());
    ASSERT_EQ(n.reaction_count(), 4u);
    ASSERT_TRUE(n.non_flow_reactions().size() == 4u) << e.canonical_text;
    for (const auto& c : n.complexes()) ASSERT_LE(c.molecularity(), 2);
    auto tm = tm_partition(n);
    ASSERT_EQ(std::vector<int>(tm.begin(), tm.end()), e.partition.parts);
    ASSERT_TRUE(forms.insert(canonicalize(n)).second) << "duplicate class " << e.canonical_text;
    ASSERT_EQ(e.id, network_id(n));
  }
}

TEST(Enumerate, DeterministicAndClosedUnderRelabeling) {
  auto a = enumerate_all(), b = enumerate_all();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(a[i].canonical_text, b[i].canonical_text);

  std::map<CanonicalForm, int> count;
  for (const auto& e : a) count[canonicalize(e.network)] += 1;
  std::mt19937_64 rng(31);
  for (const auto& e : a) {
    Network r = relabel(e.network, crn::testing::random_permutation(rng, e.network.species_count()));
    ASSERT_EQ(count[canonicalize(r)], 1);
  }
}

TEST(Enumerate, DecoupledFilterIsOptional) {
  EnumerationOptions opts;
  opts.drop_decoupled = true;
  auto kept = enumerate_all(), dropped = enumerate_all(opts);
  EXPECT_LT(dropped.size(), kept.size());
  for (const auto& e : dropped) ASSERT_FALSE(is_decoupled(e.network));
}
