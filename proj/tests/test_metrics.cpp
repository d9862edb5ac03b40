#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>

#include "dircomm/graph.hpp"
#include "dircomm/metrics.hpp"

using namespace dircomm;

TEST(Density, EmptyGraphIsZero) {
  LabeledDigraph g({0, 0, 1, 1});
  const auto d = density(g);
  for (auto& row : d.w)
    for (double v : row) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(d.normalization, Normalization::PossiblePairs);
}

TEST(Density, SaturatedCrossBlock) {
  LabeledDigraph g({0, 0, 1, 1});
  for (NodeId s : {0, 1})
    for (NodeId t : {2, 3}) g.add_edge(s, t);
  const auto d = density(g);
  EXPECT_EQ(d.w, (Matrix2{{{0.0, 1.0}, {0.0, 0.0}}}));
}

TEST(Density, MatchesBruteForce) {
  Rng rng(8);
  auto g = new_erdos_renyi(35, 25, 0.1, rng);
  double count[2][2] = {};
  for (NodeId i = 0; i < 60; ++i)
    for (NodeId j = 0; j < 60; ++j)
      if (g.has_edge(i, j)) count[g.group(i)][g.group(j)] += 1;
  const double n[2] = {35, 25};
  const auto d = density(g);
  for (int r = 0; r < 2; ++r)
    for (int s = 0; s < 2; ++s) {
      const double denom = r == s ? n[r] * (n[r] - 1) : n[r] * n[s];
      EXPECT_DOUBLE_EQ(d.w[r][s], count[r][s] / denom);
      EXPECT_LE(d.w[r][s], 1.0);
    }
}

TEST(Density, UndefinedForSingletonGroup) {
  LabeledDigraph g({0, 1, 1});
  EXPECT_THROW(density(g), Error);
}

TEST(DegreeNormalized, SymmetricCounts) {
  const auto d = density_degree_normalized(BlockCounts<int>{{{{1, 1}, {1, 1}}}});
  for (auto& row : d.w)
    for (double v : row) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(DegreeNormalized, HandEvaluatedBoundaryCase) {
  // e00 e11 = e01 e10: every entry equals 1/9.
  const auto d = density_degree_normalized(BlockCounts<int>{{{{4, 2}, {2, 1}}}});
  EXPECT_DOUBLE_EQ(d.w[0][0], 4.0 / 36.0);
  EXPECT_DOUBLE_EQ(d.w[0][1], 2.0 / 18.0);
  EXPECT_DOUBLE_EQ(d.w[1][0], 2.0 / 18.0);
  EXPECT_DOUBLE_EQ(d.w[1][1], 1.0 / 9.0);
  EXPECT_EQ(classify(d).kind, Kind::Unclassified);
}

TEST(DegreeNormalized, ZeroOutDegreeIsError) {
  EXPECT_THROW(density_degree_normalized(BlockCounts<int>{{{{0, 0}, {3, 1}}}}), Error);
  EXPECT_THROW(density_degree_normalized(BlockCounts<int>{{{{0, 4}, {0, 1}}}}), Error);
}

TEST(Classify, SpecExamples) {
  EXPECT_EQ(classify(Matrix2{{{0.3, 0.1}, {0.1, 0.3}}}),
            (CommunityType{Kind::Assortative, std::nullopt}));
  EXPECT_EQ(classify(Matrix2{{{0.4, 0.3}, {0.1, 0.05}}}), (CommunityType{Kind::CorePeriphery, 0}));
  EXPECT_EQ(classify(Matrix2{{{0.05, 0.3}, {0.02, 0.4}}}), (CommunityType{Kind::SourceBasin, 1}));
  EXPECT_EQ(classify(Matrix2{{{0.1, 0.3}, {0.2, 0.05}}}).kind, Kind::Disassortative);
  EXPECT_EQ(classify(Matrix2{{{0.1, 0.1}, {0.1, 0.1}}}).kind, Kind::Unclassified);
}

TEST(Classify, RolesOnlyForCoreAndBasin) {
  const auto cp = classify(Matrix2{{{0.05, 0.1}, {0.3, 0.4}}});
  EXPECT_EQ(cp.kind, Kind::CorePeriphery);
  EXPECT_EQ(cp.core(), std::optional<Group>(1));
  EXPECT_FALSE(cp.basin());
  const auto a = classify(Matrix2{{{0.3, 0.1}, {0.1, 0.3}}});
  EXPECT_FALSE(a.role);
}

TEST(Classify, DecidingTiesAreUnclassified) {
  EXPECT_EQ(classify(Matrix2{{{0.3, 0.3}, {0.3, 0.1}}}).kind, Kind::Unclassified);
  EXPECT_EQ(classify(Matrix2{{{0.3, 0.2}, {0.2, 0.2}}}).kind, Kind::Unclassified);
  // A tie between the two smallest entries does not decide the ranking.
  EXPECT_EQ(classify(Matrix2{{{0.3, 0.1}, {0.1, 0.4}}}).kind, Kind::Assortative);
}

TEST(Classify, RejectsNonFinite) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(classify(Matrix2{{{nan, 0.1}, {0.1, 0.3}}}), Error);
  EXPECT_THROW(classify(Matrix2{{{0.1, INFINITY}, {0.1, 0.3}}}), Error);
}

TEST(Classify, AllTwentyFourOrderingsLandInExactlyOneType) {
  std::array<double, 4> v{1, 2, 3, 4};
  std::map<std::string, int> tally;
  int orderings = 0;
  do {
    ++orderings;
    const Matrix2 w{{{v[0], v[1]}, {v[2], v[3]}}};
    const auto t = classify(w);
    ASSERT_NE(t.kind, Kind::Unclassified);
    ++tally[type_label(t)];
  } while (std::next_permutation(v.begin(), v.end()));
  EXPECT_EQ(orderings, 24);
  // Diagonal on top: 2! * 2! orderings. Core r: (w_rr, w_rs) on top, and so on.
  EXPECT_EQ(tally["A"], 4);
  EXPECT_EQ(tally["D"], 4);
  EXPECT_EQ(tally["CP0"], 4);
  EXPECT_EQ(tally["CP1"], 4);
  EXPECT_EQ(tally["SB0"], 4);
  EXPECT_EQ(tally["SB1"], 4);
}

TEST(Classify, RelabelingEquivariance) {
  Rng rng(101);
  for (int k = 0; k < 20000; ++k) {
    Matrix2 w;
    for (auto& row : w)
      for (double& x : row) x = uniform01(rng);
    const auto t = classify(w);
    EXPECT_NE(t.kind, Kind::Unclassified);
    EXPECT_EQ(classify(relabeled(w)), relabeled(t));
  }
}

TEST(Classify, DegreeNormalizedNeverCoreOrBasinExhaustive) {
  int counted = 0;
  for (int a = 1; a <= 12; ++a)
    for (int b = 1; b <= 12; ++b)
      for (int c = 1; c <= 12; ++c)
        for (int d = 1; d <= 12; ++d) {
          const auto t = classify(density_degree_normalized(BlockCounts<int>{{{{a, b}, {c, d}}}}));
          ASSERT_TRUE(t.kind == Kind::Assortative || t.kind == Kind::Disassortative ||
                      t.kind == Kind::Unclassified)
              << a << ' ' << b << ' ' << c << ' ' << d << " -> " << type_label(t);
          ++counted;
        }
  EXPECT_EQ(counted, 12 * 12 * 12 * 12);
}

TEST(Classify, DegreeNormalizedNeverCoreOrBasinRandom) {
  Rng rng(55);
  for (int k = 0; k < 100000; ++k) {
    BlockCounts<long> e;
    for (auto& row : e.e)
      for (long& x : row) x = 1 + long(uniform_below<std::uint32_t>(rng, 1000000));
    const auto t = classify(density_degree_normalized(e));
    ASSERT_NE(t.kind, Kind::CorePeriphery);
    ASSERT_NE(t.kind, Kind::SourceBasin);
  }
}

TEST(Classify, SourceBasinNeedsHigherBasinInDegree) {
  // Large-N possible-pair normalization: SB with basin r implies z_r > z_s.
  Rng rng(77);
  int sb = 0;
  for (int k = 0; k < 200000; ++k) {
    BlockCounts<double> e;
    for (auto& row : e.e)
      for (double& x : row) x = double(uniform_below<std::uint32_t>(rng, 5000));
    const std::array<double, 2> n{double(2 + uniform_below<std::uint32_t>(rng, 500)),
                                  double(2 + uniform_below<std::uint32_t>(rng, 500))};
    const auto t = classify(density_from_counts(e, n, Normalization::PossiblePairsLargeN));
    if (t.kind != Kind::SourceBasin) continue;
    ++sb;
    const Group r = *t.basin(), s = other(r);
    EXPECT_GT(e.into(r) / n[r], e.into(s) / n[s]);
  }
  EXPECT_GT(sb, 1000);
}

TEST(KindCodes, RoundTrip) {
  for (Kind k : {Kind::Assortative, Kind::CorePeriphery, Kind::Disassortative, Kind::SourceBasin,
                 Kind::Unclassified})
    EXPECT_EQ(kind_from_code(kind_code(k)), k);
  EXPECT_THROW(kind_from_code("X"), Error);
}
