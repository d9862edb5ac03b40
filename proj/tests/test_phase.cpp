#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "dircomm/phase.hpp"

using namespace dircomm;

namespace {

const CommunityType kSB1{Kind::SourceBasin, 1};

PhaseGrid reference_grid() {
  static const PhaseGrid grid = scan_grid({0.5, 2.0, 1.0, 0.5}, 201, 2);
  return grid;
}

bool all_source_basin(const PhaseGrid& g) {
  return g.count(Kind::SourceBasin) == g.cells.size();
}

PhaseGrid synthetic(std::size_t res, auto&& label) {
  PhaseGrid g;
  g.x.resolution = g.y.resolution = res;
  for (std::size_t i = 0; i < res; ++i)
    for (std::size_t j = 0; j < res; ++j) g.cells.push_back(label(g.x.center(i), g.y.center(j)));
  return g;
}

}  // namespace

TEST(Axis, CentersAndCells) {
  Axis a{"pa0", 0.0, 1.0, 4};
  EXPECT_DOUBLE_EQ(a.center(0), 0.125);
  EXPECT_DOUBLE_EQ(a.center(3), 0.875);
  EXPECT_EQ(a.cell_of(0.0), 0u);
  EXPECT_EQ(a.cell_of(0.3), 1u);
  EXPECT_EQ(a.cell_of(1.0), 3u);
  EXPECT_THROW(a.cell_of(1.5), Error);
}

TEST(PhaseParams, MapsRatiosToPrimitives) {
  const auto p = phase_params({0.5, 2.0, 0.8, 0.5}, 0.3, 0.6);
  EXPECT_DOUBLE_EQ(p.group_sizes[0], 2000.0);
  EXPECT_DOUBLE_EQ(p.group_sizes[1], 1000.0);
  EXPECT_DOUBLE_EQ(z_fixed_point(p.alpha[0], p.p_remove[0]), 5.0);
  EXPECT_DOUBLE_EQ(z_fixed_point(p.alpha[1], p.p_remove[1]), 10.0);
  EXPECT_EQ(p.p_swap, (std::array<double, 2>{0.8, 0.8}));
  EXPECT_THROW(scan_grid({0.5, 2.0, 0.0, 0.5}, 10), Error);
  EXPECT_THROW(scan_grid({0.5, 2.0, 1.0, 0.5}, 1), Error);
}

TEST(ScanGrid, ReferenceScanAnchors) {
  const auto g = reference_grid();
  EXPECT_EQ(g.cell_at(0.95, 0.95).kind, Kind::Assortative);
  EXPECT_EQ(g.cell_at(0.05, 0.05).kind, Kind::Disassortative);
  EXPECT_EQ(g.cell_at(0.5, 0.5), kSB1);
  EXPECT_EQ(g.cell_at(0.95, 0.05), (CommunityType{Kind::CorePeriphery, 0}));
  EXPECT_EQ(g.cell_at(0.05, 0.95), (CommunityType{Kind::CorePeriphery, 1}));
}

TEST(ScanGrid, ReferenceScanCellCounts) {
  // Frozen from an independent evaluation of the same mean-field pipeline.
  const auto g = reference_grid();
  std::map<std::string, std::size_t> tally;
  for (const auto& t : g.cells) ++tally[type_label(t)];
  EXPECT_EQ(tally["SB1"], 11091u);
  EXPECT_EQ(tally["D"], 8809u);
  EXPECT_EQ(tally["CP1"], 8017u);
  EXPECT_EQ(tally["CP0"], 7034u);
  EXPECT_EQ(tally["A"], 5450u);
  EXPECT_EQ(tally.count("SB0"), 0u);
  EXPECT_EQ(tally.count("U"), 0u);
}

TEST(ScanGrid, ParallelMatchesSerial) {
  const PhaseFixed f{0.7, 1.5, 0.6, 0.5};
  EXPECT_EQ(scan_grid(f, 61, 1).cells, scan_grid(f, 61, 3).cells);
}

TEST(ScanGrid, EqualDegreesHaveNoSourceBasin) {
  for (double c : {0.5, 1.0, 2.0, 5.0})
    for (double ps : {0.3, 0.7, 1.0}) EXPECT_EQ(scan_grid({1.0, c, ps, 0.5}, 101).count(Kind::SourceBasin), 0u);
}

TEST(ScanGrid, SourceBasinRegionGrowsWithAsymmetry) {
  const auto strong = scan_grid({0.5, 2.0, 1.0, 0.5}, 101).count(Kind::SourceBasin);
  const auto weak = scan_grid({0.9, 2.0, 1.0, 0.5}, 101).count(Kind::SourceBasin);
  EXPECT_GT(strong, weak);
  EXPECT_GT(weak, 0u);
}

TEST(ScanGrid, ScaleInvariance) {
  for (double b : {0.3, 0.5, 2.0})
    for (double c : {0.5, 2.0})
      for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 40; ++j) {
          const PhaseFixed f{b, c, 0.8, 0.5};
          const double pa0 = (i + 0.5) / 40, pa1 = (j + 0.5) / 40;
          const auto ref = classify_point(f, pa0, pa1);
          const auto scaled = classify(omega_predicted(phase_params(f, pa0, pa1, 37.0, 5000.0)).omega);
          if (ref.kind != Kind::Unclassified && scaled.kind != Kind::Unclassified) {
            EXPECT_EQ(ref, scaled);
          }
        }
}

TEST(ScanGrid, RelabelingEquivariance) {
  const std::size_t res = 81;
  for (auto [b, c] : {std::pair{0.5, 2.0}, std::pair{0.8, 0.4}, std::pair{3.0, 1.0}}) {
    const auto g = scan_grid({b, c, 0.9, 0.5}, res);
    const auto h = scan_grid({1.0 / b, 1.0 / c, 0.9, 0.5}, res);
    std::size_t ties = 0;
    for (std::size_t i = 0; i < res; ++i)
      for (std::size_t j = 0; j < res; ++j) {
        const auto& a = g.at(i, j);
        const auto& m = h.at(j, i);
        if (a.kind == Kind::Unclassified || m.kind == Kind::Unclassified) {
          ++ties;
          continue;
        }
        EXPECT_EQ(a, relabeled(m)) << b << ' ' << c << ' ' << i << ' ' << j;
      }
    EXPECT_LE(ties, res);
  }
}

TEST(BoundaryResiduals, HandEvaluatedAtOneHalf) {
  const auto r = boundary_residuals(0.5, 0.5, 2.0);
  for (const auto& v : r) ASSERT_TRUE(v.has_value());
  EXPECT_NEAR(*r[0], -1.0 / 22.0, 1e-14);
  EXPECT_NEAR(*r[1], 11.0 / 30.0, 1e-14);
  EXPECT_NEAR(*r[2], -7.0 / 18.0, 1e-14);
  EXPECT_NEAR(*r[3], 7.0 / 34.0, 1e-14);
}

TEST(BoundaryResiduals, AssortativeEquationDegenerateAtEqualDegrees) {
  for (double x = 0.05; x < 1.0; x += 0.1)
    for (double c : {0.5, 1.0, 3.0}) EXPECT_NEAR(*boundary_residuals(x, 1.0, c)[0], -1.0, 1e-15);
  EXPECT_THROW(boundary_residuals(0.0, 0.5, 2.0), Error);
  EXPECT_THROW(boundary_residuals(0.5, -1.0, 2.0), Error);
}

TEST(BoundaryResiduals, DisassortativeSignChangeBracketsRoot) {
  EXPECT_LT(*boundary_residuals(0.25, 0.5, 2.0)[1] * *boundary_residuals(0.26, 0.5, 2.0)[1], 0.0);
}

TEST(CriticalSwap, ReferencePoint) {
  const auto cs = critical_swap(0.5, 2.0);
  EXPECT_NEAR(cs.ps_star, 0.25544, 1e-5);
  EXPECT_EQ(cs.limiting, Boundary::Disassortative);
  EXPECT_FALSE(cs.relabeled);
  EXPECT_NEAR(*cs.candidates[0].root, 0.4641, 1e-4);
  EXPECT_NEAR(*cs.candidates[1].root, 0.25544, 1e-5);
  EXPECT_NEAR(*cs.candidates[2].root, 0.41699, 1e-5);
  EXPECT_NEAR(*cs.candidates[3].root, 1.0 / 3.0, 1e-9);
  for (const auto& cand : cs.candidates) {
    EXPECT_LT(std::abs(cand.residual), 1e-8);
    EXPECT_LE(cand.bracket->first, *cand.root);
    EXPECT_GE(cand.bracket->second, *cand.root);
  }
}

TEST(CriticalSwap, ToleranceConsistency) {
  const double fine = critical_swap(0.5, 2.0, 1e-12).ps_star;
  EXPECT_NEAR(critical_swap(0.5, 2.0, 1e-6).ps_star, fine, 1e-6);
  EXPECT_NEAR(critical_swap(0.5, 2.0, 1e-9).ps_star, fine, 1e-9);
}

TEST(CriticalSwap, EqualDegreesHaveNoAssortativeRoot) {
  const auto cs = critical_swap(1.0, 2.0);
  EXPECT_FALSE(cs.candidates[0].root.has_value());
  EXPECT_THROW(critical_swap(1.0, 1.0), Error);
}

TEST(CriticalSwap, LargerGroupZeroDegreeUsesRelabeling) {
  const auto direct = critical_swap(0.5, 2.0);
  const auto mirrored = critical_swap(2.0, 0.5);
  EXPECT_TRUE(mirrored.relabeled);
  EXPECT_DOUBLE_EQ(mirrored.ps_star, direct.ps_star);
  EXPECT_EQ(*mirrored.candidates[2].root, *direct.candidates[3].root);
  EXPECT_EQ(*mirrored.candidates[3].root, *direct.candidates[2].root);
}

TEST(CriticalSwap, ThresholdMatchesGridBehavior) {
  // Below P^S* the whole square is SB; just above it some other type appears.
  for (auto [b, c] : {std::pair{0.5, 2.0}, std::pair{0.8, 2.0}, std::pair{0.5, 0.5},
                      std::pair{0.2, 3.0}, std::pair{0.7, 1.5}, std::pair{2.0, 0.5}}) {
    const double ps = critical_swap(b, c).ps_star;
    ASSERT_GT(ps, 0.02);
    EXPECT_TRUE(all_source_basin(scan_grid({b, c, ps - 0.02, 0.5}, 101))) << b << ' ' << c;
    EXPECT_FALSE(all_source_basin(scan_grid({b, c, ps + 0.02, 0.5}, 101))) << b << ' ' << c;
  }
}

TEST(CriticalSwap, EqualGroupSizesUnderestimateThreshold) {
  // At c = 1 the first core-periphery equation yields a root the grid does not
  // reproduce: the square is still entirely SB well above it.
  const auto cs = critical_swap(0.5, 1.0);
  EXPECT_NEAR(cs.ps_star, 0.2984, 1e-3);
  EXPECT_EQ(cs.limiting, Boundary::FirstCorePeriphery);
  EXPECT_TRUE(all_source_basin(scan_grid({0.5, 1.0, cs.ps_star + 0.03, 0.5}, 101)));
}

TEST(CriticalSwap, FullSquareIsSourceBasinBelowThreshold) {
  const auto g = scan_grid({0.5, 2.0, 0.24, 0.5}, 101);
  EXPECT_TRUE(g.uniform());
  EXPECT_EQ(g.cells.front(), kSB1);
}

TEST(ExtractBoundaries, UniformGridHasNone) {
  const auto g = synthetic(20, [](double, double) { return kSB1; });
  EXPECT_TRUE(extract_boundaries(g).empty());
}

TEST(ExtractBoundaries, HalfPlaneWithinOneCell) {
  auto line = [](double x) { return 0.3 + 0.5 * x; };
  const auto g = synthetic(50, [&](double x, double y) {
    return y > line(x) ? CommunityType{Kind::Assortative, std::nullopt}
                       : CommunityType{Kind::Disassortative, std::nullopt};
  });
  const auto lines = extract_boundaries(g);
  ASSERT_EQ(lines.size(), 1u);
  EXPECT_EQ(lines[0].between, "A|D");
  const double w = g.x.width();
  for (const auto& p : lines[0].points)
    EXPECT_LE(std::abs(p[1] - line(p[0])) / std::sqrt(1.25), w);
  EXPECT_DOUBLE_EQ(std::min(lines[0].points.front()[0], lines[0].points.back()[0]), 0.0);
  EXPECT_DOUBLE_EQ(std::max(lines[0].points.front()[0], lines[0].points.back()[0]), 1.0);
}

TEST(ExtractBoundaries, ReferenceScanAssortativeSourceBasinBoundaryIsConnected) {
  const auto lines = extract_boundaries(reference_grid());
  std::vector<const Polyline*> ab;
  for (const auto& l : lines)
    if (l.between == "A|SB1") ab.push_back(&l);
  ASSERT_FALSE(ab.empty());
  // Union of polylines sharing a vertex.
  std::vector<std::size_t> parent(ab.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t k) {
    while (parent[k] != k) k = parent[k] = parent[parent[k]];
    return k;
  };
  for (std::size_t a = 0; a < ab.size(); ++a)
    for (std::size_t b = a + 1; b < ab.size(); ++b) {
      std::set<std::array<double, 2>> pts(ab[a]->points.begin(), ab[a]->points.end());
      for (const auto& p : ab[b]->points)
        if (pts.contains(p)) parent[find(a)] = find(b);
    }
  std::set<std::size_t> roots;
  for (std::size_t k = 0; k < ab.size(); ++k) roots.insert(find(k));
  EXPECT_EQ(roots.size(), 1u);
}
