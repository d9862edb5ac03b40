#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dircomm/error.hpp"
#include "dircomm/meanfield.hpp"
#include "dircomm/metrics.hpp"
#include "dircomm/parallel.hpp"
#include "dircomm/params.hpp"

namespace dircomm {

/// Parameters held fixed across a (P^A_0, P^A_1) scan.
struct PhaseFixed {
  double b = 1.0;  // <z>_0 / <z>_1
  double c = 1.0;  // N_0 / N_1
  double p_swap = 1.0;
  double p_remove = 0.5;

  void validate() const {
    require(std::isfinite(b) && b > 0.0, "b must be positive");
    require(std::isfinite(c) && c > 0.0, "c must be positive");
    require(p_swap > 0.0 && p_swap <= 1.0, "phase scans need P^S in (0, 1]");
    require(p_remove > 0.0 && p_remove < 1.0, "p_remove must lie in (0, 1)");
  }
};

inline constexpr double kReferenceInDegree = 10.0;   // <z>_1
inline constexpr double kReferenceGroupSize = 1000.0;  // N_1

/// Concrete primitives for a scan point: <z>_1 and N_1 fix the scale,
/// <z>_0 = b <z>_1, N_0 = c N_1, alpha_g chosen so that z*_g = <z>_g.
inline ModelParams phase_params(const PhaseFixed& f, double pa0, double pa1,
                                double z1 = kReferenceInDegree, double n1 = kReferenceGroupSize) {
  f.validate();
  ModelParams p;
  p.p_swap = {f.p_swap, f.p_swap};
  p.p_assort = {pa0, pa1};
  p.p_remove = {f.p_remove, f.p_remove};
  const std::array<double, 2> z{f.b * z1, z1};
  for (Group g : {0, 1}) p.alpha[g] = (1.0 - f.p_remove) / (f.p_remove * z[g]);
  p.group_sizes = {f.c * n1, n1};
  return p;
}

/// Mean-field verdict at one point of the (P^A_0, P^A_1) square.
inline CommunityType classify_point(const PhaseFixed& f, double pa0, double pa1) {
  return classify(omega_predicted(phase_params(f, pa0, pa1)).omega);
}

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  std::size_t resolution = 2;

  double width() const { return (max - min) / static_cast<double>(resolution); }
  double center(std::size_t k) const { return min + (static_cast<double>(k) + 0.5) * width(); }
  /// Index of the cell containing v (upper edge belongs to the last cell).
  std::size_t cell_of(double v) const {
    require(v >= min && v <= max, "value outside axis " + name);
    auto k = static_cast<std::size_t>(std::floor((v - min) / width()));
    return std::min(k, resolution - 1);
  }
};

/// Cell-centred classification of the unit square; cell (i, j) has
/// P^A_0 = x.center(i), P^A_1 = y.center(j).
struct PhaseGrid {
  PhaseFixed fixed;
  Axis x{"pa0"};
  Axis y{"pa1"};
  std::vector<CommunityType> cells;  // i-major: index i * y.resolution + j

  const CommunityType& at(std::size_t i, std::size_t j) const {
    return cells.at(i * y.resolution + j);
  }
  const CommunityType& cell_at(double pa0, double pa1) const {
    return at(x.cell_of(pa0), y.cell_of(pa1));
  }
  std::size_t count(Kind k) const {
    return static_cast<std::size_t>(
        std::count_if(cells.begin(), cells.end(), [k](const auto& t) { return t.kind == k; }));
  }
  bool uniform() const {
    return std::all_of(cells.begin(), cells.end(), [&](const auto& t) { return t == cells.front(); });
  }
};

inline PhaseGrid scan_grid(const PhaseFixed& fixed, std::size_t resolution, std::size_t jobs = 1) {
  fixed.validate();
  require(resolution >= 2, "grid resolution must be >= 2");
  PhaseGrid grid;
  grid.fixed = fixed;
  grid.x.resolution = grid.y.resolution = resolution;
  grid.cells.resize(resolution * resolution);
  parallel_for(resolution, jobs, [&](std::size_t i) {
    const double pa0 = grid.x.center(i);
    for (std::size_t j = 0; j < resolution; ++j)
      grid.cells[i * resolution + j] = classify_point(fixed, pa0, grid.y.center(j));
  });
  return grid;
}

// Critical swap probability.

enum class Boundary { Assortative, Disassortative, FirstCorePeriphery, SecondCorePeriphery };

inline constexpr std::array<Boundary, 4> kBoundaries{
    Boundary::Assortative, Boundary::Disassortative, Boundary::FirstCorePeriphery,
    Boundary::SecondCorePeriphery};

inline std::string_view boundary_name(Boundary b) {
  switch (b) {
    case Boundary::Assortative: return "A";
    case Boundary::Disassortative: return "D";
    case Boundary::FirstCorePeriphery: return "CP_first";
    case Boundary::SecondCorePeriphery: return "CP_second";
  }
  return "?";
}

/// Left minus right side of the four implicit equations for the swap
/// probability x at which A, D, CP (group 1 core) and CP (group 0 core) stop
/// fitting inside the unit square. Empty where a denominator vanishes.
inline std::array<std::optional<double>, 4> boundary_residuals(double x, double b, double c) {
  require(x > 0.0 && x < 1.0, "x must lie in (0, 1)");
  require(b > 0.0 && c > 0.0, "b and c must be positive");
  const double y = 1.0 - x;
  auto ratio = [](double num, double den, double rhs) -> std::optional<double> {
    if (den == 0.0) return std::nullopt;
    const double v = num / den - rhs;
    if (!std::isfinite(v)) return std::nullopt;
    return v;
  };
  std::array<std::optional<double>, 4> r;
  {
    const double inner = 1.0 + c - x + c * x;
    r[0] = ratio((1.0 - b) * (1.0 + x) * inner,
                 2.0 * x * (inner + b * (1.0 - c) * (1.0 + x)), 1.0);
  }
  r[1] = ratio(b * c * x * x + 0.5 * x * y * (b + 2.0 * b * c - 1.0) +
                   0.25 * y * y * (b * c + b - c - 1.0),
               x * x * (1.0 - b + b * c) + 0.5 * x * y * (c + 1.0 + b * c + b), 0.0);
  r[2] = ratio((1.0 - b * c) * x * x +
                   0.5 * x * y * (1.0 + 1.0 / (c + 1.0) - b / (c + 1.0) - b * c) +
                   0.25 * y * y * (c + 1.0 - b * c - b),
               x * x * (1.0 - b * c + b) + 0.5 * x * y * (c + 1.0 - b * c * c + b - b * c), 1.0);
  r[3] = ratio(b * c * x * x + 0.5 * x * y * (2.0 * b * c + b - c) +
                   0.25 * y * y * (b * c - c + b - 1.0),
               x * x * (c + b * c - b) + 0.5 * x * y * (c + 1.0 + b * c - b), 0.0);
  return r;
}

struct RootSearch {
  std::optional<double> root;
  std::optional<std::pair<double, double>> bracket;  // scan bracket containing the root
  int iterations = 0;
  double residual = 0.0;
};

struct CriticalSwap {
  double b = 0.0;
  double c = 0.0;
  bool relabeled = false;  // computed on (1/b, 1/c) because b > 1
  std::array<RootSearch, 4> candidates;
  double ps_star = 0.0;
  Boundary limiting = Boundary::Assortative;
};

namespace detail {

inline constexpr double kScanStep = 1e-3;

template <class F>
RootSearch smallest_root(F&& f, double tol) {
  RootSearch out;
  const int points = static_cast<int>(std::lround(1.0 / kScanStep)) - 1;
  std::optional<std::pair<double, double>> prev;  // (x, f(x))
  for (int k = 1; k <= points; ++k) {
    const double x = k * kScanStep;
    const auto fx = f(x);
    if (!fx) {
      prev.reset();
      continue;
    }
    if (*fx == 0.0) {
      out.root = x;
      out.bracket = {{x, x}};
      return out;
    }
    if (prev && (prev->second < 0.0) != (*fx < 0.0)) {
      double lo = prev->first, hi = x, flo = prev->second;
      const double bound = std::min(std::abs(prev->second), std::abs(*fx));
      int it = 0;
      double mid = 0.5 * (lo + hi);
      std::optional<double> fmid = f(mid);
      while (hi - lo > tol && it < 200 && fmid) {
        ++it;
        if (*fmid == 0.0) break;
        if ((*fmid < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = *fmid;
        } else {
          hi = mid;
        }
        mid = 0.5 * (lo + hi);
        fmid = f(mid);
      }
      // A sign change across a pole grows under bisection; skip it.
      if (fmid && std::abs(*fmid) < bound) {
        out.root = mid;
        out.bracket = {{prev->first, x}};
        out.iterations = it;
        out.residual = *fmid;
        return out;
      }
    }
    prev = {{x, *fx}};
  }
  return out;
}

}  // namespace detail

/// Smallest root of each implicit boundary equation, found by a uniform sign
/// scan of (0, 1) and bisection to |dx| < tol; P^S* is the minimum found.
/// For b > 1 the relabeled problem (1/b, 1/c) is solved and the two CP
/// candidates are mapped back.
inline CriticalSwap critical_swap(double b, double c, double tol = 1e-10) {
  require(std::isfinite(b) && b > 0.0 && std::isfinite(c) && c > 0.0, "b and c must be positive");
  require(tol > 0.0, "tolerance must be positive");
  CriticalSwap cs;
  cs.b = b;
  cs.c = c;
  cs.relabeled = b > 1.0;
  const double bb = cs.relabeled ? 1.0 / b : b;
  const double cc = cs.relabeled ? 1.0 / c : c;
  for (std::size_t k = 0; k < 4; ++k) {
    cs.candidates[k] = detail::smallest_root(
        [&](double x) { return boundary_residuals(x, bb, cc)[k]; }, tol);
  }
  if (cs.relabeled) std::swap(cs.candidates[2], cs.candidates[3]);

  std::optional<double> best;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& root = cs.candidates[k].root;
    if (root && (!best || *root < *best)) {
      best = root;
      cs.limiting = kBoundaries[k];
    }
  }
  require(best.has_value(), "no critical swap probability in (0, 1) for b=" + std::to_string(b) +
                                ", c=" + std::to_string(c));
  cs.ps_star = *best;
  return cs;
}

// Boundary extraction.

struct Polyline {
  std::string between;  // "A|SB1": the two cell labels, sorted
  std::vector<std::array<double, 2>> points;
};

/// Stair-step polylines along cell edges separating cells with different
/// labels, one set per label pair. Coordinates are (P^A_0, P^A_1).
inline std::vector<Polyline> extract_boundaries(const PhaseGrid& grid) {
  const std::size_t nx = grid.x.resolution, ny = grid.y.resolution;
  require(grid.cells.size() == nx * ny, "grid is incomplete");
  using Vertex = std::pair<std::size_t, std::size_t>;
  std::map<std::string, std::vector<std::pair<Vertex, Vertex>>> segments;

  auto add = [&](const CommunityType& a, const CommunityType& b, Vertex u, Vertex v) {
    if (a == b) return;
    std::string la = type_label(a), lb = type_label(b);
    if (lb < la) std::swap(la, lb);
    segments[la + "|" + lb].push_back({u, v});
  };
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      if (i + 1 < nx) add(grid.at(i, j), grid.at(i + 1, j), {i + 1, j}, {i + 1, j + 1});
      if (j + 1 < ny) add(grid.at(i, j), grid.at(i, j + 1), {i, j + 1}, {i + 1, j + 1});
    }

  std::vector<Polyline> out;
  for (auto& [pair, segs] : segments) {
    std::map<Vertex, std::vector<std::size_t>> incident;
    for (std::size_t k = 0; k < segs.size(); ++k) {
      incident[segs[k].first].push_back(k);
      incident[segs[k].second].push_back(k);
    }
    std::vector<bool> used(segs.size(), false);
    auto to_point = [&](Vertex v) -> std::array<double, 2> {
      return {grid.x.min + static_cast<double>(v.first) * grid.x.width(),
              grid.y.min + static_cast<double>(v.second) * grid.y.width()};
    };
    auto walk = [&](Vertex start) {
      Polyline line{pair, {to_point(start)}};
      Vertex at = start;
      for (;;) {
        auto& inc = incident[at];
        auto next = std::find_if(inc.begin(), inc.end(), [&](std::size_t k) { return !used[k]; });
        if (next == inc.end()) break;
        used[*next] = true;
        at = segs[*next].first == at ? segs[*next].second : segs[*next].first;
        line.points.push_back(to_point(at));
        if (incident[at].size() != 2) break;
      }
      out.push_back(std::move(line));
    };
    // Open chains start at vertices that are not simple pass-throughs.
    for (auto& [v, inc] : incident)
      if (inc.size() != 2)
        while (std::any_of(inc.begin(), inc.end(), [&](std::size_t k) { return !used[k]; })) walk(v);
    for (std::size_t k = 0; k < segs.size(); ++k)
      if (!used[k]) walk(segs[k].first);
  }
  return out;
}

}  // namespace dircomm
