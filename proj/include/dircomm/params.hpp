#pragma once

#include <array>
#include <cmath>
#include <string>

#include "dircomm/error.hpp"
#include "dircomm/graph.hpp"

namespace dircomm {

/// Primitive model parameters, one entry per group.
struct ModelParams {
  std::array<double, 2> p_swap{1.0, 1.0};    // P^S_g in [0, 1]
  std::array<double, 2> p_assort{0.5, 0.5};  // P^A_g in [0, 1]
  std::array<double, 2> alpha{0.1, 0.1};     // removal probability per in-edge, (0, 1]
  std::array<double, 2> p_remove{0.5, 0.5};  // P^R_g in (0, 1)
  std::array<double, 2> group_sizes{1.0, 1.0};

  double total_size() const { return group_sizes[0] + group_sizes[1]; }

  void validate() const {
    for (int g = 0; g < 2; ++g) {
      const std::string tag = "[" + std::to_string(g) + "]";
      require(p_swap[g] >= 0.0 && p_swap[g] <= 1.0, "p_swap" + tag + " must lie in [0, 1]");
      require(p_assort[g] >= 0.0 && p_assort[g] <= 1.0, "p_assort" + tag + " must lie in [0, 1]");
      require(alpha[g] > 0.0 && alpha[g] <= 1.0, "alpha" + tag + " must lie in (0, 1]");
      require(p_remove[g] > 0.0 && p_remove[g] < 1.0, "p_remove" + tag + " must lie in (0, 1)");
      require(std::isfinite(group_sizes[g]) && group_sizes[g] >= 1.0,
              "group_sizes" + tag + " must be >= 1");
    }
  }

  /// Throws unless the group sizes equal the graph's label counts.
  void check_matches(const LabeledDigraph& g) const {
    for (Group r : {0, 1})
      require(group_sizes[r] == static_cast<double>(g.group_size(r)),
              "parameter group sizes do not match the graph");
  }

  /// Same parameters for both groups.
  static ModelParams symmetric(double ps, double pa, double a, std::array<double, 2> sizes) {
    ModelParams p;
    p.p_swap = {ps, ps};
    p.p_assort = {pa, pa};
    p.alpha = {a, a};
    p.group_sizes = sizes;
    return p;
  }
};

}  // namespace dircomm
