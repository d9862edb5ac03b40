#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "dircomm/error.hpp"
#include "dircomm/graph.hpp"
#include "dircomm/metrics.hpp"
#include "dircomm/params.hpp"
#include "dircomm/rng.hpp"

namespace dircomm {

/// Step counter; one step advances time by 1/N.
class SimClock {
 public:
  explicit SimClock(std::size_t node_count) : n_(node_count) {
    require(node_count > 0, "clock needs a positive node count");
  }
  void tick() { ++steps_; }
  std::uint64_t steps() const { return steps_; }
  double time() const { return static_cast<double>(steps_) / static_cast<double>(n_); }

 private:
  std::size_t n_;
  std::uint64_t steps_ = 0;
};

enum class Move { Swap, Remove, Add };

struct MoveOutcome {
  NodeId focal = 0;
  Move move = Move::Swap;
  bool noop = false;
  std::vector<Edge> added;
  std::vector<Edge> removed;
};

/// One focal-node update. The focal node i is uniform; with probability
/// P^S(g(i)) a swap is attempted, otherwise a change move (remove with
/// probability P^R(g(i)), else add). Degenerate moves are recorded as no-ops;
/// the clock advances either way.
template <std::uniform_random_bit_generator G>
MoveOutcome step(LabeledDigraph& g, const ModelParams& params, G& gen, SimClock& clock) {
#ifdef DIRCOMM_INVARIANT_CHECKS
  params.check_matches(g);
#endif
  MoveOutcome out;
  const NodeId i = uniform_below<NodeId>(gen, static_cast<NodeId>(g.node_count()));
  const Group gi = g.group(i);
  out.focal = i;
  clock.tick();

  if (uniform01(gen) < params.p_swap[gi]) {
    out.move = Move::Swap;
    // Existing edge first, then the candidate.
    auto k = sample_in_edge(g, i, gen);
    if (!k) {
      out.noop = true;
      return out;
    }
    auto j = sample_non_in_edge(g, i, gen);
    if (!j) {
      out.noop = true;
      return out;
    }
    bool keep_candidate;
    if (g.group(*k) == g.group(*j)) {
      keep_candidate = bernoulli(gen, 0.5);
    } else {
      const bool assortative = uniform01(gen) < params.p_assort[gi];
      const bool candidate_same = g.group(*j) == gi;
      keep_candidate = assortative == candidate_same;
    }
    if (keep_candidate) {
      g.remove_edge(*k, i);
      g.add_edge(*j, i);
      out.removed.push_back({*k, i});
      out.added.push_back({*j, i});
    } else {
      out.noop = true;
    }
    return out;
  }

  if (uniform01(gen) < params.p_remove[gi]) {
    out.move = Move::Remove;
    const std::size_t deg = g.in_degree(i);
    std::size_t victims = 0;
    if (deg > 0) victims = std::binomial_distribution<std::size_t>(deg, params.alpha[gi])(gen);
    // Binomial count, then victims uniformly without replacement.
    for (std::size_t v = 0; v < victims; ++v) {
      const std::size_t slot = uniform_below<std::size_t>(gen, g.in_degree(i));
      out.removed.push_back({g.remove_in_edge_at(i, slot), i});
    }
    out.noop = victims == 0;
    return out;
  }

  out.move = Move::Add;
  auto j = sample_non_in_edge(g, i, gen);
  if (!j) {
    out.noop = true;
    return out;
  }
  g.add_edge(*j, i);
  out.added.push_back({*j, i});
  return out;
}

/// Reverts a step's edge changes (the clock is not rewound).
inline void undo(LabeledDigraph& g, const MoveOutcome& outcome) {
  for (const Edge& e : outcome.added) g.remove_edge(e.source, e.target);
  for (const Edge& e : outcome.removed) g.add_edge(e.source, e.target);
}

/// beta_r = e_rr / (e_rr + e_sr); empty when group r has no in-edges.
inline std::array<std::optional<double>, 2> empirical_beta(const BlockCounts<std::size_t>& e) {
  std::array<std::optional<double>, 2> beta;
  for (Group r : {0, 1}) {
    const std::size_t in = e.into(r);
    if (in > 0) beta[r] = static_cast<double>(e(r, r)) / static_cast<double>(in);
  }
  return beta;
}

inline std::array<std::optional<double>, 2> empirical_beta(const LabeledDigraph& g) {
  return empirical_beta(g.block_counts());
}

/// Mean in-degree per group, (e_rr + e_sr) / N_r.
inline std::array<double, 2> mean_in_degree(const LabeledDigraph& g) {
  const auto& e = g.block_counts();
  return {static_cast<double>(e.into(0)) / static_cast<double>(g.group_size(0)),
          static_cast<double>(e.into(1)) / static_cast<double>(g.group_size(1))};
}

struct TrajectorySample {
  double t = 0.0;
  DensityMatrix omega;
  std::array<double, 2> z{};
  std::array<std::optional<double>, 2> beta;
};

struct TrajectoryRecord {
  std::size_t sweeps = 0;
  std::size_t sample_every = 1;
  std::uint64_t steps = 0;
  std::vector<TrajectorySample> samples;
};

inline TrajectorySample take_sample(const LabeledDigraph& g, double t) {
  return {t, density(g), mean_in_degree(g), empirical_beta(g)};
}

/// Runs sweeps x N steps, sampling at t = 0 and every `sample_every` sweeps.
template <std::uniform_random_bit_generator G>
TrajectoryRecord run(LabeledDigraph& g, const ModelParams& params, std::size_t sweeps,
                     std::size_t sample_every, G& gen) {
  require(sweeps >= 1, "sweeps must be >= 1");
  require(sample_every >= 1, "sample_every must be >= 1");
  params.validate();
  params.check_matches(g);

  TrajectoryRecord rec{sweeps, sample_every, 0, {}};
  rec.samples.reserve(sweeps / sample_every + 1);
  rec.samples.push_back(take_sample(g, 0.0));
  SimClock clock(g.node_count());
  const std::size_t n = g.node_count();
  for (std::size_t sweep = 1; sweep <= sweeps; ++sweep) {
    for (std::size_t k = 0; k < n; ++k) step(g, params, gen, clock);
#ifdef DIRCOMM_INVARIANT_CHECKS
    g.check_invariants();
#endif
    if (sweep % sample_every == 0) rec.samples.push_back(take_sample(g, clock.time()));
  }
  rec.steps = clock.steps();
  return rec;
}

/// Averages over samples with t > (1 - window) * sweeps.
struct WindowAverage {
  Matrix2 omega{};
  std::array<double, 2> z{};
  std::array<std::optional<double>, 2> beta;
  std::size_t samples = 0;
};

inline WindowAverage window_average(const TrajectoryRecord& rec, double window) {
  require(window > 0.0 && window <= 1.0, "averaging window must lie in (0, 1]");
  const double start = (1.0 - window) * static_cast<double>(rec.sweeps);
  WindowAverage avg;
  std::array<double, 2> beta_sum{};
  std::array<std::size_t, 2> beta_n{};
  for (const auto& s : rec.samples) {
    if (!(s.t > start)) continue;
    ++avg.samples;
    for (Group r : {0, 1}) {
      for (Group c : {0, 1}) avg.omega[r][c] += s.omega.w[r][c];
      avg.z[r] += s.z[r];
      if (s.beta[r]) {
        beta_sum[r] += *s.beta[r];
        ++beta_n[r];
      }
    }
  }
  require(avg.samples > 0, "no samples inside the averaging window");
  const double m = static_cast<double>(avg.samples);
  for (Group r : {0, 1}) {
    for (Group c : {0, 1}) avg.omega[r][c] /= m;
    avg.z[r] /= m;
    if (beta_n[r] > 0) avg.beta[r] = beta_sum[r] / static_cast<double>(beta_n[r]);
  }
  return avg;
}

}  // namespace dircomm
