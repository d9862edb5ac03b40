#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dircomm/error.hpp"
#include "dircomm/metrics.hpp"
#include "dircomm/params.hpp"

namespace dircomm {

/// Equilibrium mean in-degree (1 - P^R) / (alpha P^R); 1/alpha at P^R = 1/2.
inline double z_fixed_point(double alpha, double p_remove) {
  require(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
  require(p_remove > 0.0 && p_remove < 1.0, "p_remove must lie in (0, 1)");
  return (1.0 - p_remove) / (alpha * p_remove);
}

/// Equilibrium fraction of group r's in-edges that come from group r:
///
///   beta_r = [P^S P^A + (1-P^S)(1-P^R)]
///          / [P^S (P^A + (1-P^A) N_s/N_r) + (1-P^S)(1-P^R) N/N_r]
///
/// At P^S = 1 this is P^A / (P^A + (1-P^A) N_s/N_r); at P^S = 0 it is N_r/N.
inline double beta_equilibrium(const ModelParams& p, Group r) {
  p.validate();
  const Group s = other(r);
  const double ps = p.p_swap[r], pa = p.p_assort[r], add = 1.0 - p.p_remove[r];
  const double nr = p.group_sizes[r], ns = p.group_sizes[s], n = p.total_size();
  const double num = ps * pa + (1.0 - ps) * add;
  const double den = ps * (pa + (1.0 - pa) * ns / nr) + (1.0 - ps) * add * n / nr;
  require(den > 0.0, "beta_equilibrium: non-positive denominator for group " + std::to_string(r));
  const double beta = num / den;
  require(beta >= 0.0 && beta <= 1.0, "beta_equilibrium: result outside [0, 1]");
  return beta;
}

struct MeanFieldSolution {
  std::array<double, 2> beta{};
  std::array<double, 2> z_star{};
  DensityMatrix omega;        // N_r denominators on the diagonal (large-N form)
  DensityMatrix omega_exact;  // N_r - 1 denominators on the diagonal
  double b = 0.0;             // <z>_0 / <z>_1
  double c = 0.0;             // N_0 / N_1
};

/// Predicted block counts e_rr = N_r z_r beta_r, e_sr = N_r z_r (1 - beta_r).
inline BlockCounts<double> predicted_counts(const ModelParams& p, const std::array<double, 2>& beta,
                                            const std::array<double, 2>& z) {
  BlockCounts<double> e;
  for (Group r : {0, 1}) {
    const double in = p.group_sizes[r] * z[r];
    e(r, r) = in * beta[r];
    e(other(r), r) = in * (1.0 - beta[r]);
  }
  return e;
}

inline MeanFieldSolution omega_predicted(const ModelParams& p) {
  p.validate();
  MeanFieldSolution sol;
  for (Group r : {0, 1}) {
    sol.beta[r] = beta_equilibrium(p, r);
    sol.z_star[r] = z_fixed_point(p.alpha[r], p.p_remove[r]);
  }
  const auto e = predicted_counts(p, sol.beta, sol.z_star);
  sol.omega = density_from_counts(e, p.group_sizes, Normalization::PossiblePairsLargeN);
  if (p.group_sizes[0] >= 2.0 && p.group_sizes[1] >= 2.0) {
    sol.omega_exact = density_from_counts(e, p.group_sizes, Normalization::PossiblePairs);
  } else {
    sol.omega_exact = sol.omega;
  }
  sol.b = sol.z_star[0] / sol.z_star[1];
  sol.c = p.group_sizes[0] / p.group_sizes[1];
  return sol;
}

/// One-step probabilities for the within-group count e_rr, given the current
/// assortative fraction beta_r. `loss_change` is per existing edge; multiply by
/// the mean in-degree to get the expected loss.
struct StepProbabilities {
  double gain_swap = 0.0;
  double loss_swap = 0.0;
  double gain_change = 0.0;
  double loss_change = 0.0;
};

inline StepProbabilities step_probabilities(const ModelParams& p, double beta_r, Group r) {
  p.validate();
  require(beta_r >= 0.0 && beta_r <= 1.0, "beta_r must lie in [0, 1]");
  const Group s = other(r);
  const double n = p.total_size();
  const double fr = p.group_sizes[r] / n, fs = p.group_sizes[s] / n;
  const double ps = p.p_swap[r], pa = p.p_assort[r], pr = p.p_remove[r];
  StepProbabilities out;
  out.gain_swap = fr * ps * pa * (1.0 - beta_r) * fr;
  out.loss_swap = fr * ps * (1.0 - pa) * beta_r * fs;
  out.gain_change = (1.0 - ps) * (1.0 - pr) * fr * fr;
  out.loss_change = (1.0 - ps) * pr * fr * beta_r * p.alpha[r];
  return out;
}

/// e_rr(t + dt) = B e_rr(t) + C with the total in-edge count of group r held fixed.
struct RecurrenceCoefficients {
  double B = 0.0;
  double C = 0.0;
};

inline RecurrenceCoefficients recurrence_coefficients(const ModelParams& p, Group r,
                                                      double total_in) {
  p.validate();
  require(total_in > 0.0, "total_in must be positive");
  const Group s = other(r);
  const double n = p.total_size();
  const double fr = p.group_sizes[r] / n, fs = p.group_sizes[s] / n;
  const double ps = p.p_swap[r], pa = p.p_assort[r], add = 1.0 - p.p_remove[r];
  RecurrenceCoefficients rc;
  rc.B = 1.0 - ps * fr / total_in * (pa * fr + (1.0 - pa) * fs) - (1.0 - ps) * add * fr / total_in;
  rc.C = (ps * pa + (1.0 - ps) * add) * fr * fr;
  return rc;
}

struct RecurrenceTrajectory {
  RecurrenceCoefficients coefficients;
  std::vector<double> values;  // e_rr after 0, 1, ..., steps steps
  double limit = 0.0;          // C / (1 - B)
};

/// Closed-form solution e_rr(k) = B^k e_rr(0) + (B^k - 1)/(B - 1) C.
inline RecurrenceTrajectory recurrence_solve(const ModelParams& p, Group r, double e_rr0,
                                             double total_in, std::size_t steps) {
  const auto rc = recurrence_coefficients(p, r, total_in);
  require(rc.B < 1.0, "recurrence: B >= 1, no equilibrium");
  require(rc.B > -1.0, "recurrence: B <= -1, iteration does not converge");
  RecurrenceTrajectory tr;
  tr.coefficients = rc;
  tr.limit = rc.C / (1.0 - rc.B);
  tr.values.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double bk = std::pow(rc.B, static_cast<double>(k));
    tr.values.push_back(bk * e_rr0 + (1.0 - bk) * tr.limit);
  }
  return tr;
}

/// Maps parameters with arbitrary P^R onto P^R = 1/2 with the same z* and beta:
/// alpha' = alpha P^R / (1 - P^R) and P^S' = P^S / (2 (1-P^S)(1-P^R) + P^S).
/// Throws when alpha' leaves (0, 1], which happens for large alpha and P^R.
inline ModelParams reparameterize_remove(const ModelParams& p) {
  p.validate();
  ModelParams q = p;
  for (Group g : {0, 1}) {
    const double pr = p.p_remove[g], ps = p.p_swap[g];
    q.alpha[g] = p.alpha[g] * pr / (1.0 - pr);
    q.p_swap[g] = ps / (2.0 * (1.0 - ps) * (1.0 - pr) + ps);
    q.p_remove[g] = 0.5;
    require(q.alpha[g] <= 1.0, "reparameterize_remove: mapped alpha exceeds 1 for group " +
                                   std::to_string(g));
  }
  return q;
}

}  // namespace dircomm
