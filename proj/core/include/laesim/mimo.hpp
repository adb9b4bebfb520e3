#pragma once

#include <Eigen/Core>
#include <functional>
#include <span>
#include <vector>

#include "laesim/channel.hpp"

namespace laesim {

/// Fleet transmit weights, ||w||^2 = power_budget_w.
struct Precoder {
  int fleet = 0;
  Eigen::VectorXcd w;
  double power_budget_w = 0.0;
};

struct Combiner {
  int fleet = 0;
  Eigen::VectorXcd u;
};

struct RatePoint {
  std::vector<double> sinr;         // linear, per fleet
  std::vector<double> rate_bps_hz;  // log2(1 + sinr)
  double sum_rate_bps_hz = 0.0;
};

/// Transmit beamformer maximizing received signal power: w = sqrt(P) v1 with
/// v1 the dominant right singular vector of H, phase-normalized so the first
/// nonzero entry is real-positive. Degenerates to classical MRT for a
/// single-output receiver.
Precoder mrt_precoder(const StackedChannel& h, double power_w);

/// MMSE weights for fleet k given every fleet's effective channel
/// h_j = H_j w_j: u_k = (sum_j h_j h_j^H + noise I)^-1 h_k.
Combiner mmse_combiner(const std::vector<Eigen::VectorXcd>& effective, int k,
                       double noise_w);

/// |u^H h_k|^2 / (sum_{j != k} |u^H h_j|^2 + noise ||u||^2).
double sinr(int k, const std::vector<Eigen::VectorXcd>& effective,
            const Combiner& comb, double noise_w);

/// Full slot chain: MRT precoders, MMSE combiners, SINRs, rates for every
/// fleet over a common serving set.
RatePoint slot_rates(const std::vector<StackedChannel>& channels,
                     const std::vector<double>& power_w, double noise_w);

/// Per-slot fleet channels of a scenario slice (common serving set per slot).
struct SlotChannels {
  std::vector<StackedChannel> per_fleet;
};

/// Precomputed unit-power effective vectors H_k v1_k of one slot and their
/// Gram matrix. The MRT direction does not depend on the power budget, so
/// rate evaluation at any power reduces to small solves on the Gram.
struct SlotEffective {
  std::vector<Eigen::VectorXcd> unit_effective;
  Eigen::MatrixXcd gram;  // gram(i, j) = unit_effective[i]^H unit_effective[j]
};

SlotEffective effective_directions(const std::vector<StackedChannel>& channels);

/// Rates when every fleet transmits with budget power_w over precomputed
/// directions, via the MMSE SINR quadratic form
/// h_k^H (sum_{j != k} h_j h_j^H + noise I)^-1 h_k reduced to the Gram;
/// agrees with slot_rates at the same powers up to roundoff.
RatePoint rates_at_power(const SlotEffective& eff, double power_w, double noise_w);

enum class PowerMetric { PerFleet, Sum };

struct PowerBracket {
  double min_w = 1e-9;
  double max_w = 1e9;
};

struct MinPowerResult {
  bool reachable = false;
  double power_w = 0.0;
};

/// Bisection on log10(P) to tol_db for the smallest P with
/// metric_at_power(P) >= target; metric must be non-decreasing in P.
/// Unreachable if the bracket maximum falls short.
MinPowerResult min_power_for_rate(const std::function<double(double)>& metric_at_power,
                                  double target, PowerBracket bracket = {},
                                  double tol_db = 0.01);

/// Same search over a slice of slots: both fleets use a common budget P and
/// the metric is the time-averaged per-fleet minimum (or sum) rate. The slice
/// channels are fixed inputs, so every probe sees the same fading.
MinPowerResult min_power_for_rate(std::span<const SlotChannels> slots, double target,
                                  PowerMetric metric, double noise_w,
                                  PowerBracket bracket = {}, double tol_db = 0.01);

}  // namespace laesim
