#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bluefeed/model.hpp"

namespace bluefeed {

/// Optimal power allocation for one channel realization.
struct AllocationResult {
    GainVector gains;              // original sensor order
    std::size_t active_count = 0;  // K1; sensors ranked below it get a_i = 0
    double rho_value = 0.0;        // rho(K1), 0 when K1 == 0
    // sort_permutation[r] is the original index of the sensor ranked r-th by delta.
    std::vector<std::size_t> sort_permutation;
};

/// Water level of the n best-ranked sensors (1 <= n <= sizes):
///   (P_total + sum_{i<=n} beta_i/delta_i) / sum_{i<=n} beta_i/sqrt(delta_i).
/// Throws ZeroDelta when one of the first n deltas is zero.
double rho(std::size_t n, std::span<const double> sorted_beta, std::span<const double> sorted_delta,
           double p_total);

/// Largest n in [1, K'] with sqrt(delta_n) rho(n) > 1, where K' counts the
/// strictly positive deltas. Returns 0 only when K' == 0.
std::size_t find_k1(std::span<const double> sorted_beta, std::span<const double> sorted_delta, double p_total);

/// Sensors ordered by non-increasing delta, ties kept in index order, zero deltas last.
std::vector<std::size_t> rank_by_delta(std::span<const double> delta);

/// Gains minimizing the BLUE variance under sum_i P_i <= P_total.
/// A channel where every delta is zero yields all-zero gains with K1 == 0.
AllocationResult optimal_gains(const NetworkParams& params, const ChannelRealization& chan);

}  // namespace bluefeed
