#include "bluefeed/allocator.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>
#include <string>

#include "bluefeed/errors.hpp"

namespace bluefeed {

double rho(std::size_t n, std::span<const double> sorted_beta, std::span<const double> sorted_delta,
           double p_total) {
    if (n == 0 || n > sorted_beta.size() || n > sorted_delta.size())
        throw InvalidArgument("rho: n=" + std::to_string(n) + " outside [1, K]");
    CompensatedSum numerator;
    CompensatedSum denominator;
    numerator.add(p_total);
    for (std::size_t i = 0; i < n; ++i) {
        const double delta = sorted_delta[i];
        if (!(delta > 0.0)) throw ZeroDelta("rho: delta of ranked sensor " + std::to_string(i + 1) + " is zero");
        numerator.add(sorted_beta[i] / delta);
        denominator.add(sorted_beta[i] / std::sqrt(delta));
    }
    return numerator.value() / denominator.value();
}

std::size_t find_k1(std::span<const double> sorted_beta, std::span<const double> sorted_delta, double p_total) {
    const std::size_t positive = static_cast<std::size_t>(
        std::find_if(sorted_delta.begin(), sorted_delta.end(), [](double d) { return !(d > 0.0); }) -
        sorted_delta.begin());
    for (std::size_t n = positive; n >= 1; --n) {
        if (std::sqrt(sorted_delta[n - 1]) * rho(n, sorted_beta, sorted_delta, p_total) > 1.0) {
            // Two-sided condition: the next ranked sensor must fail the test.
            assert(n == positive ||
                   std::sqrt(sorted_delta[n]) * rho(n + 1, sorted_beta, sorted_delta, p_total) <= 1.0);
            return n;
        }
    }
    return 0;
}

std::vector<std::size_t> rank_by_delta(std::span<const double> delta) {
    std::vector<std::size_t> order(delta.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
        const bool lhs_pos = delta[lhs] > 0.0;
        const bool rhs_pos = delta[rhs] > 0.0;
        if (lhs_pos != rhs_pos) return lhs_pos;
        return delta[lhs] > delta[rhs];
    });
    return order;
}

AllocationResult optimal_gains(const NetworkParams& params, const ChannelRealization& chan) {
    if (!(params.total_power > 0.0)) throw InvalidArgument("total power must be positive");
    const DerivedSnr snr = compute_snrs(params, chan);
    const std::size_t k = params.size();

    AllocationResult out;
    out.sort_permutation = rank_by_delta(snr.delta);
    out.gains = GainVector::zeros(k);

    std::vector<double> sorted_beta(k);
    std::vector<double> sorted_delta(k);
    for (std::size_t r = 0; r < k; ++r) {
        sorted_beta[r] = snr.osnr[out.sort_permutation[r]];
        sorted_delta[r] = snr.delta[out.sort_permutation[r]];
    }

    out.active_count = find_k1(sorted_beta, sorted_delta, params.total_power);
    if (out.active_count == 0) return out;

    const std::size_t k1 = out.active_count;
    out.rho_value = rho(k1, sorted_beta, sorted_delta, params.total_power);

    // sqrt(delta_i) rho - 1 loses most of its digits when the water level sits
    // just above 1/sqrt(delta_i) (low SNR). The same quantity is evaluated as
    //   (sqrt(delta_i) P + sum_j beta_j (sqrt(delta_i) - sqrt(delta_j)) / delta_j) / sum_j beta_j / sqrt(delta_j),
    // where the j == i term vanishes exactly.
    std::vector<double> root(k1);
    CompensatedSum denominator;
    for (std::size_t r = 0; r < k1; ++r) {
        root[r] = std::sqrt(sorted_delta[r]);
        denominator.add(sorted_beta[r] / root[r]);
    }
    for (std::size_t r = 0; r < k1; ++r) {
        CompensatedSum numerator;
        numerator.add(root[r] * params.total_power);
        for (std::size_t j = 0; j < k1; ++j)
            if (j != r) numerator.add(sorted_beta[j] * (root[r] - root[j]) / sorted_delta[j]);
        // Roundoff can push the last active sensor marginally below zero.
        const double excess = std::max(0.0, numerator.value() / denominator.value());
        const std::size_t i = out.sort_permutation[r];
        out.gains.a[i] = std::sqrt(excess / (snr.csnr[i] * params.obs_noise_vars[i]));
    }
    return out;
}

}  // namespace bluefeed
