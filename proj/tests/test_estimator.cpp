#include <cmath>
#include <limits>

#include "bluefeed/errors.hpp"
#include "bluefeed/estimator.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace bluefeed;

namespace {

NetworkParams fixed_k5() {
    NetworkParams p;
    p.prior_variance = 1.0;
    p.obs_gains = {1.1, 0.7, -0.9, 1.3, 0.95};
    p.obs_noise_vars = {0.08, 0.12, 0.1, 0.15, 0.06};
    p.chan_noise_vars = {0.5, 0.5, 0.5, 0.5, 0.5};
    p.total_power = 1.0;
    return p;
}

}  // namespace

TEST_CASE("blue_estimate inverts a noiseless single link") {
    NetworkParams p;
    p.obs_gains = {0.7};
    p.obs_noise_vars = {0.1};
    p.chan_noise_vars = {1e-300};
    const GainVector a({1.3});
    const ChannelRealization c{{0.4}};
    const double theta = -0.42;
    const double est = blue_estimate(p, a, c, {{1.3 * 0.4 * 0.7 * theta}});
    CHECK(est == doctest::Approx(theta).epsilon(1e-12));
}

TEST_CASE("blue_estimate of two identical sensors equals the single-sensor estimate") {
    NetworkParams one;
    one.obs_gains = {0.9};
    one.obs_noise_vars = {0.1};
    one.chan_noise_vars = {0.3};
    NetworkParams two;
    two.obs_gains = {0.9, 0.9};
    two.obs_noise_vars = {0.1, 0.1};
    two.chan_noise_vars = {0.3, 0.3};
    const double single = blue_estimate(one, GainVector({0.8}), {{1.2}}, {{0.37}});
    const double pair = blue_estimate(two, GainVector({0.8, 0.8}), {{1.2, 1.2}}, {{0.37, 0.37}});
    CHECK(pair == doctest::Approx(single).epsilon(1e-15));
}

TEST_CASE("blue_estimate matches the weighted least-squares oracle") {
    Rng rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const NetworkParams p = oracle::random_network(rng, 3);
        const GainVector a = oracle::random_gains(rng, 3);
        const ChannelRealization c = oracle::random_channel(rng, 3);
        std::vector<double> y{rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)};
        const double want = oracle::wls_estimate(p, a, c, y);
        CHECK(blue_estimate(p, a, c, {y}) == doctest::Approx(want).epsilon(1e-10));
        CHECK(blue_variance(p, a, c) == doctest::Approx(oracle::wls_variance(p, a, c)).epsilon(1e-10));
    }
}

TEST_CASE("blue_estimate with every sensor silent") {
    NetworkParams p = fixed_k5();
    CHECK_THROWS_AS(blue_estimate(p, GainVector::zeros(5), {{1, 1, 1, 1, 1}}, {{1, 1, 1, 1, 1}}), AllSilent);
    CHECK_THROWS_AS(blue_estimate(p, GainVector({1, 1, 1, 1, 1}), {{0, 0, 0, 0, 0}}, {{1, 1, 1, 1, 1}}),
                    AllSilent);
}

TEST_CASE("blue_variance edge cases") {
    NetworkParams p;
    p.prior_variance = 1.0;
    p.obs_gains = {0.8};
    p.obs_noise_vars = {0.1};
    p.chan_noise_vars = {1e-12};
    const ChannelRealization c{{1e-4}};
    CHECK(std::isinf(blue_variance(p, GainVector::zeros(1), c)));
    // Large gain: only the observation noise remains, sigma_o^2 / h^2.
    const double floor = 0.1 / (0.8 * 0.8);
    CHECK(blue_variance(p, GainVector({1e6}), c) == doctest::Approx(floor).epsilon(1e-9));
}

TEST_CASE("blue_variance is non-increasing in every gain") {
    Rng rng(22);
    for (int trial = 0; trial < 300; ++trial) {
        const NetworkParams p = oracle::random_network(rng, 5);
        const ChannelRealization c = oracle::random_channel(rng, 5);
        const GainVector a = oracle::random_gains(rng, 5);
        GainVector more = a;
        const auto i = static_cast<std::size_t>(rng.below(5));
        more.a[i] += rng.uniform(0.0, 1.0);
        CHECK(blue_variance(p, more, c) <= blue_variance(p, a, c));
    }
}

TEST_CASE("silent sensors can be deleted without changing anything") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const NetworkParams p = oracle::random_network(rng, 4);
        const ChannelRealization c = oracle::random_channel(rng, 4);
        GainVector a = oracle::random_gains(rng, 4);
        a.a[2] = 0.0;
        const std::vector<double> y{rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1), rng.normal(0, 1)};

        NetworkParams q = p;
        ChannelRealization d = c;
        GainVector b = a;
        std::vector<double> z = y;
        q.obs_gains.erase(q.obs_gains.begin() + 2);
        q.obs_noise_vars.erase(q.obs_noise_vars.begin() + 2);
        q.chan_noise_vars.erase(q.chan_noise_vars.begin() + 2);
        d.g.erase(d.g.begin() + 2);
        b.a.erase(b.a.begin() + 2);
        z.erase(z.begin() + 2);

        CHECK(blue_variance(q, b, d) == doctest::Approx(blue_variance(p, a, c)).epsilon(1e-12));
        CHECK(blue_estimate(q, b, d, {z}) == doctest::Approx(blue_estimate(p, a, c, {y})).epsilon(1e-12));
    }
}

TEST_CASE("simulate_measurement noiseless chain") {
    NetworkParams p;
    p.prior_variance = 1.0;
    p.obs_gains = {1, 1, 1};
    p.obs_noise_vars = {0, 0, 0};
    p.chan_noise_vars = {0, 0, 0};
    Rng rng(5);
    for (int i = 0; i < 10; ++i) {
        const auto m = simulate_measurement(p, GainVector({1, 1, 1}), {{1, 1, 1}}, rng);
        for (double y : m.received.y) CHECK(y == m.theta);
    }
}

TEST_CASE("simulate_measurement moments over 1e6 draws") {
    NetworkParams p;
    p.prior_variance = 1.0;
    p.obs_gains = {1.2, -0.6};
    p.obs_noise_vars = {0.1, 0.3};
    p.chan_noise_vars = {0.05, 0.2};
    const GainVector a({0.7, 1.4});
    const ChannelRealization c{{0.9, 0.5}};
    const std::size_t n = 1'000'000;
    for (auto law : {SourceDistribution::gaussian, SourceDistribution::uniform}) {
        Rng rng(31);
        std::vector<CompensatedSum> sum(2), sq(2);
        for (std::size_t t = 0; t < n; ++t) {
            const auto m = simulate_measurement(p, a, c, rng, law);
            for (std::size_t i = 0; i < 2; ++i) {
                sum[i].add(m.received.y[i]);
                sq[i].add(m.received.y[i] * m.received.y[i]);
            }
        }
        for (std::size_t i = 0; i < 2; ++i) {
            const double h = p.obs_gains[i];
            const double expected_var =
                c.g[i] * c.g[i] * a[i] * a[i] * (h * h * p.prior_variance + p.obs_noise_vars[i]) + p.chan_noise_vars[i];
            const double mean = sum[i].value() / n;
            const double var = sq[i].value() / n - mean * mean;
            CHECK(std::abs(mean) <= 4.0 * std::sqrt(expected_var / n));
            CHECK(var == doctest::Approx(expected_var).epsilon(0.01));
        }
    }
}

TEST_CASE("blue_estimate is unbiased and its MSE matches blue_variance") {
    const NetworkParams p = fixed_k5();
    const GainVector a({0.9, 1.1, 0.4, 1.6, 0.8});
    const ChannelRealization c{{0.8, 1.5, 0.6, 0.3, 1.1}};
    const double var = blue_variance(p, a, c);
    Rng rng(41);
    const std::size_t n = 1'000'000;
    CompensatedSum err, sq;
    for (std::size_t t = 0; t < n; ++t) {
        const auto m = simulate_measurement(p, a, c, rng);
        const double e = blue_estimate(p, a, c, m.received) - m.theta;
        err.add(e);
        sq.add(e * e);
    }
    CHECK(std::abs(err.value() / n) <= 4.0 * std::sqrt(var / n));
    CHECK(sq.value() / n == doctest::Approx(var).epsilon(0.01));
}
