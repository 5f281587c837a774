#include "bluefeed/estimator.hpp"

#include <cmath>
#include <limits>

#include "bluefeed/errors.hpp"

namespace bluefeed {

namespace {

void check_all(const NetworkParams& params, const GainVector& gains, const ChannelRealization& chan) {
    check_dimensions(params, gains);
    check_dimensions(params, chan);
}

double draw(Rng& rng, double variance, SourceDistribution law) {
    if (variance <= 0.0) return 0.0;
    const double sd = std::sqrt(variance);
    switch (law) {
        case SourceDistribution::uniform: {
            const double half_width = std::sqrt(3.0) * sd;
            return rng.uniform(-half_width, half_width);
        }
        case SourceDistribution::gaussian:
        default:
            return sd * rng.standard_normal();
    }
}

}  // namespace

double blue_estimate(const NetworkParams& params, const GainVector& gains, const ChannelRealization& chan,
                     const ReceivedVector& received) {
    check_all(params, gains, chan);
    if (received.size() != params.size()) throw DimensionMismatch("received vector length differs from K");

    CompensatedSum normalizer;
    CompensatedSum weighted;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double ag = gains[i] * chan.g[i];
        const double h = params.obs_gains[i];
        if (ag * h == 0.0) continue;
        const double noise = ag * ag * params.obs_noise_vars[i] + params.chan_noise_vars[i];
        normalizer.add(h * h * ag * ag / noise);
        weighted.add(h * ag * received.y[i] / noise);
    }
    if (normalizer.value() == 0.0) throw AllSilent();
    return weighted.value() / normalizer.value();
}

double blue_variance(const NetworkParams& params, const GainVector& gains, const ChannelRealization& chan) {
    check_all(params, gains, chan);
    const auto beta = observation_snrs(params);
    CompensatedSum info;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double a = gains[i];
        if (a == 0.0) continue;
        const double gamma = chan.g[i] * chan.g[i] / params.chan_noise_vars[i];
        // Same operation order as the codebook's cached evaluator, so both agree bit for bit.
        const double u = (gamma * params.obs_noise_vars[i]) * (a * a);
        info.add(beta[i] * u / (1.0 + u));
    }
    if (!(info.value() > 0.0)) return std::numeric_limits<double>::infinity();
    return params.prior_variance / info.value();
}

Measurement simulate_measurement(const NetworkParams& params, const GainVector& gains,
                                 const ChannelRealization& chan, Rng& rng, SourceDistribution law) {
    check_all(params, gains, chan);
    Measurement m;
    m.theta = draw(rng, params.prior_variance, law);
    m.received.y.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double n = draw(rng, params.obs_noise_vars[i], law);
        const double w = draw(rng, params.chan_noise_vars[i], SourceDistribution::gaussian);
        const double x = params.obs_gains[i] * m.theta + n;
        m.received.y[i] = chan.g[i] * gains[i] * x + w;
    }
    return m;
}

}  // namespace bluefeed
