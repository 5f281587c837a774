#pragma once

#include <vector>

#include "bluefeed/model.hpp"
#include "bluefeed/rng.hpp"

namespace bluefeed {

/// Samples y_i received at the fusion center.
struct ReceivedVector {
    std::vector<double> y;

    std::size_t size() const { return y.size(); }
};

/// Law used for the parameter and the observation noise. Only the first two
/// moments enter the estimator, so any zero-mean law with the right variance
/// is admissible; channel noise is always Gaussian.
enum class SourceDistribution { gaussian, uniform };

/// Best linear unbiased estimate of theta from the received samples.
/// Sensors with a_i g_i h_i == 0 are skipped. Throws AllSilent when no sensor remains.
double blue_estimate(const NetworkParams& params, const GainVector& gains, const ChannelRealization& chan,
                     const ReceivedVector& received);

/// Conditional variance of the BLUE given gains and channel:
///   sigma_theta^2 / sum_i beta_i gamma_i a_i^2 sigma_o,i^2 / (1 + gamma_i a_i^2 sigma_o,i^2).
/// +infinity when the sum vanishes (every sensor silent).
double blue_variance(const NetworkParams& params, const GainVector& gains, const ChannelRealization& chan);

struct Measurement {
    double theta = 0.0;
    ReceivedVector received;
};

/// Draws theta, the observation noise and the channel noise, and returns
/// y_i = g_i a_i (h_i theta + n_i) + w_i together with the true theta.
Measurement simulate_measurement(const NetworkParams& params, const GainVector& gains,
                                 const ChannelRealization& chan, Rng& rng,
                                 SourceDistribution law = SourceDistribution::gaussian);

}  // namespace bluefeed
