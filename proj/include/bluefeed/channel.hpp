#pragma once

#include <cstddef>
#include <vector>

#include "bluefeed/model.hpp"
#include "bluefeed/rng.hpp"

namespace bluefeed {

/// How "unit variance" of the Rayleigh factor f_i is read.
enum class RayleighNormalization {
    unit_power,     // E[f^2] = 1
    unit_variance,  // Var[f] = 1
};

/// Path loss plus Rayleigh fading: g_i = eta0 (d_i / d0)^(-alpha/2) f_i.
struct FadingModel {
    double nominal_gain = 1e-3;  // eta0, linear (-30 dB)
    double ref_distance = 1.0;   // d0, meters
    double path_loss_exp = 2.0;  // alpha
    double min_distance = 50.0;  // meters
    double max_distance = 150.0;
    RayleighNormalization normalization = RayleighNormalization::unit_power;

    void validate() const;

    /// Scale sigma of the Rayleigh law implied by `normalization`.
    double rayleigh_scale() const;

    /// Deterministic part eta0 (d / d0)^(-alpha/2).
    double path_gain(double distance) const;
};

/// Distributions the sensor population is drawn from.
struct NetworkModel {
    double obs_gain_mean = 1.0;
    double obs_gain_variance = 0.09;
    double obs_noise_var_min = 0.05;
    double obs_noise_var_max = 0.15;
    double chan_noise_var = 1e-12;  // -90 dBm in watts
    double prior_variance = 1.0;
    // When set, h is rescaled so that mean(h^2) over the sensors equals the target.
    bool rescale_obs_gains = false;
    double obs_gain_power_target = 1.2;

    void validate() const;
};

/// Draws h_i ~ Normal(mean, variance) and sigma_o,i^2 ~ Uniform(min, max).
NetworkParams sample_network(const NetworkModel& model, std::size_t k, double p_total, Rng& rng);

/// Scales every h_i by one factor so that mean(h_i^2) equals power_target.
void rescale_obs_gains(NetworkParams& params, double power_target);

/// Sensor-to-fusion-center distances, i.i.d. uniform on [d_min, d_max].
std::vector<double> sample_distances(const FadingModel& fading, std::size_t k, Rng& rng);

ChannelRealization sample_fading(const FadingModel& fading, const std::vector<double>& distances, Rng& rng);

/// Fading with every f_i replaced by the given value. Test hook.
ChannelRealization fixed_fading(const FadingModel& fading, const std::vector<double>& distances, double f);

}  // namespace bluefeed
