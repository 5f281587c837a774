#include "bluefeed/channel.hpp"

#include <cmath>
#include <numbers>

#include "bluefeed/errors.hpp"

namespace bluefeed {

void FadingModel::validate() const {
    if (!(nominal_gain > 0.0)) throw InvalidArgument("fading: nominal gain must be positive");
    if (!(ref_distance > 0.0)) throw InvalidArgument("fading: reference distance must be positive");
    if (!(path_loss_exp >= 0.0)) throw InvalidArgument("fading: path-loss exponent must be non-negative");
    if (!(min_distance > 0.0) || !(min_distance <= max_distance))
        throw InvalidArgument("fading: distance range must satisfy 0 < d_min <= d_max");
}

double FadingModel::rayleigh_scale() const {
    switch (normalization) {
        case RayleighNormalization::unit_variance:
            return std::sqrt(2.0 / (4.0 - std::numbers::pi));
        case RayleighNormalization::unit_power:
        default:
            return 1.0 / std::numbers::sqrt2;
    }
}

double FadingModel::path_gain(double distance) const {
    return nominal_gain * std::pow(distance / ref_distance, -path_loss_exp / 2.0);
}

void NetworkModel::validate() const {
    if (!(obs_gain_variance >= 0.0)) throw InvalidArgument("network: observation gain variance is negative");
    if (!(obs_noise_var_min > 0.0) || !(obs_noise_var_min <= obs_noise_var_max))
        throw InvalidArgument("network: observation noise range must satisfy 0 < min <= max");
    if (!(chan_noise_var > 0.0)) throw InvalidArgument("network: channel noise variance must be positive");
    if (!(prior_variance > 0.0)) throw InvalidArgument("network: prior variance must be positive");
    if (rescale_obs_gains && !(obs_gain_power_target > 0.0))
        throw InvalidArgument("network: observation gain power target must be positive");
}

NetworkParams sample_network(const NetworkModel& model, std::size_t k, double p_total, Rng& rng) {
    if (k == 0) throw InvalidArgument("network must have at least one sensor");
    NetworkParams params;
    params.prior_variance = model.prior_variance;
    params.total_power = p_total;
    params.obs_gains.resize(k);
    params.obs_noise_vars.resize(k);
    params.chan_noise_vars.assign(k, model.chan_noise_var);

    const double sd = std::sqrt(model.obs_gain_variance);
    for (std::size_t i = 0; i < k; ++i) params.obs_gains[i] = model.obs_gain_mean + sd * rng.standard_normal();
    for (std::size_t i = 0; i < k; ++i)
        params.obs_noise_vars[i] = rng.uniform(model.obs_noise_var_min, model.obs_noise_var_max);

    if (model.rescale_obs_gains) rescale_obs_gains(params, model.obs_gain_power_target);
    return params;
}

void rescale_obs_gains(NetworkParams& params, double power_target) {
    CompensatedSum power;
    for (double h : params.obs_gains) power.add(h * h);
    const double mean_square = power.value() / static_cast<double>(params.size());
    if (mean_square > 0.0) {
        const double scale = std::sqrt(power_target / mean_square);
        for (double& h : params.obs_gains) h *= scale;
    }
}

std::vector<double> sample_distances(const FadingModel& fading, std::size_t k, Rng& rng) {
    std::vector<double> d(k);
    for (double& x : d) x = rng.uniform(fading.min_distance, fading.max_distance);
    return d;
}

ChannelRealization sample_fading(const FadingModel& fading, const std::vector<double>& distances, Rng& rng) {
    const double sigma = fading.rayleigh_scale();
    ChannelRealization chan;
    chan.g.resize(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i) {
        if (!(distances[i] > 0.0)) throw InvalidArgument("distances must be positive");
        chan.g[i] = fading.path_gain(distances[i]) * rng.rayleigh(sigma);
    }
    return chan;
}

ChannelRealization fixed_fading(const FadingModel& fading, const std::vector<double>& distances, double f) {
    ChannelRealization chan;
    chan.g.resize(distances.size());
    for (std::size_t i = 0; i < distances.size(); ++i) chan.g[i] = fading.path_gain(distances[i]) * f;
    return chan;
}

}  // namespace bluefeed
