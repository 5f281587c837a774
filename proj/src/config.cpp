#include "bluefeed/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bluefeed/errors.hpp"
#include "bluefeed/model.hpp"
#include "json.hpp"

namespace bluefeed {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::string_view where, const std::set<std::string>& known) {
    for (const auto& [key, _] : obj.items())
        if (!known.contains(key)) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

std::vector<double> sweep(const json& range) {
    reject_unknown(range, "power_sweep_dbm", {"start", "stop", "step"});
    double start = 0, stop = 0, step = 0;
    read(range, "start", start);
    read(range, "stop", stop);
    read(range, "step", step);
    if (!(step > 0.0) || !(stop >= start)) throw ConfigError("power_sweep_dbm needs step > 0 and stop >= start");
    std::vector<double> out;
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i) out.push_back(start + step * static_cast<double>(i));
    return out;
}

void read_fading(const json& obj, FadingModel& f) {
    reject_unknown(obj, "fading",
                   {"nominal_gain_db", "ref_distance_m", "path_loss_exponent", "min_distance_m", "max_distance_m",
                    "rayleigh"});
    if (obj.contains("nominal_gain_db")) {
        double db = 0;
        read(obj, "nominal_gain_db", db);
        f.nominal_gain = db_to_linear(db);
    }
    read(obj, "ref_distance_m", f.ref_distance);
    read(obj, "path_loss_exponent", f.path_loss_exp);
    read(obj, "min_distance_m", f.min_distance);
    read(obj, "max_distance_m", f.max_distance);
    if (obj.contains("rayleigh")) {
        std::string mode;
        read(obj, "rayleigh", mode);
        if (mode == "unit_power")
            f.normalization = RayleighNormalization::unit_power;
        else if (mode == "unit_variance")
            f.normalization = RayleighNormalization::unit_variance;
        else
            throw ConfigError("fading.rayleigh must be unit_power or unit_variance");
    }
}

void read_network(const json& obj, NetworkModel& m) {
    reject_unknown(obj, "network",
                   {"prior_variance", "obs_gain_mean", "obs_gain_variance", "obs_noise_var_min", "obs_noise_var_max",
                    "chan_noise_dbm", "rescale_obs_gains", "obs_gain_power_target"});
    read(obj, "prior_variance", m.prior_variance);
    read(obj, "obs_gain_mean", m.obs_gain_mean);
    read(obj, "obs_gain_variance", m.obs_gain_variance);
    read(obj, "obs_noise_var_min", m.obs_noise_var_min);
    read(obj, "obs_noise_var_max", m.obs_noise_var_max);
    if (obj.contains("chan_noise_dbm")) {
        double dbm = 0;
        read(obj, "chan_noise_dbm", dbm);
        m.chan_noise_var = dbm_to_watts(dbm);
    }
    read(obj, "rescale_obs_gains", m.rescale_obs_gains);
    read(obj, "obs_gain_power_target", m.obs_gain_power_target);
}

}  // namespace

std::vector<double> ExperimentConfig::default_power_sweep() {
    std::vector<double> out;
    for (int dbm = 5; dbm <= 20; ++dbm) out.push_back(dbm);
    return out;
}

void ExperimentConfig::validate() const {
    if (sensor_counts.empty()) throw ConfigError("sensors list is empty");
    if (feedback_bits.empty()) throw ConfigError("feedback_bits list is empty");
    if (power_dbm.empty()) throw ConfigError("power sweep is empty");
    for (auto k : sensor_counts)
        if (k == 0) throw ConfigError("sensor counts must be positive");
    int max_bits = 0;
    for (int l : feedback_bits) {
        if (l < 0 || l > 20) throw ConfigError("feedback bits must lie in [0, 20]");
        max_bits = std::max(max_bits, l);
    }
    for (double p : power_dbm)
        if (!std::isfinite(p)) throw ConfigError("power sweep values must be finite");
    if (mc_trials == 0) throw ConfigError("trials must be positive");
    if (max_iterations == 0) throw ConfigError("max_iterations must be positive");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (training_size < 4 * (std::size_t{1} << max_bits))
        throw ConfigError("training_size must be at least 4 * 2^max(L) = " +
                          std::to_string(4 * (std::size_t{1} << max_bits)));
    if (threads == 0) throw ConfigError("threads must be positive");
    try {
        fading.validate();
        network.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

ResultFormat parse_format(const std::string& name) {
    if (name == "csv") return ResultFormat::csv;
    if (name == "jsonl") return ResultFormat::jsonl;
    throw ConfigError("format must be csv or jsonl, got '" + name + "'");
}

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(doc, "config",
                   {"sensors", "feedback_bits", "power_dbm", "power_sweep_dbm", "training_size", "epsilon",
                    "max_iterations", "trials", "seed", "threads", "resample_geometry", "fading", "network", "output",
                    "cache_dir"});

    ExperimentConfig cfg;
    read(doc, "sensors", cfg.sensor_counts);
    read(doc, "feedback_bits", cfg.feedback_bits);
    if (doc.contains("power_dbm") && doc.contains("power_sweep_dbm"))
        throw ConfigError("give either power_dbm or power_sweep_dbm, not both");
    read(doc, "power_dbm", cfg.power_dbm);
    if (doc.contains("power_sweep_dbm")) cfg.power_dbm = sweep(doc.at("power_sweep_dbm"));
    read(doc, "training_size", cfg.training_size);
    read(doc, "epsilon", cfg.epsilon);
    read(doc, "max_iterations", cfg.max_iterations);
    read(doc, "trials", cfg.mc_trials);
    read(doc, "seed", cfg.master_seed);
    read(doc, "threads", cfg.threads);
    read(doc, "resample_geometry", cfg.resample_geometry);
    if (doc.contains("fading")) read_fading(doc.at("fading"), cfg.fading);
    if (doc.contains("network")) read_network(doc.at("network"), cfg.network);
    if (doc.contains("output")) {
        const json& out = doc.at("output");
        reject_unknown(out, "output", {"path", "format"});
        std::string path;
        read(out, "path", path);
        cfg.output_path = path;
        if (out.contains("format")) {
            std::string fmt;
            read(out, "format", fmt);
            cfg.format = parse_format(fmt);
        }
    }
    if (doc.contains("cache_dir")) {
        std::string dir;
        read(doc, "cache_dir", dir);
        cfg.cache_dir = dir;
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

}  // namespace bluefeed
