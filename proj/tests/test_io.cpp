#include <cmath>
#include <filesystem>
#include <limits>
#include <fstream>
#include <sstream>

#include "bluefeed/channel.hpp"
#include "bluefeed/config.hpp"
#include "bluefeed/errors.hpp"
#include "bluefeed/flatfile.hpp"
#include "bluefeed/results.hpp"
#include "doctest.h"

using namespace bluefeed;

namespace {

std::filesystem::path scratch(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "bluefeed_tests";
    std::filesystem::create_directories(dir);
    const auto path = dir / name;
    std::filesystem::remove(path);
    return path;
}

Codebook random_book(Rng& rng, std::size_t k, int bits) {
    Codebook b;
    b.bits = bits;
    b.total_power = rng.uniform(1e-3, 1.0);
    b.seed = rng.next_u64();
    b.training_size = 1000 + rng.below(5000);
    b.epsilon = 1e-6;
    b.iterations = rng.below(50);
    b.converged = rng.below(2) == 1;
    for (std::size_t l = 0; l < (std::size_t{1} << bits); ++l) {
        std::vector<double> a(k);
        for (double& x : a) x = rng.below(4) == 0 ? 0.0 : std::ldexp(rng.uniform01(), -static_cast<int>(rng.below(40)));
        b.codewords.emplace_back(a);
    }
    for (std::size_t j = 0; j <= b.iterations; ++j) b.distortion_history.push_back(rng.uniform(0.0, 10.0) / (j + 1));
    return b;
}

}  // namespace

TEST_CASE("codebook files round-trip bit for bit") {
    Rng rng(111);
    for (int trial = 0; trial < 50; ++trial) {
        const Codebook b = random_book(rng, 1 + rng.below(12), static_cast<int>(rng.below(6)));
        std::stringstream buf;
        write_codebook(buf, b);
        const Codebook r = read_codebook(buf);
        CHECK(r.codewords == b.codewords);
        CHECK(r.distortion_history == b.distortion_history);
        CHECK(r.bits == b.bits);
        CHECK(r.total_power == b.total_power);
        CHECK(r.seed == b.seed);
        CHECK(r.training_size == b.training_size);
        CHECK(r.epsilon == b.epsilon);
        CHECK(r.iterations == b.iterations);
        CHECK(r.converged == b.converged);
    }
    const auto path = scratch("book.txt");
    const Codebook b = random_book(rng, 5, 2);
    save_codebook(path, b);
    CHECK(load_codebook(path).codewords == b.codewords);
}

TEST_CASE("codebook file layout") {
    Codebook b;
    b.bits = 1;
    b.total_power = 0.01;
    b.seed = 7;
    b.training_size = 8;
    b.epsilon = 1e-6;
    b.iterations = 1;
    b.codewords = {GainVector({0.5, 0.0}), GainVector({0.25, 1.5})};
    b.distortion_history = {0.125, 0.0625};
    std::stringstream buf;
    write_codebook(buf, b);
    CHECK(buf.str() ==
          "bluefeed-codebook\n"
          "format_version 1\n"
          "K 2\n"
          "L 1\n"
          "P_total 0.01\n"
          "seed 7\n"
          "M 8\n"
          "epsilon 1e-06\n"
          "iterations 1\n"
          "converged 1\n"
          "codewords 2\n"
          "0.5 0\n"
          "0.25 1.5\n"
          "history 2\n"
          "0.125\n"
          "0.0625\n");
}

TEST_CASE("malformed codebook files are rejected") {
    auto read = [](const std::string& text) {
        std::stringstream in(text);
        return read_codebook(in);
    };
    CHECK_THROWS_AS(read(""), FormatError);
    CHECK_THROWS_AS(read("bluefeed-network\n"), FormatError);
    CHECK_THROWS_AS(read("bluefeed-codebook\nformat_version 2\n"), FormatError);
    CHECK_THROWS_AS(read("bluefeed-codebook\nformat_version 1\nK 1\nL 1\nP_total 1\nseed 1\nM 4\nepsilon 1e-6\n"
                         "iterations 0\nconverged 1\ncodewords 3\n"),
                    FormatError);
    CHECK_THROWS_AS(read("bluefeed-codebook\nformat_version 1\nK 1\nL 0\nP_total abc\n"), FormatError);
    CHECK_THROWS_AS(load_codebook("/nonexistent/dir/book.txt"), IoError);
}

TEST_CASE("network files round-trip bit for bit") {
    Rng rng(112);
    NetworkInstance net;
    net.params = sample_network(NetworkModel{}, 7, 0.0123, rng);
    net.distances = sample_distances(FadingModel{}, 7, rng);
    net.seed = 99;
    std::stringstream buf;
    write_network(buf, net);
    const NetworkInstance r = read_network(buf);
    CHECK(r.params.obs_gains == net.params.obs_gains);
    CHECK(r.params.obs_noise_vars == net.params.obs_noise_vars);
    CHECK(r.params.chan_noise_vars == net.params.chan_noise_vars);
    CHECK(r.params.prior_variance == net.params.prior_variance);
    CHECK(r.params.total_power == net.params.total_power);
    CHECK(r.distances == net.distances);
    CHECK(r.seed == 99);

    std::stringstream bad("bluefeed-network\nformat_version 1\nK 2\nprior_variance 1\nP_total 1\nseed 1\n"
                          "obs_gains 3\n1 1 1\n");
    CHECK_THROWS_AS(read_network(bad), FormatError);
}

TEST_CASE("doubles format in shortest round-trip form") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-12) == "1e-12");
    CHECK(parse_double(format_double(0.1 + 0.2)) == 0.1 + 0.2);
    CHECK(std::isinf(parse_double("inf")));
    CHECK_THROWS_AS(parse_double("1.0x"), FormatError);
}

namespace {

std::vector<ResultRecord> three_records() {
    ResultRecord full;
    full.sensors = 5;
    full.power_dbm = 10.0;
    full.power_watts = 0.01;
    full.mean_variance = 1.25;
    full.std_error = 0.015625;
    full.trials = 100;
    ResultRecord l2 = full;
    l2.bits = 2;
    l2.mean_variance = 1.5;
    l2.std_error = 0.03125;
    l2.num_infinite_trials = 1;
    l2.codebook_iterations = 12;
    ResultRecord l4 = l2;
    l4.bits = 4;
    l4.power_dbm = 20.0;
    l4.power_watts = 0.1;
    l4.mean_variance = 0.125;
    l4.num_infinite_trials = 0;
    l4.codebook_iterations = 7;
    return {full, l2, l4};
}

}  // namespace

TEST_CASE("result CSV matches the golden fixture") {
    std::stringstream out;
    write_results(out, three_records(), ResultFormat::csv);
    CHECK(out.str() ==
          "K,L,P_total_dBm,P_total_W,mean_variance,std_error,trials,num_infinite_trials,codebook_iterations\n"
          "5,full,10,0.01,1.25,0.015625,100,0,0\n"
          "5,2,10,0.01,1.5,0.03125,100,1,12\n"
          "5,4,20,0.1,0.125,0.03125,100,0,7\n");
}

TEST_CASE("result JSON lines") {
    std::stringstream out;
    auto records = three_records();
    records[0].mean_variance = std::numeric_limits<double>::infinity();
    write_results(out, records, ResultFormat::jsonl);
    std::string first;
    std::getline(out, first);
    CHECK(first ==
          "{\"K\":5,\"L\":\"full\",\"P_total_dBm\":10,\"P_total_W\":0.01,\"mean_variance\":\"inf\","
          "\"std_error\":0.015625,\"trials\":100,\"num_infinite_trials\":0,\"codebook_iterations\":0}");
}

TEST_CASE("result CSV round-trip") {
    Rng rng(113);
    std::vector<ResultRecord> records;
    for (int i = 0; i < 30; ++i) {
        ResultRecord r;
        r.sensors = 1 + rng.below(20);
        if (rng.below(3)) r.bits = static_cast<int>(rng.below(8));
        r.power_dbm = rng.uniform(-10, 30);
        r.power_watts = dbm_to_watts(r.power_dbm);
        r.mean_variance = rng.uniform(0, 5);
        r.std_error = rng.uniform(0, 0.1);
        r.trials = rng.below(100000);
        r.num_infinite_trials = rng.below(3);
        r.codebook_iterations = rng.below(500);
        records.push_back(r);
    }
    const auto path = scratch("results.csv");
    write_results(path, records, ResultFormat::csv);
    std::ifstream in(path);
    CHECK(read_results_csv(in) == records);
}

TEST_CASE("writing no records fails without creating a file") {
    const auto path = scratch("empty.csv");
    CHECK_THROWS_AS(write_results(path, {}, ResultFormat::csv), InvalidArgument);
    CHECK_FALSE(std::filesystem::exists(path));
    CHECK_THROWS_AS(write_results("/nonexistent/dir/out.csv", three_records(), ResultFormat::csv), IoError);
}

TEST_CASE("config parsing") {
    const ExperimentConfig defaults;
    CHECK(defaults.power_dbm.size() == 16);
    CHECK(defaults.power_dbm.front() == 5.0);
    CHECK(defaults.power_dbm.back() == 20.0);
    CHECK(defaults.training_size == 5000);
    CHECK(defaults.epsilon == 1e-6);
    CHECK(defaults.fading.nominal_gain == doctest::Approx(1e-3).epsilon(1e-14));
    CHECK(defaults.network.chan_noise_var == doctest::Approx(1e-12).epsilon(1e-14));

    const auto cfg = parse_config(R"({
        "sensors": [3, 5], "feedback_bits": [1], "power_sweep_dbm": {"start": 0, "stop": 10, "step": 2.5},
        "training_size": 400, "epsilon": 1e-5, "trials": 50, "seed": 9, "threads": 2,
        "fading": {"nominal_gain_db": -20, "path_loss_exponent": 3, "rayleigh": "unit_variance"},
        "network": {"chan_noise_dbm": -80, "rescale_obs_gains": true},
        "output": {"path": "out.jsonl", "format": "jsonl"}, "cache_dir": "cache"
    })");
    CHECK(cfg.sensor_counts == std::vector<std::size_t>{3, 5});
    CHECK(cfg.power_dbm == std::vector<double>{0, 2.5, 5, 7.5, 10});
    CHECK(cfg.training_size == 400);
    CHECK(cfg.mc_trials == 50);
    CHECK(cfg.master_seed == 9);
    CHECK(cfg.threads == 2);
    CHECK(cfg.fading.nominal_gain == doctest::Approx(1e-2));
    CHECK(cfg.fading.path_loss_exp == 3.0);
    CHECK(cfg.fading.normalization == RayleighNormalization::unit_variance);
    CHECK(cfg.network.chan_noise_var == doctest::Approx(1e-11));
    CHECK(cfg.network.rescale_obs_gains);
    CHECK(cfg.format == ResultFormat::jsonl);
    CHECK(cfg.output_path == "out.jsonl");
    CHECK(cfg.cache_dir == "cache");
}

TEST_CASE("config errors") {
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_AS(parse_config("[]"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"sensorz": [5]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"sensors": "five"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"feedback_bits": [4], "training_size": 63})"), ConfigError);
    CHECK_NOTHROW(parse_config(R"({"feedback_bits": [4], "training_size": 64})"));
    CHECK_THROWS_AS(parse_config(R"({"trials": 0})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"power_dbm": [1], "power_sweep_dbm": {"start": 0, "stop": 1, "step": 1}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"fading": {"min_distance_m": 200}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"output": {"format": "xml"}})"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), IoError);
}
