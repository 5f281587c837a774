#include "bluefeed/results.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "bluefeed/errors.hpp"
#include "bluefeed/flatfile.hpp"

namespace bluefeed {

namespace {

std::string bits_label(const ResultRecord& r) { return r.bits ? std::to_string(*r.bits) : "full"; }

// JSON has no infinity; non-finite reals are written as strings.
std::string json_real(double x) {
    const std::string s = format_double(x);
    return std::isfinite(x) ? s : "\"" + s + "\"";
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

std::size_t parse_count(const std::string& s) {
    try {
        std::size_t pos = 0;
        const auto v = std::stoull(s, &pos);
        if (pos != s.size()) throw FormatError("bad count '" + s + "'");
        return static_cast<std::size_t>(v);
    } catch (const std::logic_error&) {
        throw FormatError("bad count '" + s + "'");
    }
}

}  // namespace

void write_results(std::ostream& out, const std::vector<ResultRecord>& records, ResultFormat format) {
    if (format == ResultFormat::csv) {
        out << kResultColumns << '\n';
        for (const auto& r : records) {
            out << r.sensors << ',' << bits_label(r) << ',' << format_double(r.power_dbm) << ','
                << format_double(r.power_watts) << ',' << format_double(r.mean_variance) << ','
                << format_double(r.std_error) << ',' << r.trials << ',' << r.num_infinite_trials << ','
                << r.codebook_iterations << '\n';
        }
        return;
    }
    for (const auto& r : records) {
        out << "{\"K\":" << r.sensors << ",\"L\":" << (r.bits ? std::to_string(*r.bits) : "\"full\"")
            << ",\"P_total_dBm\":" << json_real(r.power_dbm) << ",\"P_total_W\":" << json_real(r.power_watts)
            << ",\"mean_variance\":" << json_real(r.mean_variance) << ",\"std_error\":" << json_real(r.std_error)
            << ",\"trials\":" << r.trials << ",\"num_infinite_trials\":" << r.num_infinite_trials
            << ",\"codebook_iterations\":" << r.codebook_iterations << "}\n";
    }
}

void write_results(const std::filesystem::path& path, const std::vector<ResultRecord>& records,
                   ResultFormat format) {
    if (records.empty()) throw InvalidArgument("no result records to write");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_results(out, records, format);
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<ResultRecord> read_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kResultColumns) throw FormatError("missing or unexpected CSV header");
    std::vector<ResultRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 9) throw FormatError("expected 9 columns, got " + std::to_string(f.size()));
        ResultRecord r;
        r.sensors = parse_count(f[0]);
        if (f[1] != "full") r.bits = static_cast<int>(parse_count(f[1]));
        r.power_dbm = parse_double(f[2]);
        r.power_watts = parse_double(f[3]);
        r.mean_variance = parse_double(f[4]);
        r.std_error = parse_double(f[5]);
        r.trials = parse_count(f[6]);
        r.num_infinite_trials = parse_count(f[7]);
        r.codebook_iterations = parse_count(f[8]);
        out.push_back(r);
    }
    return out;
}

}  // namespace bluefeed
