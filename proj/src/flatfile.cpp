#include "bluefeed/flatfile.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "bluefeed/errors.hpp"

namespace bluefeed {

namespace {

constexpr std::string_view kCodebookMagic = "bluefeed-codebook";
constexpr std::string_view kNetworkMagic = "bluefeed-network";

class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    std::string token() {
        std::string t;
        if (!(in_ >> t)) throw FormatError("unexpected end of file");
        return t;
    }

    void expect(std::string_view word) {
        const std::string t = token();
        if (t != word) throw FormatError("expected '" + std::string(word) + "', found '" + t + "'");
    }

    double real(std::string_view key) {
        expect(key);
        return parse_double(token());
    }

    std::uint64_t integer(std::string_view key) {
        expect(key);
        return unsigned_value();
    }

    std::uint64_t unsigned_value() {
        const std::string t = token();
        std::uint64_t v = 0;
        const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size()) throw FormatError("bad integer '" + t + "'");
        return v;
    }

    std::vector<double> array(std::string_view key, std::size_t expected) {
        const std::size_t n = integer(key);
        if (n != expected)
            throw FormatError(std::string(key) + ": expected " + std::to_string(expected) + " values, found " +
                              std::to_string(n));
        std::vector<double> out(n);
        for (double& x : out) x = parse_double(token());
        return out;
    }

    void version() {
        if (integer("format_version") != static_cast<std::uint64_t>(kFlatFileVersion))
            throw FormatError("unsupported format_version");
    }

private:
    std::istream& in_;
};

void write_row(std::ostream& out, const std::vector<double>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out << ' ';
        out << format_double(xs[i]);
    }
    out << '\n';
}

template <typename Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    fn(out);
    out.flush();
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return in;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc()) throw FormatError("cannot format double");
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw FormatError("bad real '" + std::string(text) + "'");
    return v;
}

void write_codebook(std::ostream& out, const Codebook& book) {
    out << kCodebookMagic << '\n'
        << "format_version " << kFlatFileVersion << '\n'
        << "K " << book.sensors() << '\n'
        << "L " << book.bits << '\n'
        << "P_total " << format_double(book.total_power) << '\n'
        << "seed " << book.seed << '\n'
        << "M " << book.training_size << '\n'
        << "epsilon " << format_double(book.epsilon) << '\n'
        << "iterations " << book.iterations << '\n'
        << "converged " << (book.converged ? 1 : 0) << '\n'
        << "codewords " << book.size() << '\n';
    for (const auto& c : book.codewords) write_row(out, c.a);
    out << "history " << book.distortion_history.size() << '\n';
    for (double d : book.distortion_history) out << format_double(d) << '\n';
}

Codebook read_codebook(std::istream& in) {
    Reader r(in);
    r.expect(kCodebookMagic);
    r.version();
    Codebook book;
    const std::size_t k = r.integer("K");
    const std::uint64_t bits = r.integer("L");
    if (bits > 30) throw FormatError("L out of range");
    book.bits = static_cast<int>(bits);
    book.total_power = r.real("P_total");
    book.seed = r.integer("seed");
    book.training_size = r.integer("M");
    book.epsilon = r.real("epsilon");
    book.iterations = r.integer("iterations");
    book.converged = r.integer("converged") != 0;
    const std::size_t rows = r.integer("codewords");
    if (rows != (std::size_t{1} << book.bits))
        throw FormatError("codeword count does not match L");
    for (std::size_t l = 0; l < rows; ++l) {
        std::vector<double> a(k);
        for (double& x : a) x = parse_double(r.token());
        book.codewords.emplace_back(std::move(a));
    }
    const std::size_t history = r.integer("history");
    book.distortion_history.resize(history);
    for (double& d : book.distortion_history) d = parse_double(r.token());
    return book;
}

void save_codebook(const std::filesystem::path& path, const Codebook& book) {
    write_file(path, [&](std::ostream& out) { write_codebook(out, book); });
}

Codebook load_codebook(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_codebook(in);
}

void write_network(std::ostream& out, const NetworkInstance& net) {
    const auto& p = net.params;
    out << kNetworkMagic << '\n'
        << "format_version " << kFlatFileVersion << '\n'
        << "K " << p.size() << '\n'
        << "prior_variance " << format_double(p.prior_variance) << '\n'
        << "P_total " << format_double(p.total_power) << '\n'
        << "seed " << net.seed << '\n';
    out << "obs_gains " << p.size() << '\n';
    write_row(out, p.obs_gains);
    out << "obs_noise_vars " << p.size() << '\n';
    write_row(out, p.obs_noise_vars);
    out << "chan_noise_vars " << p.size() << '\n';
    write_row(out, p.chan_noise_vars);
    out << "distances " << net.distances.size() << '\n';
    write_row(out, net.distances);
}

NetworkInstance read_network(std::istream& in) {
    Reader r(in);
    r.expect(kNetworkMagic);
    r.version();
    NetworkInstance net;
    const std::size_t k = r.integer("K");
    net.params.prior_variance = r.real("prior_variance");
    net.params.total_power = r.real("P_total");
    net.seed = r.integer("seed");
    net.params.obs_gains = r.array("obs_gains", k);
    net.params.obs_noise_vars = r.array("obs_noise_vars", k);
    net.params.chan_noise_vars = r.array("chan_noise_vars", k);
    net.distances = r.array("distances", k);
    net.params.validate();
    return net;
}

void save_network(const std::filesystem::path& path, const NetworkInstance& net) {
    write_file(path, [&](std::ostream& out) { write_network(out, net); });
}

NetworkInstance load_network(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_network(in);
}

}  // namespace bluefeed
