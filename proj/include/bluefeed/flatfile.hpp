#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "bluefeed/codebook.hpp"
#include "bluefeed/model.hpp"

namespace bluefeed {

// Versioned plain-text formats for codebooks and network instances.
//
// Both start with a magic line and `format_version 1`, followed by one
// `key value` header line per field in a fixed order, then the arrays. Reals
// are written in shortest round-trip form (std::to_chars), so write -> read
// reproduces every double bit for bit. Field order is listed in README.md.

inline constexpr int kFlatFileVersion = 1;

std::string format_double(double x);
double parse_double(std::string_view text);

void write_codebook(std::ostream& out, const Codebook& book);
Codebook read_codebook(std::istream& in);
void save_codebook(const std::filesystem::path& path, const Codebook& book);
Codebook load_codebook(const std::filesystem::path& path);

/// A sampled network with the geometry it was drawn with.
struct NetworkInstance {
    NetworkParams params;
    std::vector<double> distances;
    std::uint64_t seed = 0;
};

void write_network(std::ostream& out, const NetworkInstance& net);
NetworkInstance read_network(std::istream& in);
void save_network(const std::filesystem::path& path, const NetworkInstance& net);
NetworkInstance load_network(const std::filesystem::path& path);

}  // namespace bluefeed
