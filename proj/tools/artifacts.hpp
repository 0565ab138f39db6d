#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "slimrank/types.hpp"

namespace slimrank::cli {

/// Dense coefficient-matrix artifact: "SLRW" magic, uint64 size, then
/// column-major doubles. Byte-exact round trip.
void write_w_binary(const std::filesystem::path& path, const Mat& w);
Mat read_w_binary(const std::filesystem::path& path);

/// Nonzero entries as `row<TAB>col<TAB>value` with 17 significant digits.
void write_w_triplets(const std::filesystem::path& path, const Mat& w);

std::string sha256_file(const std::filesystem::path& path);

std::string iso8601_utc_now();

/// Ordered key=value store behind manifest.txt and report.txt.
class KvFile {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, double value);
    void set(const std::string& key, long long value);

    const std::string* find(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;

    std::string to_string() const;
    void write(const std::filesystem::path& path) const;
    static KvFile read(const std::filesystem::path& path);

private:
    std::vector<std::pair<std::string, std::string>> items_;
};

}  // namespace slimrank::cli
