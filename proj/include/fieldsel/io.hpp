#pragma once

#include "fieldsel/selection.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace fieldsel {

/// File-system failure carrying the offending path; the CLI maps it to its
/// own exit code.
class IoError : public std::runtime_error {
public:
    IoError(const std::string& what, std::filesystem::path path)
        : std::runtime_error(what + ": " + path.string()), path_(std::move(path)) {}
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Reads prediction locations from CSV with header `x,y[,z...]`, one point
/// per row, decimal-point reals. Point dimension equals the column count.
[[nodiscard]] std::vector<Point> read_omega_csv(const std::filesystem::path& path);

/// Writes points in the same CSV schema.
void write_omega_csv(const std::filesystem::path& path, std::span<const Point> omega);

/// Shortest decimal form that round-trips the double exactly.
[[nodiscard]] std::string format_double(double v);

[[nodiscard]] nlohmann::json report_to_json(const SelectionReport& report);

}  // namespace fieldsel
