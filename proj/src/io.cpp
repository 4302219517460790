#include "fieldsel/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace fieldsel {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        // trim surrounding whitespace
        const auto first = field.find_first_not_of(" \t\r");
        const auto last = field.find_last_not_of(" \t\r");
        fields.push_back(first == std::string::npos ? std::string{}
                                                    : field.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_real(const std::string& text, const std::filesystem::path& path) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw IoError("invalid real number '" + text + "' in", path);
    }
    return value;
}

const char* axis_name(std::size_t i) {
    static const char* named[] = {"x", "y", "z"};
    return i < 3 ? named[i] : nullptr;
}

}  // namespace

std::vector<Point> read_omega_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open omega file", path);

    std::string line;
    if (!std::getline(in, line)) throw IoError("empty omega file", path);
    const auto header = split_csv_line(line);
    if (header.empty() || header.front() != "x") {
        throw IoError("omega file header must start with column 'x'", path);
    }
    for (std::size_t i = 0; i < header.size() && i < 3; ++i) {
        if (header[i] != axis_name(i)) {
            throw IoError("omega file header must name columns x,y,z in order", path);
        }
    }
    const std::size_t dim = header.size();

    std::vector<Point> omega;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != dim) {
            throw IoError("row " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " fields, expected " +
                              std::to_string(dim) + " in",
                          path);
        }
        Point p;
        p.coords.reserve(dim);
        for (const auto& f : fields) p.coords.push_back(parse_real(f, path));
        omega.push_back(std::move(p));
    }
    if (omega.empty()) throw IoError("omega file contains no points", path);
    return omega;
}

void write_omega_csv(const std::filesystem::path& path, std::span<const Point> omega) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write omega file", path);
    const std::size_t dim = omega.empty() ? 0 : static_cast<std::size_t>(omega.front().dim());
    for (std::size_t i = 0; i < dim; ++i) {
        if (i > 0) out << ',';
        const char* name = axis_name(i);
        if (name != nullptr) {
            out << name;
        } else {
            out << "coord" << i;
        }
    }
    out << '\n';
    for (const Point& p : omega) {
        for (std::size_t i = 0; i < p.coords.size(); ++i) {
            if (i > 0) out << ',';
            out << format_double(p.coords[i]);
        }
        out << '\n';
    }
    if (!out) throw IoError("failed while writing omega file", path);
}

std::string format_double(double v) {
    char buf[32];
    // %.17g always round-trips; prefer the shorter %.15g form when it does.
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    double back = 0.0;
    std::from_chars(buf, buf + std::char_traits<char>::length(buf), back);
    if (back != v) std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

nlohmann::json report_to_json(const SelectionReport& report) {
    nlohmann::json selected = nlohmann::json::array();
    for (const Point& p : report.selected) selected.push_back(p.coords);
    return nlohmann::json{{"method", method_name(report.method)},
                          {"rho", report.rho},
                          {"ground_set_size", report.ground_set_size},
                          {"selected", std::move(selected)},
                          {"objective", report.objective},
                          {"total_mse", report.total_mse},
                          {"gains", report.gains},
                          {"elapsed_seconds", report.elapsed_seconds}};
}

}  // namespace fieldsel
