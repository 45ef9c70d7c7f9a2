#include "tracker/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <octrack/errors.hpp>

namespace tracker {

std::string format_real(double v) {
    if (!std::isfinite(v)) return {};
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_report_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return format_real(v);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw octrack::Error(octrack::Errc::Io, "cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw octrack::Error(octrack::Errc::Io, "write to '" + path.string() + "' failed");
}

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
    std::string text;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) text += ',';
            text += cells[i];
        }
        text += '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    write_text(path, text);
}

}  // namespace tracker
