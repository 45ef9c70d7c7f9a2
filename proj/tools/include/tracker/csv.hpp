#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace tracker {

// 17 significant digits; empty for inf / nan.
std::string format_real(double v);
// As format_real but non-finite values print as "inf" / "nan".
std::string format_report_real(double v);

// Comma separated, LF line endings. Creates parent directories. Throws Io.
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace tracker
