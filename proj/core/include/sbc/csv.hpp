#pragma once

#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>

namespace sbc::csv {

// Shortest decimal that round-trips to the same double ("inf", "-inf",
// "nan" for non-finite values). Locale independent.
std::string format_double(double value);

// Appends one comma-separated, LF-terminated record.
void append_row(std::string& out, std::initializer_list<std::string_view> fields);

// Writes `content` verbatim; throws std::runtime_error naming the path.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace sbc::csv
