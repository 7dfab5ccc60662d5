#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace slime {

// Shortest decimal string that parses back to exactly the same double.
// Deterministic, so file outputs built from it are byte-stable.
std::string format_double(double v);

double parse_double(std::string_view s);  // throws data_error on junk

std::string read_file(const std::filesystem::path& p);
std::vector<std::string> read_lines(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, std::string_view content);

// Minimal csv: fields quoted only when they contain ',', '"' or '\n'.
std::string csv_join(const std::vector<std::string>& fields);
std::vector<std::string> csv_split(std::string_view line);

std::string xml_escape(std::string_view s);

std::string lowercase_ascii(std::string_view s);
std::string trim(std::string_view s);

}  // namespace slime
