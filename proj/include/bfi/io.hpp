#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "bfi/survival.hpp"

namespace bfi {

/// Parses `time,status` CSV text. The header is matched case-insensitively;
/// LF and CRLF line endings and a leading UTF-8 BOM are accepted. Rows are
/// numbered from 1 (the header); columns are 1 = time, 2 = status.
SurvivalDataset parse_csv(std::string_view text, std::string time_unit = "months");

/// Reads and parses a CSV file. Throws InputError on IO or parse failure.
SurvivalDataset ingest_csv(const std::filesystem::path& path, std::string time_unit = "months");

/// Serializes in the same format, times written with round-trip precision.
std::string write_csv(const SurvivalDataset& data);

std::string read_file(const std::filesystem::path& path);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

}  // namespace bfi
