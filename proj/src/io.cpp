#include "bfi/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <vector>

#include "bfi/errors.hpp"

namespace bfi {

namespace {

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

double parse_time(std::string_view field, std::size_t row) {
  field = trim(field);
  double value = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw InputError("time is not a number: '" + std::string(field) + "'", row, 1);
  }
  if (!std::isfinite(value) || value <= 0.0) {
    throw InputError("time must be finite and > 0, got '" + std::string(field) + "'", row, 1);
  }
  return value;
}

bool parse_status(std::string_view field, std::size_t row) {
  field = trim(field);
  if (field == "1") return true;
  if (field == "0") return false;
  throw InputError("status must be 0 or 1, got '" + std::string(field) + "'", row, 2);
}

}  // namespace

SurvivalDataset parse_csv(std::string_view text, std::string time_unit) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  auto lines = split_lines(text);
  while (!lines.empty() && strip_cr(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw InputError("empty file: expected header 'time,status'", 1, 0);

  const auto header = lower(trim(strip_cr(lines.front())));
  if (header != "time,status") {
    throw InputError("header must be 'time,status', got '" + std::string(strip_cr(lines.front())) + "'",
                     1, 0);
  }

  std::vector<Observation> obs;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t row = i + 1;
    const auto line = strip_cr(lines[i]);
    const auto comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw InputError("expected exactly two fields", row, 0);
    }
    const double time = parse_time(line.substr(0, comma), row);
    const bool event = parse_status(line.substr(comma + 1), row);
    obs.emplace_back(time, event);
  }
  if (obs.empty()) throw InputError("no observations after header", 2, 0);
  return SurvivalDataset(std::move(obs), std::move(time_unit));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw InputError("read error on '" + path.string() + "'");
  return buf.str();
}

SurvivalDataset ingest_csv(const std::filesystem::path& path, std::string time_unit) {
  return parse_csv(read_file(path), std::move(time_unit));
}

std::string write_csv(const SurvivalDataset& data) {
  std::string out = "time,status\n";
  std::array<char, 64> buf{};
  for (const auto& o : data.observations()) {
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), o.time());
    out.append(buf.data(), ptr);
    out += o.event() ? ",1\n" : ",0\n";
  }
  return out;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 failed");
  }
  std::string hex;
  hex.reserve(2 * len);
  constexpr char kHex[] = "0123456789abcdef";
  for (unsigned int i = 0; i < len; ++i) {
    hex += kHex[digest[i] >> 4];
    hex += kHex[digest[i] & 0xF];
  }
  return hex;
}

}  // namespace bfi
