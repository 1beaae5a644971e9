#pragma once

// Sample CSV (header x1,...,xd; 17 significant digits) and JSON spec loading.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "rvtail/error.hpp"
#include "rvtail/sample_batch.hpp"

namespace rvtail {

using json = nlohmann::json;

namespace detail {

inline void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

inline double parse_double(std::string_view s, std::size_t line) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(ErrorKind::Io, "line " + std::to_string(line) + ": cannot parse \"" + std::string(s) + "\" as a number");
  return v;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace detail

inline void write_csv(std::ostream& os, const SampleBatch& batch) {
  std::string out;
  for (std::size_t j = 0; j < batch.dim(); ++j) {
    if (j) out += ',';
    out += 'x' + std::to_string(j + 1);
  }
  out += '\n';
  for (std::size_t i = 0; i < batch.size(); ++i) {
    for (std::size_t j = 0; j < batch.dim(); ++j) {
      if (j) out += ',';
      detail::append_double(out, batch.column(j)[i]);
    }
    out += '\n';
  }
  os << out;
}

inline void write_csv(const std::filesystem::path& path, const SampleBatch& batch) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  write_csv(os, batch);
  if (!os) fail(ErrorKind::Io, "write to " + path.string() + " failed");
}

/// Reads a sample CSV; the polar cache is recomputed from the coordinates.
inline SampleBatch read_csv(std::istream& is, std::uint64_t seed = 0) {
  std::string line;
  if (!std::getline(is, line)) fail(ErrorKind::Io, "sample CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = detail::split_commas(line);
  const std::size_t d = header.size();
  for (std::size_t j = 0; j < d; ++j) {
    if (header[j] != "x" + std::to_string(j + 1)) fail(ErrorKind::Io, "sample CSV header must be x1,...,xd");
  }
  require(d >= 2, ErrorKind::DimensionMismatch, "sample CSV needs at least two coordinates");
  std::vector<std::vector<double>> cols(d);
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto fields = detail::split_commas(line);
    if (fields.size() != d) fail(ErrorKind::Io, "line " + std::to_string(lineno) + ": expected " + std::to_string(d) + " fields");
    for (std::size_t j = 0; j < d; ++j) cols[j].push_back(detail::parse_double(fields[j], lineno));
  }
  return SampleBatch::from_columns(std::move(cols), seed);
}

inline SampleBatch read_csv(const std::filesystem::path& path, std::uint64_t seed = 0) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::Io, "cannot open " + path.string());
  return read_csv(is, seed);
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

/// Accepts inline JSON, a path to a JSON file, or a bare name (returned as a
/// JSON string, e.g. "quadrant_snap").
inline json load_spec(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\n");
  require(first != std::string::npos, ErrorKind::InvalidSpec, "empty spec");
  const char c = arg[first];
  std::string text;
  if (c == '{' || c == '[' || c == '"') {
    text = arg;
  } else if (std::filesystem::is_regular_file(arg)) {
    text = read_text(arg);
  } else {
    return json(arg);
  }
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::InvalidSpec, std::string("invalid JSON: ") + e.what());
  }
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  os << text;
  if (!os) fail(ErrorKind::Io, "write to " + path.string() + " failed");
}

}  // namespace rvtail
