#include "sketchks/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>

#include <fmt/format.h>

#include "sketchks/errors.hpp"

namespace sketchks {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_finite(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

}  // namespace

IngestResult ingest(std::istream& in, const IngestOptions& options) {
  IngestResult result;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && options.skip_header) continue;
    const std::string_view text = trim(line);
    if (text.empty()) continue;

    double value = 0.0;
    if (parse_finite(text, value)) {
      result.values.push_back(value);
    } else if (options.skip_invalid) {
      ++result.skipped;
    } else {
      throw ParseError(fmt::format("line {}: '{}' is not a finite decimal number", line_no, text), line_no);
    }
  }
  if (result.values.empty()) throw DomainError("input contains no usable values");
  return result;
}

IngestResult ingest(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  return ingest(in, options);
}

}  // namespace sketchks
