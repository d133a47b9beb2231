#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <vector>

namespace sketchks {

struct IngestOptions {
  bool skip_header = false;   // drop the first line unconditionally
  bool skip_invalid = false;  // drop unparsable and non-finite lines instead of failing
};

struct IngestResult {
  std::vector<double> values;
  std::size_t skipped = 0;
};

/// Reads newline-delimited decimals. Blank lines are ignored. Throws
/// ParseError (with 1-based line number) on a bad line unless skip_invalid,
/// and DomainError when nothing usable remains.
IngestResult ingest(std::istream& in, const IngestOptions& options = {});
IngestResult ingest(const std::filesystem::path& path, const IngestOptions& options = {});

}  // namespace sketchks
