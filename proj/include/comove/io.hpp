#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "comove/model.hpp"
#include "comove/stats.hpp"

namespace comove {

/// Paths file: a `#comove-paths v1 unit=s|ms` header, then one object per
/// line as `object camera enter exit camera enter exit ...`. Blank lines and
/// further `#` lines are ignored. Errors carry `source:line`.
Dataset parse_dataset(std::istream& in, const std::string& source = "<input>");
Dataset load_dataset(const std::filesystem::path& file);

/// Canonical form: objects in name order, single spaces, trailing newline.
void write_dataset(std::ostream& out, const Dataset& data);
void save_dataset(const std::filesystem::path& file, const Dataset& data);
std::string dataset_text(const Dataset& data);

/// "fnv1a64:<16 hex digits>" over the canonical text.
std::string dataset_digest(const Dataset& data);

struct Provenance {
  std::string algorithm;
  MiningParams params;
  std::string unit = "s";
  std::string dataset;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct PatternRecord {
  NamedPattern pattern;
  Provenance provenance;
};

/// One JSON object per line with fields in a fixed order.
void write_patterns(std::ostream& out, const std::vector<NamedPattern>& patterns, const Provenance& provenance);
std::vector<PatternRecord> read_patterns(std::istream& in, const std::string& source = "<input>");
std::vector<PatternRecord> load_patterns(const std::filesystem::path& file);

/// One record per stage: {stage, wall_ms, candidates, non_maximal_removed}.
/// Without timings wall_ms is written as 0 so the file is reproducible.
void write_stats(std::ostream& out, const MiningStats& stats, bool timings = true);

}  // namespace comove
