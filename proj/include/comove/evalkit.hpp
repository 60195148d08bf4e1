#pragma once

#include <array>
#include <string>
#include <vector>

#include "comove/model.hpp"

namespace comove {

struct Range {
  std::int64_t min = 0;
  std::int64_t max = 0;
};

struct GenConfig {
  std::size_t num_cameras = 64;
  std::size_t grid_degree = 4;  // target mean degree of the camera graph
  std::size_t num_objects = 200;
  std::size_t num_planted_groups = 10;
  Range group_size{3, 6};
  Range route_length{4, 8};
  Timestamp entrance_jitter = 5;
  Range background_path_length{2, 6};
  Range hop_time{60, 180};  // entrance-to-entrance time between consecutive cameras
  Range dwell{5, 30};
  Timestamp horizon = 7200;  // start times are drawn from [0, horizon]
  std::uint64_t seed = 1;
  MiningParams params{3, 3, 0, 10};  // parameters of the golden run

  void validate() const;
};

struct Synthetic {
  Dataset data;
  std::vector<Pattern> golden;
};

/// Planted groups follow simple routes on a random connected camera graph;
/// the remaining objects take random walks. Golden patterns are the maximal
/// patterns of the clean data under `cfg.params`.
Synthetic gen_synthetic(const GenConfig& cfg);

struct NoiseSpec {
  double shift_rate = 0;  // per visit
  Timestamp shift_max = 0;
  double delete_rate = 0;    // per visit
  double idswitch_rate = 0;  // per object
  std::uint64_t seed = 1;

  void validate() const;
};

struct NoiseTrace {
  struct Shift {
    std::string object;
    std::size_t index;  // 0-based visit index in the input path
    Timestamp offset;   // applied offset after clamping
  };
  struct Deletion {
    std::string object;
    std::size_t index;
  };
  struct Switch {
    std::string first;
    std::string second;
    Timestamp cut;  // suffixes with entrance > cut are exchanged
  };
  std::vector<Shift> shifts;
  std::vector<Deletion> deletions;
  std::vector<Switch> switches;
  std::vector<std::string> dropped;  // objects left with no visits
};

/// Shift, then delete, then switch identities. Pure in (data, spec).
Dataset inject_noise(const Dataset& data, const NoiseSpec& spec, NoiseTrace* trace = nullptr);

struct Match {
  std::size_t found;
  std::size_t golden;
  double object_iou;
  double span_iou;
};

struct EvalReport {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t matched_found = 0;
  std::size_t matched_golden = 0;
  std::vector<Match> matches;
  std::array<std::size_t, 10> iou_histogram{};  // bins of width 0.1 over each found pattern's best IoU
};

double object_iou(const std::vector<std::string>& a, const std::vector<std::string>& b);
double span_iou(const Interval& a, const Interval& b);

struct MatchOptions {
  double threshold = 0.8;
  bool many_to_one = false;
};

/// Patterns are compared by object name so found and golden may come from
/// different datasets. An empty side scores 1 if the other side is empty
/// too, else 0. Throws InputError when a span is missing.
EvalReport match_patterns(const std::vector<NamedPattern>& found, const std::vector<NamedPattern>& golden,
                          const MatchOptions& options = {});

struct SweepRow {
  Gap d;
  std::size_t found;
  double precision;
  double recall;
  double f1;
};

std::vector<SweepRow> sweep_d(const Dataset& data, const std::vector<NamedPattern>& golden,
                              const MiningParams& base, const std::vector<Gap>& d_values,
                              const MatchOptions& options = {});

std::vector<NamedPattern> to_named(const std::vector<Pattern>& patterns, const Dataset& data);

}  // namespace comove
