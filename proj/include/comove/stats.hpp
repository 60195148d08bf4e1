#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "comove/model.hpp"

namespace comove {

namespace stage {
inline constexpr std::string_view kCandidateGeneration = "candidate_generation";
inline constexpr std::string_view kValidnessVerification = "validness_verification";
inline constexpr std::string_view kDominanceVerification = "dominance_verification";
inline constexpr std::string_view kAnnotation = "annotation";
}  // namespace stage

struct StageStats {
  std::string stage;
  double wall_ms = 0;
  std::uint64_t candidates = 0;           // work items entering the stage
  std::uint64_t non_maximal_removed = 0;  // dominance stage only
};

struct MiningStats {
  std::vector<StageStats> stages;

  std::uint64_t clusters = 0;
  std::uint64_t candidates = 0;   // emitted before dominance elimination, with multiplicity
  std::uint64_t non_maximal = 0;  // candidates - final patterns
  std::uint64_t final_patterns = 0;

  // MaxGrowth search counters.
  std::uint64_t roots_total = 0;
  std::uint64_t roots_pruned = 0;
  std::uint64_t late_root_prunes = 0;  // root prunes found after the root was already entered
  std::uint64_t dependency_pruned = 0;
  std::uint64_t nodes_expanded = 0;
  std::uint64_t sccs = 0;
  std::uint64_t non_singleton_sccs = 0;

  // FRB counters.
  std::uint64_t filter_candidates = 0;

  const StageStats* find(std::string_view name) const {
    for (const auto& s : stages) {
      if (s.stage == name) return &s;
    }
    return nullptr;
  }
};

struct MiningResult {
  std::vector<Pattern> patterns;  // maximal, annotated, canonical order
  MiningStats stats;
  std::vector<Pattern> candidates;  // pre-filter candidates, only when requested
};

class StageTimer {
 public:
  StageTimer() : start_(std::chrono::steady_clock::now()) {}
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Removes non-maximal candidates, annotates survivors and appends the
/// dominance and annotation stages. Shared tail of every miner.
void finish_mining(MiningResult& result, std::vector<Pattern> candidates, const Dataset& data,
                   const MiningParams& params, bool keep_candidates);

}  // namespace comove
