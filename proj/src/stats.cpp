#include "comove/stats.hpp"

#include "comove/maximality.hpp"

namespace comove {

void finish_mining(MiningResult& result, std::vector<Pattern> candidates, const Dataset& data,
                   const MiningParams& params, bool keep_candidates) {
  auto& st = result.stats;
  const std::uint64_t total = candidates.size();
  if (keep_candidates) result.candidates = candidates;

  StageTimer dominance;
  MaximalityResult filtered = remove_non_maximal_detailed(std::move(candidates), params.d);
  st.stages.push_back({std::string(stage::kDominanceVerification), dominance.elapsed_ms(), total,
                       filtered.duplicates_removed + filtered.dominated_removed});

  // Spans come from the canonical witness so every miner annotates alike.
  StageTimer annotation;
  result.patterns = std::move(filtered.maximal);
  for (Pattern& p : result.patterns) annotate(p, data, params);
  st.stages.push_back({std::string(stage::kAnnotation), annotation.elapsed_ms(), result.patterns.size(), 0});

  st.final_patterns = result.patterns.size();
  st.non_maximal = total - result.patterns.size();
}

}  // namespace comove
