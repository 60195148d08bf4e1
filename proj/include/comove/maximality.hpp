#pragma once

#include <vector>

#include "comove/model.hpp"

namespace comove {

/// `big` dominates `small` when it has a superset of the objects and
/// `small.route` embeds into `big.route` under gap d. Annotations are ignored.
bool dominates(const Pattern& big, const Pattern& small, Gap d);

/// Inverted index over a deduplicated pattern list: object -> pattern ids.
class PatternIndex {
 public:
  explicit PatternIndex(const std::vector<Pattern>& patterns);

  const std::vector<std::uint32_t>& postings(ObjectId o) const;
  /// Ids of patterns containing every object of `p` (p itself included).
  std::vector<std::uint32_t> superset_candidates(const Pattern& p) const;
  bool audit(const std::vector<Pattern>& patterns) const;

 private:
  std::vector<std::vector<std::uint32_t>> postings_;
};

struct MaximalityResult {
  std::vector<Pattern> maximal;         // canonical order
  std::size_t duplicates_removed = 0;
  std::size_t dominated_removed = 0;
};

/// Exact-duplicate removal, then drops every pattern dominated by another.
/// The survivors form an antichain under `dominates`.
MaximalityResult remove_non_maximal_detailed(std::vector<Pattern> patterns, Gap d);

inline std::vector<Pattern> remove_non_maximal(std::vector<Pattern> patterns, Gap d) {
  return remove_non_maximal_detailed(std::move(patterns), d).maximal;
}

}  // namespace comove
