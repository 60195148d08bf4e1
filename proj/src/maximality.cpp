#include "comove/maximality.hpp"

#include <algorithm>

namespace comove {

bool dominates(const Pattern& big, const Pattern& small, Gap d) {
  if (small.objects.size() > big.objects.size() || small.route.size() > big.route.size()) return false;
  if (!std::includes(big.objects.begin(), big.objects.end(), small.objects.begin(), small.objects.end())) {
    return false;
  }
  return route_embeds(small.route, big.route, d);
}

PatternIndex::PatternIndex(const std::vector<Pattern>& patterns) {
  for (std::uint32_t i = 0; i < patterns.size(); ++i) {
    for (ObjectId o : patterns[i].objects) {
      if (o.value >= postings_.size()) postings_.resize(o.value + 1);
      postings_[o.value].push_back(i);
    }
  }
}

const std::vector<std::uint32_t>& PatternIndex::postings(ObjectId o) const {
  static const std::vector<std::uint32_t> empty;
  return o.value < postings_.size() ? postings_[o.value] : empty;
}

std::vector<std::uint32_t> PatternIndex::superset_candidates(const Pattern& p) const {
  if (p.objects.empty()) return {};
  // Two rarest objects bound the candidate set; `dominates` verifies the rest.
  std::vector<const std::vector<std::uint32_t>*> lists;
  for (ObjectId o : p.objects) lists.push_back(&postings(o));
  std::partial_sort(lists.begin(), lists.begin() + std::min<std::size_t>(2, lists.size()), lists.end(),
                    [](auto* a, auto* b) { return a->size() < b->size(); });
  if (lists.size() == 1) return *lists[0];
  std::vector<std::uint32_t> out;
  std::set_intersection(lists[0]->begin(), lists[0]->end(), lists[1]->begin(), lists[1]->end(),
                        std::back_inserter(out));
  return out;
}

bool PatternIndex::audit(const std::vector<Pattern>& patterns) const {
  std::size_t listed = 0;
  for (std::size_t o = 0; o < postings_.size(); ++o) {
    const auto& list = postings_[o];
    if (std::adjacent_find(list.begin(), list.end(), [](auto a, auto b) { return a >= b; }) != list.end()) {
      return false;
    }
    for (auto id : list) {
      const auto& objs = patterns[id].objects;
      if (!std::binary_search(objs.begin(), objs.end(), ObjectId{static_cast<std::uint32_t>(o)})) return false;
    }
    listed += list.size();
  }
  std::size_t expected = 0;
  for (const Pattern& p : patterns) expected += p.objects.size();
  return listed == expected;
}

MaximalityResult remove_non_maximal_detailed(std::vector<Pattern> patterns, Gap d) {
  MaximalityResult result;
  sort_canonical(patterns);
  const std::size_t before = patterns.size();
  patterns.erase(std::unique(patterns.begin(), patterns.end(), same_key), patterns.end());
  result.duplicates_removed = before - patterns.size();

  const PatternIndex index(patterns);
  std::vector<char> keep(patterns.size(), 1);
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const Pattern& p = patterns[i];
    for (std::uint32_t j : index.superset_candidates(p)) {
      if (j == i) continue;
      const Pattern& q = patterns[j];
      if (q.route.size() < p.route.size()) continue;
      if (dominates(q, p, d)) {
        keep[i] = 0;
        break;
      }
    }
  }
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    if (keep[i]) result.maximal.push_back(std::move(patterns[i]));
  }
  result.dominated_removed = patterns.size() - result.maximal.size();
  return result;
}

}  // namespace comove
