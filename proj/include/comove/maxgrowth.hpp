#pragma once

#include <atomic>
#include <memory>
#include <span>
#include <vector>

#include "comove/clustering.hpp"
#include "comove/stats.hpp"

namespace comove {

/// (object, position) -> ids of clusters containing that visit.
class ClusterIndex {
 public:
  ClusterIndex(const Dataset& data, std::span<const Cluster> clusters);
  std::span<const ClusterId> at(ObjectId o, Position p) const;
  std::size_t path_length(ObjectId o) const { return object_offset_[o.value + 1] - object_offset_[o.value]; }

 private:
  std::vector<std::size_t> object_offset_;  // first slot of each object
  std::vector<std::vector<ClusterId>> slots_;
};

/// A cluster sequence S with its core objects lambda(S). Each core object
/// carries every position in the last cluster that it can reach through a
/// valid chain of earlier positions.
struct ClusterSequence {
  std::vector<ClusterId> clusters;
  std::vector<Member> core;  // sorted by (object, position)
};

/// lambda(S || [next]): members of `next` one step after a core position,
/// 0 < p - p_last <= d + 1.
std::vector<Member> extend_core(std::span<const Member> core, const Cluster& next, Gap d);

/// Feasible clusters for `s` with the core each would keep, ordered by
/// cluster id.
struct Feasible {
  ClusterId cluster;
  std::vector<Member> core;
};
std::vector<Feasible> feasible_clusters(const ClusterSequence& s, const ClusterIndex& index,
                                        const MiningParams& params);

/// True when every core entry (o, p) of s || [a] has an entry (o, q) in
/// s || [b] with q < p. Both clusters must be feasible for `s`.
bool depends_on(const Cluster& a, const Cluster& b, const ClusterSequence& s, Gap d);

/// Search order over clusters from the precedence relation: a topological
/// order of the strongly connected components, ids breaking ties.
struct SearchOrder {
  std::vector<ClusterId> order;
  std::vector<std::uint32_t> rank;  // rank[cluster id] = index in order
  std::vector<std::uint32_t> scc;   // component of each cluster
  std::size_t num_sccs = 0;
  std::size_t non_singleton_sccs = 0;
};
SearchOrder precedence_order(std::span<const Cluster> clusters, std::size_t num_objects);

struct MaxGrowthOptions {
  bool root_prune = true;
  bool dep_prune = true;
  bool parallel = false;
  unsigned threads = 0;  // 0: hardware concurrency
  bool keep_candidates = false;
};

/// Clusters whose root subtree may be skipped. Insert-only and safe to share
/// between threads.
class RootPruneSet {
 public:
  explicit RootPruneSet(std::size_t n) : pruned_(n), entered_(n) {}
  /// Returns true on first insertion.
  bool insert(ClusterId c) { return !pruned_[c.value].exchange(true, std::memory_order_relaxed); }
  bool contains(ClusterId c) const { return pruned_[c.value].load(std::memory_order_relaxed); }
  void mark_entered(ClusterId c) { entered_[c.value].store(true, std::memory_order_relaxed); }
  bool entered(ClusterId c) const { return entered_[c.value].load(std::memory_order_relaxed); }

 private:
  std::vector<std::atomic<bool>> pruned_;
  std::vector<std::atomic<bool>> entered_;
};

/// Depth-first growth of feasible cluster sequences. Emits R(S) for every
/// grown sequence with |S| >= k; every emitted candidate is a valid pattern.
class GrowthEngine {
 public:
  /// `revisits[o]` is non-zero when object o visits some camera twice.
  GrowthEngine(std::span<const Cluster> clusters, const ClusterIndex& index, const MiningParams& params,
               const MaxGrowthOptions& options, RootPruneSet& pruned, std::span<const char> revisits);

  void grow(ClusterSequence& s);
  /// Starts a root subtree unless root pruning has already claimed it.
  bool grow_root(ClusterId root);

  std::vector<Pattern>& candidates() { return candidates_; }
  std::size_t revisiting_objects(std::span<const Member> core) const;
  std::uint64_t emitted() const { return emitted_; }
  std::uint64_t dependency_pruned() const { return dependency_pruned_; }
  std::uint64_t nodes_expanded() const { return nodes_expanded_; }
  std::uint64_t late_root_prunes() const { return late_root_prunes_; }

 private:
  std::span<const Cluster> clusters_;
  const ClusterIndex& index_;
  const MiningParams& params_;
  const MaxGrowthOptions& options_;
  RootPruneSet& pruned_;
  std::span<const char> revisits_;
  std::vector<Pattern> candidates_;
  std::uint64_t emitted_ = 0;
  std::uint64_t dependency_pruned_ = 0;
  std::uint64_t nodes_expanded_ = 0;
  std::uint64_t late_root_prunes_ = 0;
};

/// Per object, whether its travel path visits some camera more than once.
std::vector<char> revisiting(const Dataset& data);

/// Mines all maximal relaxed co-movement patterns without a verification
/// stage.
MiningResult mine_maxgrowth(const Dataset& data, const MiningParams& params, const MaxGrowthOptions& options = {});

}  // namespace comove
