#include "comove/maxgrowth.hpp"

#include <algorithm>
#include <mutex>
#include <queue>
#include <thread>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

#include "comove/maximality.hpp"

namespace comove {

ClusterIndex::ClusterIndex(const Dataset& data, std::span<const Cluster> clusters) {
  object_offset_.resize(data.num_objects() + 1, 0);
  for (const TravelPath& path : data.paths()) object_offset_[path.object.value + 1] = path.size();
  for (std::size_t i = 1; i < object_offset_.size(); ++i) object_offset_[i] += object_offset_[i - 1];
  slots_.resize(object_offset_.back());
  for (const Cluster& cl : clusters) {
    for (const Member& mbr : cl.members) slots_[object_offset_[mbr.object.value] + mbr.position - 1].push_back(cl.id);
  }
}

std::span<const ClusterId> ClusterIndex::at(ObjectId o, Position p) const {
  const std::size_t base = object_offset_[o.value];
  if (p == 0 || base + p - 1 >= object_offset_[o.value + 1]) return {};
  return slots_[base + p - 1];
}

std::vector<Member> extend_core(std::span<const Member> core, const Cluster& next, Gap d) {
  return carry_forward(core, next.members, d);
}

std::vector<Feasible> feasible_clusters(const ClusterSequence& s, const ClusterIndex& index,
                                        const MiningParams& params) {
  // DT tally: (cluster, member) pairs reached from the core within d + 1 steps.
  std::vector<std::pair<ClusterId, Member>> hits;
  for (const Member& c : s.core) {
    const std::uint64_t last =
        std::min<std::uint64_t>(static_cast<std::uint64_t>(c.position) + params.d + 1, index.path_length(c.object));
    for (std::uint64_t p = c.position + 1; p <= last; ++p) {
      const auto ids = index.at(c.object, static_cast<Position>(p));
      for (ClusterId id : ids) hits.emplace_back(id, Member{c.object, static_cast<Position>(p)});
    }
  }
  std::sort(hits.begin(), hits.end());
  hits.erase(std::unique(hits.begin(), hits.end()), hits.end());

  std::vector<Feasible> out;
  for (std::size_t i = 0; i < hits.size();) {
    std::size_t j = i;
    std::size_t objects = 0;
    for (; j < hits.size() && hits[j].first == hits[i].first; ++j) {
      objects += j == i || hits[j].second.object != hits[j - 1].second.object;
    }
    if (objects >= params.m) {
      Feasible f{hits[i].first, {}};
      f.core.reserve(j - i);
      for (std::size_t t = i; t < j; ++t) f.core.push_back(hits[t].second);
      out.push_back(std::move(f));
    }
    i = j;
  }
  return out;
}

namespace {

// Every (o, p_a) of `a` has some (o, p_b) in `b` with p_b < p_a. Lists are
// sorted by (object, position), so the first entry per object is its minimum.
bool core_depends(std::span<const Member> a, std::span<const Member> b) {
  auto it = b.begin();
  for (const Member& x : a) {
    while (it != b.end() && it->object < x.object) ++it;
    if (it == b.end() || it->object != x.object || it->position >= x.position) return false;
  }
  return true;
}

}  // namespace

bool depends_on(const Cluster& a, const Cluster& b, const ClusterSequence& s, Gap d) {
  const auto core_a = extend_core(s.core, a, d);
  const auto core_b = extend_core(s.core, b, d);
  return !core_a.empty() && core_depends(core_a, core_b);
}

SearchOrder precedence_order(std::span<const Cluster> clusters, std::size_t num_objects) {
  using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
  const std::size_t n = clusters.size();
  Graph g(n);

  std::vector<std::vector<std::pair<Position, std::uint32_t>>> by_object(num_objects);
  for (const Cluster& cl : clusters) {
    for (const Member& mbr : cl.members) by_object[mbr.object.value].emplace_back(mbr.position, cl.id.value);
  }
  for (auto& list : by_object) {
    std::sort(list.begin(), list.end());
    std::size_t group_start = 0;
    for (std::size_t i = 0; i < list.size(); ++i) {
      if (i > 0 && list[i].first == list[i - 1].first) {
        // Equal positions precede each other both ways.
        boost::add_edge(list[i - 1].second, list[i].second, g);
        boost::add_edge(list[i].second, list[i - 1].second, g);
      } else if (i > 0) {
        boost::add_edge(list[group_start].second, list[i].second, g);
        group_start = i;
      }
    }
  }

  SearchOrder result;
  result.scc.assign(n, 0);
  result.num_sccs = n == 0 ? 0 : static_cast<std::size_t>(boost::strong_components(g, result.scc.data()));

  std::vector<std::vector<std::uint32_t>> members(result.num_sccs);
  for (std::uint32_t v = 0; v < n; ++v) members[result.scc[v]].push_back(v);  // ascending ids
  for (const auto& m : members) result.non_singleton_sccs += m.size() > 1;

  std::vector<std::vector<std::uint32_t>> dag(result.num_sccs);
  std::vector<std::uint32_t> indegree(result.num_sccs, 0);
  for (auto [e, end] = boost::edges(g); e != end; ++e) {
    const auto a = result.scc[boost::source(*e, g)];
    const auto b = result.scc[boost::target(*e, g)];
    if (a != b) dag[a].push_back(b);
  }
  for (auto& out : dag) {
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (auto b : out) ++indegree[b];
  }

  // Kahn's algorithm; ready components leave in order of their smallest id.
  using Ready = std::pair<std::uint32_t, std::uint32_t>;  // (min cluster id, component)
  std::priority_queue<Ready, std::vector<Ready>, std::greater<>> ready;
  for (std::uint32_t c = 0; c < result.num_sccs; ++c) {
    if (indegree[c] == 0) ready.emplace(members[c].front(), c);
  }
  result.order.reserve(n);
  while (!ready.empty()) {
    const auto c = ready.top().second;
    ready.pop();
    for (auto v : members[c]) result.order.push_back(ClusterId{v});
    for (auto b : dag[c]) {
      if (--indegree[b] == 0) ready.emplace(members[b].front(), b);
    }
  }
  result.rank.assign(n, 0);
  for (std::uint32_t i = 0; i < result.order.size(); ++i) result.rank[result.order[i].value] = i;
  return result;
}

GrowthEngine::GrowthEngine(std::span<const Cluster> clusters, const ClusterIndex& index, const MiningParams& params,
                           const MaxGrowthOptions& options, RootPruneSet& pruned, std::span<const char> revisits)
    : clusters_(clusters), index_(index), params_(params), options_(options), pruned_(pruned), revisits_(revisits) {}

std::size_t GrowthEngine::revisiting_objects(std::span<const Member> core) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < core.size(); ++i) {
    if ((i == 0 || core[i].object != core[i - 1].object) && revisits_[core[i].object.value]) ++n;
  }
  return n;
}

std::vector<char> revisiting(const Dataset& data) {
  std::vector<char> out(data.num_objects(), 0);
  for (const TravelPath& path : data.paths()) {
    for (const auto& [camera, positions] : data.camera_positions(path.object)) {
      if (positions.size() > 1) out[path.object.value] = 1;
    }
  }
  return out;
}

bool GrowthEngine::grow_root(ClusterId root) {
  if (options_.root_prune && pruned_.contains(root)) return false;
  pruned_.mark_entered(root);
  const Cluster& cl = clusters_[root.value];
  ClusterSequence s{{root}, cl.members};
  grow(s);
  return true;
}

void GrowthEngine::grow(ClusterSequence& s) {
  ++nodes_expanded_;
  auto feasible = feasible_clusters(s, index_, params_);

  if (options_.root_prune) {
    for (const Feasible& f : feasible) {
      // Root pruning: every member of the cluster survives as a core object.
      if (f.core.size() == clusters_[f.cluster.value].members.size() && pruned_.insert(f.cluster) &&
          pruned_.entered(f.cluster)) {
        ++late_root_prunes_;
      }
    }
  }

  std::vector<char> extend(feasible.size(), 1);
  // Dependency pruning trades S || a for S || b || a, which skips one route index, so it
  // needs d >= 1. Dominance is only transitive through an object that never
  // repeats a camera, hence the guard on revisiting core objects.
  if (options_.dep_prune && params_.d > 0) {
    for (std::size_t a = 0; a < feasible.size(); ++a) {
      if (revisiting_objects(feasible[a].core) >= params_.m) continue;
      for (std::size_t b = 0; b < feasible.size(); ++b) {
        if (a != b && core_depends(feasible[a].core, feasible[b].core)) {
          extend[a] = 0;
          ++dependency_pruned_;
          break;
        }
      }
    }
  }

  for (std::size_t i = 0; i < feasible.size(); ++i) {
    if (!extend[i]) continue;
    ClusterSequence next{s.clusters, std::move(feasible[i].core)};
    next.clusters.push_back(feasible[i].cluster);
    grow(next);
  }

  if (s.clusters.size() >= params_.k) {
    Pattern p;
    for (const Member& c : s.core) {
      if (p.objects.empty() || p.objects.back() != c.object) p.objects.push_back(c.object);
    }
    p.route.reserve(s.clusters.size());
    for (ClusterId id : s.clusters) p.route.push_back(clusters_[id.value].camera);
    candidates_.push_back(std::move(p));
    ++emitted_;
  }
}

MiningResult mine_maxgrowth(const Dataset& data, const MiningParams& params, const MaxGrowthOptions& options) {
  params.validate();
  MiningResult result;
  std::vector<Pattern> candidates;
  {
    StageTimer timer;
    const auto clusters = build_clusters(data, params.m, params.eps);
    const ClusterIndex index(data, clusters);
    const SearchOrder order = precedence_order(clusters, data.num_objects());
    RootPruneSet pruned(clusters.size());
    const auto revisits = revisiting(data);

    auto& st = result.stats;
    st.clusters = clusters.size();
    st.roots_total = clusters.size();
    st.sccs = order.num_sccs;
    st.non_singleton_sccs = order.non_singleton_sccs;

    auto absorb = [&](GrowthEngine& engine) {
      st.candidates += engine.emitted();
      st.dependency_pruned += engine.dependency_pruned();
      st.nodes_expanded += engine.nodes_expanded();
      st.late_root_prunes += engine.late_root_prunes();
      auto& c = engine.candidates();
      candidates.insert(candidates.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
    };

    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    if (!options.parallel || threads == 1 || clusters.size() < 2) {
      GrowthEngine engine(clusters, index, params, options, pruned, revisits);
      for (ClusterId root : order.order) {
        if (!engine.grow_root(root)) ++st.roots_pruned;
      }
      absorb(engine);
    } else {
      std::atomic<std::size_t> next{0};
      std::atomic<std::uint64_t> skipped{0};
      std::vector<std::unique_ptr<GrowthEngine>> engines;
      for (unsigned t = 0; t < threads; ++t) {
        engines.push_back(std::make_unique<GrowthEngine>(clusters, index, params, options, pruned, revisits));
      }
      std::vector<std::jthread> workers;
      for (unsigned t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
          for (std::size_t i; (i = next.fetch_add(1)) < order.order.size();) {
            if (!engines[t]->grow_root(order.order[i])) skipped.fetch_add(1);
          }
        });
      }
      workers.clear();
      st.roots_pruned = skipped.load();
      for (auto& e : engines) absorb(*e);
    }
    result.stats.stages.push_back({std::string(stage::kCandidateGeneration), timer.elapsed_ms(), st.candidates, 0});
  }
  // Every candidate is valid by construction; nothing to verify.
  result.stats.stages.push_back({std::string(stage::kValidnessVerification), 0.0, 0, 0});
  finish_mining(result, std::move(candidates), data, params, options.keep_candidates);
  return result;
}

}  // namespace comove
