#include "comove/oracle.hpp"

#include <algorithm>
#include <bitset>
#include <map>
#include <set>
#include <string>

namespace comove {

namespace {

using Route = std::vector<CameraId>;
using Embedding = std::vector<Position>;

// All position sequences of `path` with consecutive gaps <= d + 1.
void walk(const TravelPath& path, Gap d, Embedding& current, std::map<Route, std::vector<Embedding>>& out,
          std::size_t min_len) {
  if (current.size() >= min_len) {
    Route r;
    for (Position p : current) r.push_back(path.at(p).camera);
    out[r].push_back(current);
  }
  const std::uint64_t last = current.back();
  const std::uint64_t limit = std::min<std::uint64_t>(last + d + 1, path.size());
  for (std::uint64_t p = last + 1; p <= limit; ++p) {
    current.push_back(static_cast<Position>(p));
    walk(path, d, current, out, min_len);
    current.pop_back();
  }
}

struct Item {
  ObjectId object;
  std::vector<Timestamp> entrances;
};

using Bits = std::bitset<4096>;

// Bron-Kerbosch with pivoting; reports the object sets of maximal cliques.
void cliques(const std::vector<Bits>& adj, const std::vector<Item>& items, Bits r, Bits p, Bits x,
             std::size_t m, std::set<std::vector<ObjectId>>& out) {
  if (p.none() && x.none()) {
    if (r.count() >= m) {
      std::vector<ObjectId> objs;
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (r[i]) objs.push_back(items[i].object);
      }
      std::sort(objs.begin(), objs.end());
      out.insert(std::move(objs));
    }
    return;
  }
  std::size_t pivot = 0;
  std::size_t best = 0;
  const Bits px = p | x;
  for (std::size_t u = 0; u < items.size(); ++u) {
    if (px[u] && (p & adj[u]).count() >= best) {
      best = (p & adj[u]).count();
      pivot = u;
    }
  }
  const Bits todo = p & ~adj[pivot];
  for (std::size_t v = 0; v < items.size(); ++v) {
    if (!todo[v]) continue;
    Bits r2 = r;
    r2.set(v);
    cliques(adj, items, r2, p & adj[v], x & adj[v], m, out);
    p.reset(v);
    x.set(v);
  }
}

bool compatible(const Item& a, const Item& b, Timestamp eps) {
  if (a.object == b.object) return false;
  for (std::size_t t = 0; t < a.entrances.size(); ++t) {
    const Timestamp gap = a.entrances[t] > b.entrances[t] ? a.entrances[t] - b.entrances[t] : b.entrances[t] - a.entrances[t];
    if (gap > eps) return false;
  }
  return true;
}

}  // namespace

std::vector<Pattern> mine_bruteforce(const Dataset& data, const MiningParams& params, const OracleLimits& limits) {
  params.validate();
  if (data.num_objects() > limits.max_objects) {
    throw LimitError("oracle refuses " + std::to_string(data.num_objects()) + " objects (max_objects " +
                     std::to_string(limits.max_objects) + ")");
  }
  if (data.max_path_length() > limits.max_route_len) {
    throw LimitError("oracle refuses travel paths of length " + std::to_string(data.max_path_length()) +
                     " (max_route_len " + std::to_string(limits.max_route_len) + ")");
  }

  // Route -> per-object embeddings.
  std::map<Route, std::vector<Item>> by_route;
  for (const TravelPath& path : data.paths()) {
    std::map<Route, std::vector<Embedding>> mine;
    Embedding current;
    for (Position p = 1; p <= path.size(); ++p) {
      current.assign(1, p);
      walk(path, params.d, current, mine, std::max<std::size_t>(params.k, 1));
    }
    for (auto& [route, embeddings] : mine) {
      auto& items = by_route[route];
      for (const Embedding& e : embeddings) {
        Item it{path.object, {}};
        for (Position p : e) it.entrances.push_back(path.at(p).enter);
        items.push_back(std::move(it));
      }
    }
  }

  std::vector<Pattern> found;
  for (auto& [route, items] : by_route) {
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
      return std::tie(a.object, a.entrances) < std::tie(b.object, b.entrances);
    });
    items.erase(std::unique(items.begin(), items.end(),
                            [](const Item& a, const Item& b) { return a.object == b.object && a.entrances == b.entrances; }),
                items.end());
    if (items.size() > Bits().size()) throw LimitError("oracle route has too many embeddings");
    std::vector<Bits> adj(items.size());
    for (std::size_t a = 0; a < items.size(); ++a) {
      for (std::size_t b = a + 1; b < items.size(); ++b) {
        if (compatible(items[a], items[b], params.eps)) {
          adj[a].set(b);
          adj[b].set(a);
        }
      }
    }
    Bits all;
    for (std::size_t i = 0; i < items.size(); ++i) all.set(i);
    std::set<std::vector<ObjectId>> groups;
    cliques(adj, items, Bits(), all, Bits(), params.m, groups);
    for (const auto& g : groups) found.push_back({g, route, std::nullopt, std::nullopt});
  }

  // All-pairs dominance filter.
  std::vector<Pattern> out;
  for (std::size_t i = 0; i < found.size(); ++i) {
    const Pattern& small = found[i];
    bool dominated = false;
    for (std::size_t j = 0; j < found.size() && !dominated; ++j) {
      if (i == j) continue;
      const Pattern& big = found[j];
      if (big.objects == small.objects && big.route == small.route) continue;
      dominated = std::includes(big.objects.begin(), big.objects.end(), small.objects.begin(), small.objects.end()) &&
                  route_embeds(small.route, big.route, params.d);
    }
    if (!dominated) out.push_back(small);
  }
  sort_canonical(out);
  out.erase(std::unique(out.begin(), out.end(), same_key), out.end());
  for (Pattern& p : out) annotate(p, data, params);
  return out;
}

}  // namespace comove
