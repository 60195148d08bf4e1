#include "comove/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "comove/maxgrowth.hpp"
#include "comove/rng.hpp"

namespace comove {

namespace {

void check_range(const Range& r, const char* name, std::int64_t floor) {
  if (r.min > r.max) throw InputError(std::string(name) + " range is empty");
  if (r.min < floor) throw InputError(std::string(name) + " must be at least " + std::to_string(floor));
}

std::string padded(char prefix, std::size_t i, std::size_t n) {
  const std::size_t width = std::to_string(n > 0 ? n - 1 : 0).size();
  std::string digits = std::to_string(i);
  return prefix + std::string(width - digits.size(), '0') + digits;
}

// Grid backbone plus random shortcuts until the mean degree reaches `degree`.
std::vector<std::vector<std::size_t>> camera_graph(std::size_t n, std::size_t degree, Rng& rng) {
  std::vector<std::set<std::size_t>> adj(n);
  const auto width = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  auto link = [&](std::size_t a, std::size_t b) {
    adj[a].insert(b);
    adj[b].insert(a);
  };
  std::size_t edges = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if ((i + 1) % width != 0 && i + 1 < n) link(i, i + 1), ++edges;
    if (i + width < n) link(i, i + width), ++edges;
  }
  const std::size_t target = std::min(n * degree / 2, n * (n - 1) / 2);
  for (std::size_t attempts = 0; edges < target && attempts < 100 * n; ++attempts) {
    const std::size_t a = rng.index(n);
    const std::size_t b = rng.index(n);
    if (a != b && adj[a].insert(b).second) {
      adj[b].insert(a);
      ++edges;
    }
  }
  std::vector<std::vector<std::size_t>> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i].assign(adj[i].begin(), adj[i].end());
  return out;
}

std::vector<std::size_t> simple_route(const std::vector<std::vector<std::size_t>>& graph, std::size_t length, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<std::size_t> route{rng.index(graph.size())};
    std::vector<char> used(graph.size(), 0);
    used[route[0]] = 1;
    while (route.size() < length) {
      std::vector<std::size_t> options;
      for (std::size_t next : graph[route.back()]) {
        if (!used[next]) options.push_back(next);
      }
      if (options.empty()) break;
      route.push_back(options[rng.index(options.size())]);
      used[route.back()] = 1;
    }
    if (route.size() == length) return route;
  }
  throw InputError("no simple route of length " + std::to_string(length) + " found in the camera graph");
}

}  // namespace

void GenConfig::validate() const {
  if (num_cameras == 0) throw InputError("need at least one camera");
  check_range(group_size, "group size", 1);
  check_range(route_length, "route length", 1);
  check_range(background_path_length, "background path length", 1);
  check_range(hop_time, "hop time", 1);
  check_range(dwell, "dwell", 1);
  if (entrance_jitter < 0) throw InputError("jitter must be non-negative");
  if (hop_time.min <= entrance_jitter) throw InputError("hop time must exceed the entrance jitter");
  if (horizon < 0) throw InputError("horizon must be non-negative");
  if (static_cast<std::size_t>(route_length.max) > num_cameras) {
    throw InputError("route length exceeds the number of cameras");
  }
  params.validate();
}

Synthetic gen_synthetic(const GenConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  const auto graph = camera_graph(cfg.num_cameras, cfg.grid_degree, rng);

  std::vector<RawPath> paths;
  auto add_path = [&](const std::vector<std::size_t>& cams, const std::vector<Timestamp>& enters) {
    RawPath p{padded('o', paths.size(), cfg.num_objects), {}};
    for (std::size_t i = 0; i < cams.size(); ++i) {
      p.visits.push_back(
          {padded('c', cams[i], cfg.num_cameras), enters[i], enters[i] + rng.uniform(cfg.dwell.min, cfg.dwell.max)});
    }
    paths.push_back(std::move(p));
  };

  for (std::size_t g = 0; g < cfg.num_planted_groups; ++g) {
    const auto size = static_cast<std::size_t>(rng.uniform(cfg.group_size.min, cfg.group_size.max));
    if (paths.size() + size > cfg.num_objects) {
      throw InputError("planted groups need more objects than num_objects");
    }
    const auto route = simple_route(graph, static_cast<std::size_t>(rng.uniform(cfg.route_length.min, cfg.route_length.max)), rng);
    std::vector<Timestamp> base{rng.uniform(0, cfg.horizon)};
    while (base.size() < route.size()) base.push_back(base.back() + rng.uniform(cfg.hop_time.min, cfg.hop_time.max));
    for (std::size_t i = 0; i < size; ++i) {
      std::vector<Timestamp> enters;
      for (Timestamp b : base) enters.push_back(b + rng.uniform(0, cfg.entrance_jitter));
      add_path(route, enters);
    }
  }

  while (paths.size() < cfg.num_objects) {
    const auto length = static_cast<std::size_t>(rng.uniform(cfg.background_path_length.min, cfg.background_path_length.max));
    std::vector<std::size_t> cams{rng.index(graph.size())};
    while (cams.size() < length && !graph[cams.back()].empty()) {
      cams.push_back(graph[cams.back()][rng.index(graph[cams.back()].size())]);
    }
    std::vector<Timestamp> enters{rng.uniform(0, cfg.horizon)};
    while (enters.size() < cams.size()) enters.push_back(enters.back() + rng.uniform(cfg.hop_time.min, cfg.hop_time.max));
    add_path(cams, enters);
  }

  Synthetic out{Dataset::from_raw(std::move(paths)), {}};
  out.golden = mine_maxgrowth(out.data, cfg.params).patterns;
  return out;
}

void NoiseSpec::validate() const {
  for (double r : {shift_rate, delete_rate, idswitch_rate}) {
    if (!(r >= 0.0 && r <= 1.0)) throw InputError("noise rates must lie in [0, 1]");
  }
  if (shift_max < 0) throw InputError("shift offset must be non-negative");
}

Dataset inject_noise(const Dataset& data, const NoiseSpec& spec, NoiseTrace* trace) {
  spec.validate();
  NoiseTrace local;
  NoiseTrace& tr = trace ? *trace : local;
  tr = {};
  Rng rng(spec.seed);
  std::vector<RawPath> paths = data.to_raw();

  for (RawPath& path : paths) {
    auto& v = path.visits;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!rng.chance(spec.shift_rate)) continue;
      const Timestamp wanted = v[i].enter + rng.uniform(-spec.shift_max, spec.shift_max);
      // Clamp so entrances stay strictly increasing and non-negative.
      Timestamp lo = i > 0 ? v[i - 1].enter + 1 : std::min<Timestamp>(v[i].enter, 0);
      const Timestamp hi = i + 1 < v.size() ? v[i + 1].enter - 1 : std::numeric_limits<Timestamp>::max();
      const Timestamp enter = std::clamp(wanted, lo, hi);
      const Timestamp offset = enter - v[i].enter;
      v[i].enter += offset;
      v[i].exit += offset;
      tr.shifts.push_back({path.object, i, offset});
    }
  }

  for (RawPath& path : paths) {
    std::vector<RawVisit> kept;
    for (std::size_t i = 0; i < path.visits.size(); ++i) {
      if (rng.chance(spec.delete_rate)) {
        tr.deletions.push_back({path.object, i});
      } else {
        kept.push_back(path.visits[i]);
      }
    }
    path.visits = std::move(kept);
  }
  auto drop_empty = [&] {
    std::erase_if(paths, [&](const RawPath& p) {
      if (!p.visits.empty()) return false;
      tr.dropped.push_back(p.object);
      return true;
    });
  };
  drop_empty();

  std::vector<char> switched(paths.size(), 0);
  for (std::size_t a = 0; a < paths.size(); ++a) {
    if (switched[a] || !rng.chance(spec.idswitch_rate)) continue;
    const Interval ia{paths[a].visits.front().enter, paths[a].visits.back().exit};
    std::vector<std::size_t> partners;
    for (std::size_t b = 0; b < paths.size(); ++b) {
      if (b == a || switched[b]) continue;
      const Interval ib{paths[b].visits.front().enter, paths[b].visits.back().exit};
      if (std::max(ia.begin, ib.begin) <= std::min(ia.end, ib.end)) partners.push_back(b);
    }
    if (partners.empty()) continue;
    const std::size_t b = partners[rng.index(partners.size())];
    const Interval ib{paths[b].visits.front().enter, paths[b].visits.back().exit};
    const Timestamp cut = rng.uniform(std::max(ia.begin, ib.begin), std::min(ia.end, ib.end));
    auto split = [cut](std::vector<RawVisit>& v) {
      return std::find_if(v.begin(), v.end(), [cut](const RawVisit& x) { return x.enter > cut; });
    };
    auto& va = paths[a].visits;
    auto& vb = paths[b].visits;
    std::vector<RawVisit> tail_a(split(va), va.end());
    std::vector<RawVisit> tail_b(split(vb), vb.end());
    va.erase(split(va), va.end());
    vb.erase(split(vb), vb.end());
    va.insert(va.end(), tail_b.begin(), tail_b.end());
    vb.insert(vb.end(), tail_a.begin(), tail_a.end());
    switched[a] = switched[b] = 1;
    tr.switches.push_back({paths[a].object, paths[b].object, cut});
  }
  drop_empty();

  return Dataset::from_raw(std::move(paths), data.unit());
}

double object_iou(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::string> both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  const std::size_t uni = a.size() + b.size() - both.size();
  return uni == 0 ? 1.0 : static_cast<double>(both.size()) / static_cast<double>(uni);
}

double span_iou(const Interval& a, const Interval& b) {
  const Timestamp uni = std::max(a.end, b.end) - std::min(a.begin, b.begin);
  if (uni == 0) return a == b ? 1.0 : 0.0;
  const Timestamp inter = std::max<Timestamp>(0, std::min(a.end, b.end) - std::max(a.begin, b.begin));
  return static_cast<double>(inter) / static_cast<double>(uni);
}

EvalReport match_patterns(const std::vector<NamedPattern>& found, const std::vector<NamedPattern>& golden,
                          const MatchOptions& options) {
  for (const auto* list : {&found, &golden}) {
    for (const NamedPattern& p : *list) {
      if (!p.span) throw InputError("pattern without a time span cannot be matched");
    }
  }
  EvalReport report;
  struct Pair {
    double score;
    double sum;
    Match match;
  };
  std::vector<Pair> pairs;
  std::vector<double> best(found.size(), 0.0);
  for (std::size_t f = 0; f < found.size(); ++f) {
    for (std::size_t g = 0; g < golden.size(); ++g) {
      const double oi = object_iou(found[f].objects, golden[g].objects);
      const double si = span_iou(*found[f].span, *golden[g].span);
      best[f] = std::max(best[f], std::min(oi, si));
      if (oi > options.threshold && si > options.threshold) pairs.push_back({std::min(oi, si), oi + si, {f, g, oi, si}});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.sum != b.sum) return a.sum > b.sum;
    return std::tie(a.match.found, a.match.golden) < std::tie(b.match.found, b.match.golden);
  });

  std::vector<char> used_f(found.size(), 0);
  std::vector<char> used_g(golden.size(), 0);
  for (const Pair& p : pairs) {
    const bool take = options.many_to_one ? !used_f[p.match.found] : !used_f[p.match.found] && !used_g[p.match.golden];
    if (!take) continue;
    used_f[p.match.found] = 1;
    used_g[p.match.golden] = 1;
    report.matches.push_back(p.match);
  }
  if (options.many_to_one) {
    // A golden pattern counts once however many found patterns hit it.
    for (const Pair& p : pairs) used_g[p.match.golden] = 1;
  }
  report.matched_found = static_cast<std::size_t>(std::count(used_f.begin(), used_f.end(), 1));
  report.matched_golden = static_cast<std::size_t>(std::count(used_g.begin(), used_g.end(), 1));

  auto ratio = [](std::size_t num, std::size_t den, bool other_empty) {
    if (den == 0) return other_empty ? 1.0 : 0.0;
    return static_cast<double>(num) / static_cast<double>(den);
  };
  report.precision = ratio(report.matched_found, found.size(), golden.empty());
  report.recall = ratio(report.matched_golden, golden.size(), found.empty());
  const double pr = report.precision + report.recall;
  report.f1 = pr > 0 ? 2 * report.precision * report.recall / pr : 0.0;

  for (double b : best) {
    const auto bin = static_cast<std::size_t>(std::floor(b * 10 + 1e-9));
    ++report.iou_histogram[std::min<std::size_t>(bin, 9)];
  }
  return report;
}

std::vector<NamedPattern> to_named(const std::vector<Pattern>& patterns, const Dataset& data) {
  std::vector<NamedPattern> out;
  out.reserve(patterns.size());
  for (const Pattern& p : patterns) out.push_back(to_named(p, data));
  return out;
}

std::vector<SweepRow> sweep_d(const Dataset& data, const std::vector<NamedPattern>& golden, const MiningParams& base,
                              const std::vector<Gap>& d_values, const MatchOptions& options) {
  std::vector<SweepRow> rows;
  for (Gap d : d_values) {
    MiningParams params = base;
    params.d = d;
    const auto found = to_named(mine_maxgrowth(data, params).patterns, data);
    const EvalReport r = match_patterns(found, golden, options);
    rows.push_back({d, found.size(), r.precision, r.recall, r.f1});
  }
  return rows;
}

}  // namespace comove
