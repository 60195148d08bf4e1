#include "comove/model.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace comove {

Timestamp ticks_per_second(TimeUnit unit) {
  return unit == TimeUnit::milliseconds ? 1000 : 1;
}

Dataset Dataset::from_raw(std::vector<RawPath> raw, TimeUnit unit) {
  std::sort(raw.begin(), raw.end(),
            [](const RawPath& a, const RawPath& b) { return a.object < b.object; });

  std::set<std::string> cameras;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const RawPath& p = raw[i];
    if (i > 0 && raw[i - 1].object == p.object) {
      throw InputError("duplicate object id '" + p.object + "'");
    }
    if (p.visits.empty()) {
      throw InputError("object '" + p.object + "' has an empty travel path");
    }
    for (std::size_t j = 0; j < p.visits.size(); ++j) {
      const RawVisit& v = p.visits[j];
      if (v.enter >= v.exit) {
        std::ostringstream msg;
        msg << "object '" << p.object << "' visit " << j + 1 << " at camera '" << v.camera
            << "': entrance " << v.enter << " is not before exit " << v.exit;
        throw InputError(msg.str());
      }
      if (j > 0 && p.visits[j - 1].enter >= v.enter) {
        std::ostringstream msg;
        msg << "object '" << p.object << "' visit " << j + 1 << " at camera '" << v.camera
            << "': entrance " << v.enter << " does not follow previous entrance "
            << p.visits[j - 1].enter;
        throw InputError(msg.str());
      }
      cameras.insert(v.camera);
    }
  }

  Dataset data;
  data.unit_ = unit;
  data.camera_names_.assign(cameras.begin(), cameras.end());
  for (std::uint32_t c = 0; c < data.camera_names_.size(); ++c) {
    data.camera_lookup_.emplace(data.camera_names_[c], CameraId{c});
  }
  data.paths_.reserve(raw.size());
  data.object_names_.reserve(raw.size());
  for (std::uint32_t i = 0; i < raw.size(); ++i) {
    TravelPath path;
    path.object = ObjectId{i};
    path.visits.reserve(raw[i].visits.size());
    for (const RawVisit& v : raw[i].visits) {
      path.visits.push_back({data.camera_lookup_.at(v.camera), v.enter, v.exit});
    }
    data.num_visits_ += path.visits.size();
    data.paths_.push_back(std::move(path));
    data.object_names_.push_back(std::move(raw[i].object));
  }
  data.build_index();
  return data;
}

void Dataset::build_index() {
  index_.assign(paths_.size(), {});
  for (const TravelPath& path : paths_) {
    std::map<CameraId, std::vector<Position>> per_camera;
    for (Position p = 1; p <= path.size(); ++p) per_camera[path.at(p).camera].push_back(p);
    index_[path.object.value].assign(per_camera.begin(), per_camera.end());
  }
}

std::size_t Dataset::max_path_length() const {
  std::size_t longest = 0;
  for (const TravelPath& p : paths_) longest = std::max(longest, p.size());
  return longest;
}

std::optional<ObjectId> Dataset::find_object(std::string_view name) const {
  auto it = std::lower_bound(object_names_.begin(), object_names_.end(), name);
  if (it == object_names_.end() || *it != name) return std::nullopt;
  return ObjectId{static_cast<std::uint32_t>(it - object_names_.begin())};
}

std::optional<CameraId> Dataset::find_camera(std::string_view name) const {
  auto it = camera_lookup_.find(std::string(name));
  if (it == camera_lookup_.end()) return std::nullopt;
  return it->second;
}

std::span<const Position> Dataset::positions(ObjectId o, CameraId c) const {
  const auto& cams = index_[o.value];
  auto it = std::lower_bound(cams.begin(), cams.end(), c,
                             [](const auto& entry, CameraId key) { return entry.first < key; });
  if (it == cams.end() || it->first != c) return {};
  return it->second;
}

std::vector<RawPath> Dataset::to_raw() const {
  std::vector<RawPath> out;
  out.reserve(paths_.size());
  for (const TravelPath& path : paths_) {
    RawPath raw{object_names_[path.object.value], {}};
    for (const Visit& v : path.visits) raw.visits.push_back({camera_names_[v.camera.value], v.enter, v.exit});
    out.push_back(std::move(raw));
  }
  return out;
}

bool Dataset::audit_index() const {
  if (index_.size() != paths_.size()) return false;
  for (const TravelPath& path : paths_) {
    std::size_t listed = 0;
    for (const auto& [camera, positions] : index_[path.object.value]) {
      if (positions.empty() || !std::is_sorted(positions.begin(), positions.end())) return false;
      for (Position p : positions) {
        if (p == 0 || p > path.size() || path.at(p).camera != camera) return false;
      }
      listed += positions.size();
    }
    if (listed != path.size()) return false;
  }
  return true;
}

void MiningParams::validate() const {
  if (m < 1) throw InputError("m must be at least 1");
  if (k < 1) throw InputError("k must be at least 1");
  if (eps < 0) throw InputError("eps must be non-negative");
}

bool pattern_key_less(const Pattern& a, const Pattern& b) {
  if (a.objects != b.objects) return a.objects < b.objects;
  return a.route < b.route;
}

bool same_key(const Pattern& a, const Pattern& b) {
  return a.objects == b.objects && a.route == b.route;
}

void sort_canonical(std::vector<Pattern>& patterns) {
  std::sort(patterns.begin(), patterns.end(), pattern_key_less);
}

NamedPattern to_named(const Pattern& p, const Dataset& data) {
  NamedPattern named;
  for (ObjectId o : p.objects) named.objects.push_back(data.object_name(o));
  std::sort(named.objects.begin(), named.objects.end());
  for (CameraId c : p.route) named.route.push_back(data.camera_name(c));
  named.span = p.span;
  named.camera_windows = p.camera_windows;
  return named;
}

bool is_eps_close(std::span<const Timestamp> entrances, Timestamp eps) {
  if (entrances.empty()) throw InputError("is_eps_close: empty entrance list");
  auto [lo, hi] = std::minmax_element(entrances.begin(), entrances.end());
  return *hi - *lo <= eps;
}

bool route_embeds(std::span<const CameraId> inner, std::span<const CameraId> outer, Gap d) {
  if (inner.empty()) return true;
  if (inner.size() > outer.size()) return false;
  const std::size_t n = outer.size();
  const std::size_t reach = d == kUnboundedGap ? n : static_cast<std::size_t>(d) + 1;

  // ends[p]: inner[0..t] can be embedded with inner[t] mapped to outer[p].
  std::vector<char> ends(n), next(n);
  bool any = false;
  for (std::size_t p = 0; p < n; ++p) any |= (ends[p] = outer[p] == inner[0]);
  for (std::size_t t = 1; t < inner.size() && any; ++t) {
    any = false;
    std::ptrdiff_t last = -1;  // latest p' < p with ends[p']
    for (std::size_t p = 0; p < n; ++p) {
      next[p] = outer[p] == inner[t] && last >= 0 && p - static_cast<std::size_t>(last) <= reach;
      any |= next[p];
      if (ends[p]) last = static_cast<std::ptrdiff_t>(p);
    }
    ends.swap(next);
  }
  return any;
}

namespace {

std::vector<CameraId> cameras_of(const TravelPath& path) {
  std::vector<CameraId> out;
  out.reserve(path.size());
  for (const Visit& v : path.visits) out.push_back(v.camera);
  return out;
}

void check_objects(const Pattern& r, const Dataset& data) {
  for (std::size_t i = 0; i < r.objects.size(); ++i) {
    if (r.objects[i].value >= data.num_objects()) {
      throw InputError("pattern references unknown object id " + std::to_string(r.objects[i].value));
    }
    if (i > 0 && !(r.objects[i - 1] < r.objects[i])) {
      throw InputError("pattern objects must be sorted and unique");
    }
  }
}

class WitnessSearch {
 public:
  WitnessSearch(const Pattern& r, const Dataset& data, Gap d, Timestamp eps)
      : r_(r), data_(data), d_(d), eps_(eps), witness_(r.objects.size(), std::vector<Position>(r.route.size())) {}

  std::optional<Witness> run() {
    if (r_.objects.empty() || r_.route.empty()) return std::nullopt;
    if (place(0, 0, 0, 0)) return witness_;
    return std::nullopt;
  }

 private:
  bool place(std::size_t t, std::size_t j, Timestamp lo, Timestamp hi) {
    if (j == r_.objects.size()) {
      ++t;
      j = 0;
      if (t == r_.route.size()) return true;
    }
    const ObjectId o = r_.objects[j];
    const Position prev = t == 0 ? 0 : witness_[j][t - 1];
    for (Position p : data_.positions(o, r_.route[t])) {
      if (t > 0) {
        if (p <= prev) continue;
        if (d_ != kUnboundedGap && p - prev > d_ + 1) break;
      }
      const Timestamp s = data_.visit(o, p).enter;
      const Timestamp nlo = j == 0 ? s : std::min(lo, s);
      const Timestamp nhi = j == 0 ? s : std::max(hi, s);
      if (nhi - nlo > eps_) continue;
      witness_[j][t] = p;
      if (place(t, j + 1, nlo, nhi)) return true;
    }
    return false;
  }

  const Pattern& r_;
  const Dataset& data_;
  Gap d_;
  Timestamp eps_;
  Witness witness_;
};

void check_witness(const Pattern& r, const Dataset& data, const Witness& w) {
  if (w.size() != r.objects.size() || r.route.empty()) throw InputError("witness does not match pattern");
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (w[j].size() != r.route.size()) throw InputError("witness does not match pattern route");
    const TravelPath& path = data.path(r.objects[j]);
    for (std::size_t t = 0; t < w[j].size(); ++t) {
      const Position p = w[j][t];
      if (p == 0 || p > path.size() || path.at(p).camera != r.route[t] || (t > 0 && p <= w[j][t - 1])) {
        throw InputError("witness position inconsistent with travel path of object " +
                         data.object_name(r.objects[j]));
      }
    }
  }
}

}  // namespace

bool is_d_subpath(const TravelPath& inner, const TravelPath& outer, Gap d) {
  const Interval a = inner.interval();
  const Interval b = outer.interval();
  if (a.begin < b.begin || a.end > b.end) return false;
  const auto in = cameras_of(inner);
  const auto out = cameras_of(outer);
  return route_embeds(in, out, d);
}

std::optional<Witness> find_witness(const Pattern& r, const Dataset& data, Gap d, Timestamp eps) {
  check_objects(r, data);
  return WitnessSearch(r, data, d, eps).run();
}

bool validate_pattern(const Pattern& r, const Dataset& data, const MiningParams& params) {
  check_objects(r, data);
  if (r.objects.size() < params.m || r.route.size() < params.k) return false;
  return find_witness(r, data, params.d, params.eps).has_value();
}

Interval pattern_time_span(const Pattern& r, const Dataset& data, const Witness& witness) {
  check_objects(r, data);
  check_witness(r, data, witness);
  Interval span{data.visit(r.objects[0], witness[0].front()).enter,
                data.visit(r.objects[0], witness[0].back()).exit};
  for (std::size_t j = 1; j < r.objects.size(); ++j) {
    span.begin = std::min(span.begin, data.visit(r.objects[j], witness[j].front()).enter);
    span.end = std::max(span.end, data.visit(r.objects[j], witness[j].back()).exit);
  }
  return span;
}

std::vector<Interval> camera_windows(const Pattern& r, const Dataset& data, const Witness& witness) {
  check_objects(r, data);
  check_witness(r, data, witness);
  std::vector<Interval> out;
  for (std::size_t t = 0; t < r.route.size(); ++t) {
    Interval w{data.visit(r.objects[0], witness[0][t]).enter, data.visit(r.objects[0], witness[0][t]).enter};
    for (std::size_t j = 1; j < r.objects.size(); ++j) {
      const Timestamp s = data.visit(r.objects[j], witness[j][t]).enter;
      w.begin = std::min(w.begin, s);
      w.end = std::max(w.end, s);
    }
    out.push_back(w);
  }
  return out;
}

void annotate(Pattern& r, const Dataset& data, const MiningParams& params) {
  auto witness = find_witness(r, data, params.d, params.eps);
  if (!witness) throw InputError("pattern has no witness in the dataset");
  r.span = pattern_time_span(r, data, *witness);
  r.camera_windows = camera_windows(r, data, *witness);
}

}  // namespace comove
