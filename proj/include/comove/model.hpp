#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "comove/types.hpp"

namespace comove {

struct Visit {
  CameraId camera;
  Timestamp enter = 0;
  Timestamp exit = 0;

  friend bool operator==(const Visit&, const Visit&) = default;
};

/// One object's ordered camera visits. Entrances strictly increase and every
/// visit satisfies enter < exit; `Dataset` enforces both on construction.
struct TravelPath {
  ObjectId object;
  std::vector<Visit> visits;

  std::size_t size() const { return visits.size(); }
  Interval interval() const { return {visits.front().enter, visits.back().exit}; }
  const Visit& at(Position p) const { return visits[p - 1]; }
};

enum class TimeUnit { seconds, milliseconds };

Timestamp ticks_per_second(TimeUnit unit);

// Name-level form used by the file formats and generators.
struct RawVisit {
  std::string camera;
  Timestamp enter = 0;
  Timestamp exit = 0;

  friend bool operator==(const RawVisit&, const RawVisit&) = default;
};

struct RawPath {
  std::string object;
  std::vector<RawVisit> visits;

  friend bool operator==(const RawPath&, const RawPath&) = default;
};

/// Immutable collection of travel paths with interned object and camera names.
///
/// Ids are assigned in lexicographic name order, so ordering by id is the
/// same as ordering by name. The (object, camera) -> positions index is built
/// once and shared by every miner.
class Dataset {
 public:
  Dataset() = default;

  /// Throws InputError naming the offending object/visit when a path is
  /// empty, has s >= e, has non-increasing entrances, or repeats an id.
  static Dataset from_raw(std::vector<RawPath> paths, TimeUnit unit = TimeUnit::seconds);

  std::size_t num_objects() const { return paths_.size(); }
  std::size_t num_cameras() const { return camera_names_.size(); }
  std::size_t num_visits() const { return num_visits_; }
  std::size_t max_path_length() const;
  TimeUnit unit() const { return unit_; }

  std::span<const TravelPath> paths() const { return paths_; }
  const TravelPath& path(ObjectId o) const { return paths_[o.value]; }
  const Visit& visit(ObjectId o, Position p) const { return paths_[o.value].at(p); }

  const std::string& object_name(ObjectId o) const { return object_names_[o.value]; }
  const std::string& camera_name(CameraId c) const { return camera_names_[c.value]; }
  std::optional<ObjectId> find_object(std::string_view name) const;
  std::optional<CameraId> find_camera(std::string_view name) const;

  /// 1-based positions at which `o` visits `c`, ascending; empty if never.
  std::span<const Position> positions(ObjectId o, CameraId c) const;

  /// Cameras visited by `o` with their positions, ordered by camera id.
  const std::vector<std::pair<CameraId, std::vector<Position>>>& camera_positions(ObjectId o) const {
    return index_[o.value];
  }

  std::vector<RawPath> to_raw() const;

  /// Recomputes the position index from the paths and compares.
  bool audit_index() const;

 private:
  void build_index();

  TimeUnit unit_ = TimeUnit::seconds;
  std::vector<TravelPath> paths_;
  std::vector<std::string> object_names_;
  std::vector<std::string> camera_names_;
  std::unordered_map<std::string, CameraId> camera_lookup_;
  std::vector<std::vector<std::pair<CameraId, std::vector<Position>>>> index_;
  std::size_t num_visits_ = 0;
};

struct MiningParams {
  std::size_t m = 2;  // minimum group size
  std::size_t k = 2;  // minimum route length
  Gap d = 0;          // tolerated skipped cameras between consecutive route cameras
  Timestamp eps = 0;  // maximum entrance spread at a camera

  void validate() const;
  friend bool operator==(const MiningParams&, const MiningParams&) = default;
};

/// A group of objects and their common route. `span` and `camera_windows`
/// are filled by `annotate` from a canonical witness.
struct Pattern {
  std::vector<ObjectId> objects;  // sorted, unique
  std::vector<CameraId> route;
  std::optional<Interval> span;
  std::optional<std::vector<Interval>> camera_windows;

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

/// Orders by (objects, route), ignoring annotations.
bool pattern_key_less(const Pattern& a, const Pattern& b);
bool same_key(const Pattern& a, const Pattern& b);
void sort_canonical(std::vector<Pattern>& patterns);

/// Per pattern object (in pattern order), the path position matched to
/// each route index.
using Witness = std::vector<std::vector<Position>>;

struct NamedPattern {
  std::vector<std::string> objects;  // sorted
  std::vector<std::string> route;
  std::optional<Interval> span;
  std::optional<std::vector<Interval>> camera_windows;

  friend bool operator==(const NamedPattern&, const NamedPattern&) = default;
};

NamedPattern to_named(const Pattern& p, const Dataset& data);

// ---- predicates -----------------------------------------------------------

/// max - min <= eps. Throws InputError on an empty list.
bool is_eps_close(std::span<const Timestamp> entrances, Timestamp eps);

/// Strictly increasing, camera-preserving embedding of `inner` into `outer`
/// with consecutive mapped indices at most d + 1 apart.
bool route_embeds(std::span<const CameraId> inner, std::span<const CameraId> outer, Gap d);

/// Time containment plus `route_embeds` over the camera strings.
bool is_d_subpath(const TravelPath& inner, const TravelPath& outer, Gap d);

/// Lexicographically first witness (route index major, pattern object order
/// minor, ascending positions) under which every object follows the route
/// with gaps <= d + 1 and the group is eps-close at every route index.
/// Size and length thresholds are not checked here.
std::optional<Witness> find_witness(const Pattern& r, const Dataset& data, Gap d, Timestamp eps);

/// Full relaxed-pattern check: |O| >= m, |P| >= k and a witness exists.
/// Throws InputError for unknown or duplicated objects.
bool validate_pattern(const Pattern& r, const Dataset& data, const MiningParams& params);

/// [min entrance at the first route camera, max exit at the last one].
Interval pattern_time_span(const Pattern& r, const Dataset& data, const Witness& witness);

/// Per route index, [min entrance, max entrance] over the members.
std::vector<Interval> camera_windows(const Pattern& r, const Dataset& data, const Witness& witness);

/// Fills span and camera windows from the canonical witness. Throws
/// InputError if the pattern has no witness.
void annotate(Pattern& r, const Dataset& data, const MiningParams& params);

}  // namespace comove
