#pragma once

#include <map>
#include <span>
#include <vector>

#include "comove/model.hpp"

namespace comove {

/// One visit of one object, addressed by its path position.
struct Member {
  ObjectId object;
  Position position = 0;

  friend auto operator<=>(const Member&, const Member&) = default;
};

/// A camera plus a maximal eps-close window of visits holding at least m
/// distinct objects. `members` is sorted by (object, position); an object
/// that re-enters the camera inside the window appears once per visit, and
/// any one choice of visit per object is eps-close.
struct Cluster {
  ClusterId id;
  CameraId camera;
  std::vector<Member> members;
  std::size_t num_objects = 0;
  Interval window;  // [min entrance, max entrance]

  std::size_t size() const { return num_objects; }
  /// Positions of `o` in this cluster, ascending; empty when absent.
  std::span<const Member> positions_of(ObjectId o) const;
};

struct TimedMember {
  Member member;
  Timestamp enter = 0;
};

/// Number of distinct objects in a list sorted by object.
std::size_t count_objects(std::span<const Member> members);

/// Members of `next` reachable from `from` one step later: (o, q) in `next`
/// such that some (o, p) in `from` has 0 < q - p <= d + 1. Both inputs and
/// the result are sorted by (object, position).
std::vector<Member> carry_forward(std::span<const Member> from, std::span<const Member> next, Gap d);

/// Maximal eps-close windows of visits (no visit can join without breaking
/// closeness) with at least `min_size` distinct objects. Each window is
/// returned sorted by (object, position), windows in time order. Inputs
/// need not be sorted.
std::vector<std::vector<Member>> maximal_eps_groups(std::vector<TimedMember> visits, Timestamp eps,
                                                    std::size_t min_size);

/// All clusters of the dataset, ids assigned in (camera, window start,
/// members) order.
std::vector<Cluster> build_clusters(const Dataset& data, std::size_t m, Timestamp eps);

/// Per camera, the disjoint runs of visits whose consecutive entrances are at
/// most eps apart.
class PartitionTable {
 public:
  /// Partitions of camera `c` in time order.
  std::span<const std::vector<Member>> partitions(CameraId c) const { return by_camera_[c.value]; }
  /// Index of the partition holding the visit (o, p).
  std::uint32_t partition_of(ObjectId o, Position p) const { return of_visit_[o.value][p - 1]; }
  std::size_t num_cameras() const { return by_camera_.size(); }

 private:
  friend PartitionTable build_partitions(const Dataset& data, Timestamp eps);

  std::vector<std::vector<std::vector<Member>>> by_camera_;
  std::vector<std::vector<std::uint32_t>> of_visit_;
};

PartitionTable build_partitions(const Dataset& data, Timestamp eps);

/// Per object, camera -> ascending 1-based positions.
std::vector<std::map<CameraId, std::vector<Position>>> position_lists(const Dataset& data);

/// Visits at each camera sorted by (entrance, object, position).
std::vector<std::vector<TimedMember>> visits_by_camera(const Dataset& data);

}  // namespace comove
