#include "comove/clustering.hpp"

#include <algorithm>
#include <tuple>

namespace comove {

std::span<const Member> Cluster::positions_of(ObjectId o) const {
  auto [lo, hi] = std::equal_range(members.begin(), members.end(), Member{o, 0},
                                   [](const Member& a, const Member& b) { return a.object < b.object; });
  return {lo, hi};
}

std::size_t count_objects(std::span<const Member> members) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < members.size(); ++i) n += i == 0 || members[i].object != members[i - 1].object;
  return n;
}

std::vector<Member> carry_forward(std::span<const Member> from, std::span<const Member> next, Gap d) {
  std::vector<Member> out;
  std::size_t i = 0;
  for (std::size_t j = 0; j < next.size();) {
    const ObjectId o = next[j].object;
    while (i < from.size() && from[i].object < o) ++i;
    std::size_t i_end = i;
    while (i_end < from.size() && from[i_end].object == o) ++i_end;
    for (; j < next.size() && next[j].object == o; ++j) {
      const std::uint64_t q = next[j].position;
      for (std::size_t t = i; t < i_end; ++t) {
        const std::uint64_t p = from[t].position;
        if (p < q && q - p <= static_cast<std::uint64_t>(d) + 1) {
          out.push_back(next[j]);
          break;
        }
      }
    }
    i = i_end;
  }
  return out;
}

namespace {

bool timed_less(const TimedMember& a, const TimedMember& b) {
  return std::tie(a.enter, a.member) < std::tie(b.enter, b.member);
}

}  // namespace

std::vector<std::vector<Member>> maximal_eps_groups(std::vector<TimedMember> visits, Timestamp eps,
                                                    std::size_t min_size) {
  std::sort(visits.begin(), visits.end(), timed_less);
  std::vector<std::vector<Member>> groups;
  const std::size_t n = visits.size();
  std::size_t end = 0;       // one past the last visit of the current window
  std::size_t prev_end = 0;  // window end of the previous start
  for (std::size_t i = 0; i < n; ++i) {
    end = std::max(end, i + 1);
    while (end < n && visits[end].enter - visits[i].enter <= eps) ++end;
    // A window is maximal unless the previous start already reached as far.
    const bool maximal = i == 0 || end > prev_end;
    prev_end = end;
    if (!maximal) continue;
    std::vector<Member> group;
    group.reserve(end - i);
    for (std::size_t j = i; j < end; ++j) group.push_back(visits[j].member);
    std::sort(group.begin(), group.end());
    if (count_objects(group) >= min_size) groups.push_back(std::move(group));
  }
  return groups;
}

std::vector<std::vector<TimedMember>> visits_by_camera(const Dataset& data) {
  std::vector<std::vector<TimedMember>> out(data.num_cameras());
  for (const TravelPath& path : data.paths()) {
    for (Position p = 1; p <= path.size(); ++p) {
      const Visit& v = path.at(p);
      out[v.camera.value].push_back({{path.object, p}, v.enter});
    }
  }
  for (auto& list : out) std::sort(list.begin(), list.end(), timed_less);
  return out;
}

std::vector<Cluster> build_clusters(const Dataset& data, std::size_t m, Timestamp eps) {
  std::vector<Cluster> clusters;
  const auto by_camera = visits_by_camera(data);
  for (std::uint32_t c = 0; c < by_camera.size(); ++c) {
    for (auto& group : maximal_eps_groups(by_camera[c], eps, m)) {
      Cluster cl;
      cl.id = ClusterId{static_cast<std::uint32_t>(clusters.size())};
      cl.camera = CameraId{c};
      cl.members = std::move(group);
      cl.num_objects = count_objects(cl.members);
      const Timestamp first = data.visit(cl.members[0].object, cl.members[0].position).enter;
      cl.window = {first, first};
      for (const Member& mbr : cl.members) {
        const Timestamp s = data.visit(mbr.object, mbr.position).enter;
        cl.window.begin = std::min(cl.window.begin, s);
        cl.window.end = std::max(cl.window.end, s);
      }
      clusters.push_back(std::move(cl));
    }
  }
  return clusters;
}

PartitionTable build_partitions(const Dataset& data, Timestamp eps) {
  PartitionTable table;
  const auto by_camera = visits_by_camera(data);
  table.by_camera_.resize(by_camera.size());
  table.of_visit_.resize(data.num_objects());
  for (const TravelPath& path : data.paths()) table.of_visit_[path.object.value].assign(path.size(), 0);

  for (std::size_t c = 0; c < by_camera.size(); ++c) {
    auto& parts = table.by_camera_[c];
    const auto& visits = by_camera[c];
    for (std::size_t i = 0; i < visits.size(); ++i) {
      if (i == 0 || visits[i].enter - visits[i - 1].enter > eps) parts.emplace_back();
      parts.back().push_back(visits[i].member);
      table.of_visit_[visits[i].member.object.value][visits[i].member.position - 1] =
          static_cast<std::uint32_t>(parts.size() - 1);
    }
    for (auto& part : parts) std::sort(part.begin(), part.end());
  }
  return table;
}

std::vector<std::map<CameraId, std::vector<Position>>> position_lists(const Dataset& data) {
  std::vector<std::map<CameraId, std::vector<Position>>> out(data.num_objects());
  for (const TravelPath& path : data.paths()) {
    for (const auto& [camera, positions] : data.camera_positions(path.object)) {
      out[path.object.value].emplace(camera, positions);
    }
  }
  return out;
}

}  // namespace comove
