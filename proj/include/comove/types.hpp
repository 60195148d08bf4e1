#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace comove {

/// Timestamps are integral ticks (seconds by default, milliseconds when a
/// dataset declares `unit=ms`). Core predicates never touch floating point.
using Timestamp = std::int64_t;

/// 1-based index of a visit inside an object's travel path.
using Position = std::uint32_t;

/// Gap tolerance. `kUnboundedGap` turns d-subpath tests into plain
/// subsequence tests.
using Gap = std::uint32_t;
inline constexpr Gap kUnboundedGap = std::numeric_limits<Gap>::max();

template <class Tag>
struct StrongId {
  std::uint32_t value = 0;

  constexpr StrongId() = default;
  constexpr explicit StrongId(std::uint32_t v) : value(v) {}

  friend constexpr auto operator<=>(StrongId, StrongId) = default;
};

using ObjectId = StrongId<struct ObjectTag>;
using CameraId = StrongId<struct CameraTag>;
using ClusterId = StrongId<struct ClusterTag>;

struct Interval {
  Timestamp begin = 0;
  Timestamp end = 0;

  Timestamp length() const { return end - begin; }
  friend constexpr bool operator==(const Interval&, const Interval&) = default;
};

// Error categories map one-to-one onto CLI exit codes.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace comove

template <class Tag>
struct std::hash<comove::StrongId<Tag>> {
  std::size_t operator()(comove::StrongId<Tag> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
