#pragma once

#include <vector>

#include "comove/clustering.hpp"
#include "comove/stats.hpp"

namespace comove {

/// A visit reduced to the camera partition that holds it.
struct Token {
  CameraId camera;
  std::uint32_t partition = 0;

  friend auto operator<=>(const Token&, const Token&) = default;
};

/// Per object (by id), the partition token of every visit in path order.
std::vector<std::vector<Token>> to_partition_sequences(const Dataset& data, const PartitionTable& parts);

struct CandidateSeq {
  std::vector<Token> tokens;
  std::vector<CameraId> seq;         // camera projection of `tokens`
  std::vector<ObjectId> supporters;  // every object containing `tokens`, sorted
};

/// Closed frequent token subsequences (gaps unbounded) with support >= m and
/// length >= k, mined by prefix projection. Output is sorted by tokens.
std::vector<CandidateSeq> mine_sequential_candidates(const std::vector<std::vector<Token>>& sequences, std::size_t m,
                                                     std::size_t k);

/// Number of visits strictly between two positions of one path.
std::size_t distance(const Dataset& data, ObjectId o, Position from, Position to);

/// Valid patterns whose route is a gap-bounded walk over `cand.seq`,
/// including non-maximal ones.
std::vector<Pattern> refine_candidate(const CandidateSeq& cand, const Dataset& data, const PartitionTable& parts,
                                      const MiningParams& params);

struct FrbOptions {
  bool keep_candidates = false;
};

MiningResult mine_frb(const Dataset& data, const MiningParams& params, const FrbOptions& options = {});

}  // namespace comove
