#include "comove/frb.hpp"

#include <algorithm>

namespace comove {

std::vector<std::vector<Token>> to_partition_sequences(const Dataset& data, const PartitionTable& parts) {
  std::vector<std::vector<Token>> out(data.num_objects());
  for (const TravelPath& path : data.paths()) {
    auto& seq = out[path.object.value];
    seq.reserve(path.size());
    for (Position p = 1; p <= path.size(); ++p) seq.push_back({path.at(p).camera, parts.partition_of(path.object, p)});
  }
  return out;
}

namespace {

using TokenId = std::uint32_t;

// Prefix-projection miner over dense token ids with a closure test on
// every frequent sequence.
class ClosedMiner {
 public:
  ClosedMiner(std::vector<std::vector<TokenId>> seqs, std::size_t num_tokens, std::size_t m, std::size_t k)
      : seqs_(std::move(seqs)), m_(m), k_(k), count_(num_tokens, 0), stamp_(num_tokens, kNone) {}

  std::vector<std::pair<std::vector<TokenId>, std::vector<std::uint32_t>>> run() {
    std::vector<Proj> all;
    for (std::uint32_t s = 0; s < seqs_.size(); ++s) {
      if (!seqs_[s].empty()) all.push_back({s, 0});
    }
    if (all.size() >= m_ && m_ > 0) grow(all);
    return std::move(out_);
  }

 private:
  static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();
  struct Proj {
    std::uint32_t seq;
    std::uint32_t pos;  // first index after the leftmost match of the prefix
  };

  // Distinct tokens after each projection, with the number of supporters.
  std::vector<TokenId> frequent_items(const std::vector<Proj>& proj, std::size_t min_support,
                                      std::vector<std::uint32_t>& counts) {
    std::vector<TokenId> touched;
    for (const Proj& p : proj) {
      const auto& s = seqs_[p.seq];
      for (std::size_t i = p.pos; i < s.size(); ++i) {
        const TokenId t = s[i];
        if (stamp_[t] == p.seq) continue;
        stamp_[t] = p.seq;
        if (count_[t]++ == 0) touched.push_back(t);
      }
    }
    std::vector<TokenId> freq;
    counts.clear();
    std::sort(touched.begin(), touched.end());
    for (TokenId t : touched) {
      if (count_[t] >= min_support) {
        freq.push_back(t);
        counts.push_back(count_[t]);
      }
      count_[t] = 0;
      stamp_[t] = kNone;
    }
    return freq;
  }

  bool closed(const std::vector<Proj>& proj, const std::vector<std::uint32_t>& ext_counts) {
    // Forward: a token following the prefix in every supporter.
    for (auto c : ext_counts) {
      if (c == proj.size()) return false;
    }
    // Backward: a token that fits into the same gap of every supporter.
    const std::size_t n = prefix_.size();
    std::vector<TokenId> common;
    std::vector<TokenId> here;
    for (std::size_t gap = 0; gap < n; ++gap) {
      bool first = true;
      common.clear();
      for (const Proj& p : proj) {
        const auto& s = seqs_[p.seq];
        // End of the leftmost match of prefix[0, gap).
        std::size_t begin = 0;
        for (std::size_t j = 0; j < gap; ++j) {
          while (s[begin] != prefix_[j]) ++begin;
          ++begin;
        }
        // Start of the rightmost match of prefix[gap, n).
        std::size_t end = s.size();
        for (std::size_t j = n; j-- > gap;) {
          do --end;
          while (s[end] != prefix_[j]);
        }
        here.assign(s.begin() + static_cast<std::ptrdiff_t>(begin), s.begin() + static_cast<std::ptrdiff_t>(end));
        std::sort(here.begin(), here.end());
        here.erase(std::unique(here.begin(), here.end()), here.end());
        if (first) {
          common.swap(here);
          first = false;
        } else {
          std::vector<TokenId> both;
          std::set_intersection(common.begin(), common.end(), here.begin(), here.end(), std::back_inserter(both));
          common.swap(both);
        }
        if (common.empty()) break;
      }
      if (!common.empty()) return false;
    }
    return true;
  }

  void grow(const std::vector<Proj>& proj) {
    std::vector<std::uint32_t> counts;
    const auto items = frequent_items(proj, m_, counts);
    if (!prefix_.empty() && prefix_.size() >= k_ && closed(proj, counts)) {
      std::vector<std::uint32_t> supporters;
      for (const Proj& p : proj) supporters.push_back(p.seq);
      out_.emplace_back(prefix_, std::move(supporters));
    }
    for (std::size_t i = 0; i < items.size(); ++i) {
      const TokenId t = items[i];
      std::vector<Proj> next;
      next.reserve(counts[i]);
      for (const Proj& p : proj) {
        const auto& s = seqs_[p.seq];
        for (std::size_t j = p.pos; j < s.size(); ++j) {
          if (s[j] == t) {
            next.push_back({p.seq, static_cast<std::uint32_t>(j + 1)});
            break;
          }
        }
      }
      prefix_.push_back(t);
      grow(next);
      prefix_.pop_back();
    }
  }

  std::vector<std::vector<TokenId>> seqs_;
  std::size_t m_;
  std::size_t k_;
  std::vector<std::uint32_t> count_;
  std::vector<std::uint32_t> stamp_;
  std::vector<TokenId> prefix_;
  std::vector<std::pair<std::vector<TokenId>, std::vector<std::uint32_t>>> out_;
};

}  // namespace

std::vector<CandidateSeq> mine_sequential_candidates(const std::vector<std::vector<Token>>& sequences, std::size_t m,
                                                     std::size_t k) {
  std::vector<Token> dict;
  for (const auto& s : sequences) dict.insert(dict.end(), s.begin(), s.end());
  std::sort(dict.begin(), dict.end());
  dict.erase(std::unique(dict.begin(), dict.end()), dict.end());

  std::vector<std::vector<TokenId>> dense(sequences.size());
  for (std::size_t i = 0; i < sequences.size(); ++i) {
    for (const Token& t : sequences[i]) {
      dense[i].push_back(static_cast<TokenId>(std::lower_bound(dict.begin(), dict.end(), t) - dict.begin()));
    }
  }

  ClosedMiner miner(std::move(dense), dict.size(), m, k);
  std::vector<CandidateSeq> out;
  for (auto& [ids, supporters] : miner.run()) {
    CandidateSeq c;
    for (TokenId t : ids) {
      c.tokens.push_back(dict[t]);
      c.seq.push_back(dict[t].camera);
    }
    for (auto s : supporters) c.supporters.push_back(ObjectId{s});
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(), [](const CandidateSeq& a, const CandidateSeq& b) { return a.tokens < b.tokens; });
  return out;
}

std::size_t distance(const Dataset& data, ObjectId o, Position from, Position to) {
  const std::size_t len = data.path(o).size();
  if (from == 0 || to == 0 || from >= to || to > len) {
    throw InputError("distance needs 1 <= from < to <= path length");
  }
  return to - from - 1;
}

namespace {

struct Partial {
  std::vector<CameraId> route;
  std::vector<Member> objects;  // sorted by (object, position), reachable positions at the last route camera

  friend auto operator<=>(const Partial&, const Partial&) = default;
};

}  // namespace

std::vector<Pattern> refine_candidate(const CandidateSeq& cand, const Dataset& data, const PartitionTable& parts,
                                      const MiningParams& params) {
  const std::size_t n = cand.tokens.size();
  std::vector<std::vector<Partial>> buffers(n);
  std::vector<Pattern> out;

  // Without camera revisits, cameras between two route cameras in Seq are
  // also between them in every supporter's path, so a window of d + 1 Seq
  // slots loses nothing. With revisits the path distance check alone decides.
  bool revisits = false;
  for (ObjectId o : cand.supporters) {
    for (const auto& [camera, positions] : data.camera_positions(o)) revisits |= positions.size() > 1;
  }

  std::vector<TimedMember> visits;
  for (std::size_t i = 0; i < n; ++i) {
    const Token tok = cand.tokens[i];
    visits.clear();
    for (ObjectId o : cand.supporters) {
      for (Position p : data.positions(o, tok.camera)) {
        if (parts.partition_of(o, p) == tok.partition) visits.push_back({{o, p}, data.visit(o, p).enter});
      }
    }
    auto& buf = buffers[i];
    const std::size_t window =
        params.d == kUnboundedGap || revisits ? i : std::min<std::size_t>(i, std::size_t{params.d} + 1);
    for (auto& group : maximal_eps_groups(visits, params.eps, params.m)) {
      for (std::size_t j = i - window; j < i; ++j) {
        for (const Partial& r : buffers[j]) {
          auto kept = carry_forward(r.objects, group, params.d);
          if (count_objects(kept) < params.m) continue;
          Partial next{r.route, std::move(kept)};
          next.route.push_back(tok.camera);
          buf.push_back(std::move(next));
        }
      }
      buf.push_back({{tok.camera}, std::move(group)});
    }
    std::sort(buf.begin(), buf.end());
    buf.erase(std::unique(buf.begin(), buf.end()), buf.end());

    for (const Partial& r : buf) {
      if (r.route.size() < params.k) continue;
      Pattern p;
      for (const Member& x : r.objects) {
        if (p.objects.empty() || p.objects.back() != x.object) p.objects.push_back(x.object);
      }
      p.route = r.route;
      out.push_back(std::move(p));
    }
  }
  return out;
}

MiningResult mine_frb(const Dataset& data, const MiningParams& params, const FrbOptions& options) {
  params.validate();
  MiningResult result;
  auto& st = result.stats;
  const PartitionTable parts = build_partitions(data, params.eps);

  StageTimer filter;
  const auto candidates = mine_sequential_candidates(to_partition_sequences(data, parts), params.m, params.k);
  st.filter_candidates = candidates.size();
  st.stages.push_back({std::string(stage::kCandidateGeneration), filter.elapsed_ms(), candidates.size(), 0});

  StageTimer refine;
  std::vector<Pattern> patterns;
  for (const CandidateSeq& cand : candidates) {
    auto found = refine_candidate(cand, data, parts, params);
    patterns.insert(patterns.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  st.candidates = patterns.size();
  st.stages.push_back({std::string(stage::kValidnessVerification), refine.elapsed_ms(), candidates.size(), 0});

  finish_mining(result, std::move(patterns), data, params, options.keep_candidates);
  return result;
}

}  // namespace comove
