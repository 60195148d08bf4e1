#include <algorithm>
#include <map>
#include <set>

#include "doctest.h"

#include "comove/frb.hpp"
#include "comove/maximality.hpp"
#include "comove/oracle.hpp"
#include "fixture.hpp"
#include "random_instance.hpp"

using namespace comove;
using namespace comove::testing;

namespace {

template <class T>
bool is_subsequence(const std::vector<T>& small, const std::vector<T>& big) {
  std::size_t i = 0;
  for (const T& x : big) {
    if (i < small.size() && small[i] == x) ++i;
  }
  return i == small.size();
}

std::vector<CameraId> cameras_of(const TravelPath& p) {
  std::vector<CameraId> out;
  for (const Visit& v : p.visits) out.push_back(v.camera);
  return out;
}

}  // namespace

TEST_CASE("fixture partition sequences") {
  const Dataset d = four_objects();
  const auto parts = build_partitions(d, 6);
  const auto seqs = to_partition_sequences(d, parts);
  const auto& o3 = seqs[obj(d, "o3").value];
  const auto& o4 = seqs[obj(d, "o4").value];
  CHECK(o3[0] == Token{cam(d, "A"), 0});
  CHECK(o3[1] == Token{cam(d, "B"), 0});
  CHECK(o3[2] == Token{cam(d, "C"), 0});
  CHECK(o4[0] == Token{cam(d, "A"), 0});
  CHECK(o4[1] == Token{cam(d, "B"), 1});
  CHECK(o4[2] == Token{cam(d, "C"), 1});
}

TEST_CASE("partition tokens contain their own visit") {
  const Dataset lone = Dataset::from_raw({{"a", {{"X", 0, 1}, {"Y", 5, 6}, {"X", 9, 10}}}});
  const auto lone_parts = build_partitions(lone, 3);
  const auto lone_seqs = to_partition_sequences(lone, lone_parts);
  for (const Token& t : lone_seqs[0]) {
    CHECK(lone_parts.partitions(t.camera)[t.partition].size() == 1);
  }

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Instance in = random_instance(seed);
    const auto parts = build_partitions(in.data, in.params.eps);
    const auto seqs = to_partition_sequences(in.data, parts);
    for (const TravelPath& p : in.data.paths()) {
      REQUIRE(seqs[p.object.value].size() == p.size());
      for (Position q = 1; q <= p.size(); ++q) {
        const Token t = seqs[p.object.value][q - 1];
        CHECK(t.camera == p.at(q).camera);
        const auto& members = parts.partitions(t.camera)[t.partition];
        CHECK(std::find(members.begin(), members.end(), Member{p.object, q}) != members.end());
      }
    }
  }
}

TEST_CASE("sequential candidates on the fixture") {
  const Dataset d = four_objects();
  const auto parts = build_partitions(d, 6);
  const auto seqs = to_partition_sequences(d, parts);
  const auto cands = mine_sequential_candidates(seqs, 2, 3);
  const std::vector<CameraId> abd = {cam(d, "A"), cam(d, "B"), cam(d, "D")};
  const std::vector<ObjectId> trio = {obj(d, "o1"), obj(d, "o2"), obj(d, "o3")};
  CHECK(std::any_of(cands.begin(), cands.end(), [&](const CandidateSeq& c) {
    return is_subsequence(abd, c.seq) && std::includes(c.supporters.begin(), c.supporters.end(), trio.begin(), trio.end());
  }));

  // With m = k = 1 every token lies inside some candidate.
  const auto all = mine_sequential_candidates(seqs, 1, 1);
  for (const auto& s : seqs) {
    for (const Token& t : s) {
      CHECK(std::any_of(all.begin(), all.end(), [&](const CandidateSeq& c) {
        return std::find(c.tokens.begin(), c.tokens.end(), t) != c.tokens.end();
      }));
    }
  }
}

TEST_CASE("closed candidates equal exhaustive subsequence enumeration") {
  Rng rng(31337);
  for (int trial = 0; trial < 300; ++trial) {
    const auto objects = rng.uniform(1, 5);
    std::vector<std::vector<Token>> seqs(static_cast<std::size_t>(objects));
    for (auto& s : seqs) {
      for (auto n = rng.uniform(1, 6); n > 0; --n) {
        s.push_back({CameraId{static_cast<std::uint32_t>(rng.index(3))}, static_cast<std::uint32_t>(rng.index(2))});
      }
    }
    const std::size_t m = static_cast<std::size_t>(rng.uniform(1, 3));
    const std::size_t k = static_cast<std::size_t>(rng.uniform(1, 3));

    std::set<std::vector<Token>> subs;
    for (const auto& s : seqs) {
      for (std::uint32_t mask = 1; mask < (1u << s.size()); ++mask) {
        std::vector<Token> sub;
        for (std::size_t i = 0; i < s.size(); ++i) {
          if (mask >> i & 1) sub.push_back(s[i]);
        }
        subs.insert(sub);
      }
    }
    std::map<std::vector<Token>, std::vector<ObjectId>> support;
    for (const auto& sub : subs) {
      for (std::uint32_t o = 0; o < seqs.size(); ++o) {
        if (is_subsequence(sub, seqs[o])) support[sub].push_back(ObjectId{o});
      }
    }
    std::set<std::pair<std::vector<Token>, std::vector<ObjectId>>> expected;
    for (const auto& [sub, sup] : support) {
      if (sup.size() < m || sub.size() < k) continue;
      const bool closed = std::none_of(support.begin(), support.end(), [&](const auto& other) {
        return other.first.size() > sub.size() && other.second.size() == sup.size() && is_subsequence(sub, other.first);
      });
      if (closed) expected.emplace(sub, sup);
    }
    std::set<std::pair<std::vector<Token>, std::vector<ObjectId>>> got;
    for (const CandidateSeq& c : mine_sequential_candidates(seqs, m, k)) got.emplace(c.tokens, c.supporters);
    CHECK(got == expected);
  }
}

TEST_CASE("distance between positions") {
  const Dataset d = four_objects();
  CHECK(distance(d, obj(d, "o3"), 2, 4) == 1);
  CHECK(distance(d, obj(d, "o3"), 1, 2) == 0);
  CHECK_THROWS_AS(distance(d, obj(d, "o1"), 1, 4), InputError);
  CHECK_THROWS_AS(distance(d, obj(d, "o1"), 2, 2), InputError);
  CHECK_THROWS_AS(distance(d, obj(d, "o1"), 0, 2), InputError);

  Rng rng(8);
  for (int i = 0; i < 1000; ++i) {
    const Instance in = random_instance(static_cast<std::uint64_t>(i));
    const TravelPath& p = in.data.paths()[rng.index(in.data.num_objects())];
    if (p.size() < 2) continue;
    const auto from = static_cast<Position>(rng.uniform(1, static_cast<std::int64_t>(p.size()) - 1));
    const auto to = static_cast<Position>(rng.uniform(from + 1, static_cast<std::int64_t>(p.size())));
    const std::vector<Visit> between(p.visits.begin() + from, p.visits.begin() + (to - 1));
    CHECK(distance(in.data, p.object, from, to) == between.size());
  }
}

TEST_CASE("refinement of the fixture candidate") {
  const Dataset d = four_objects();
  const MiningParams params{2, 3, 1, 6};
  const auto parts = build_partitions(d, params.eps);
  const auto cands = mine_sequential_candidates(to_partition_sequences(d, parts), params.m, params.k);
  const std::vector<CameraId> abd = {cam(d, "A"), cam(d, "B"), cam(d, "D")};

  const auto it = std::find_if(cands.begin(), cands.end(), [&](const CandidateSeq& c) { return c.seq == abd; });
  REQUIRE(it != cands.end());
  const auto emitted = refine_candidate(*it, d, parts, params);
  CHECK(std::any_of(emitted.begin(), emitted.end(),
                    [&](const Pattern& p) { return same_key(p, make_pattern(d, {"o1", "o2", "o3"}, "ABD")); }));
  for (const Pattern& p : emitted) CHECK(validate_pattern(p, d, params));

  // Every maximal valid pattern over the candidate's supporters and
  // subroutes of its sequence is covered by an emitted pattern.
  std::vector<Pattern> valid;
  const auto& sup = it->supporters;
  for (std::uint32_t omask = 1; omask < (1u << sup.size()); ++omask) {
    for (std::uint32_t rmask = 1; rmask < (1u << it->seq.size()); ++rmask) {
      Pattern p;
      for (std::size_t i = 0; i < sup.size(); ++i) {
        if (omask >> i & 1) p.objects.push_back(sup[i]);
      }
      for (std::size_t i = 0; i < it->seq.size(); ++i) {
        if (rmask >> i & 1) p.route.push_back(it->seq[i]);
      }
      if (validate_pattern(p, d, params)) valid.push_back(p);
    }
  }
  for (const Pattern& v : remove_non_maximal(valid, params.d)) {
    CHECK(std::any_of(emitted.begin(), emitted.end(),
                      [&](const Pattern& e) { return same_key(e, v) || dominates(e, v, params.d); }));
  }
}

TEST_CASE("refinement of a candidate whose supporters never meet") {
  const Dataset d =
      Dataset::from_raw({{"a", {{"X", 0, 1}, {"Y", 10, 11}}}, {"b", {{"X", 100, 101}, {"Y", 110, 111}}}});
  const MiningParams params{2, 2, 0, 5};
  const auto parts = build_partitions(d, params.eps);
  const auto seqs = to_partition_sequences(d, parts);
  CandidateSeq c{seqs[0], {CameraId{0}, CameraId{1}}, {ObjectId{0}, ObjectId{1}}};
  CHECK(refine_candidate(c, d, parts, params).empty());
}

TEST_CASE("FRB on the fixture and on an empty dataset") {
  const Dataset d = four_objects();
  const auto r = mine_frb(d, {2, 3, 1, 6});
  CHECK(keys(r.patterns, d) == std::vector<std::string>{"o1o2o3:ABD", "o2o3:ABDE"});
  CHECK(mine_frb(Dataset{}, {2, 3, 1, 6}).patterns.empty());
}

TEST_CASE("FRB invariants against the oracle") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Instance in = random_instance(seed);
    const auto oracle = mine_bruteforce(in.data, in.params, {10, 10});
    const auto parts = build_partitions(in.data, in.params.eps);
    const auto cands = mine_sequential_candidates(to_partition_sequences(in.data, parts), in.params.m, in.params.k);

    // Filter completeness.
    for (const Pattern& p : oracle) {
      CHECK(std::any_of(cands.begin(), cands.end(), [&](const CandidateSeq& c) {
        return is_subsequence(p.route, c.seq) &&
               std::includes(c.supporters.begin(), c.supporters.end(), p.objects.begin(), p.objects.end());
      }));
    }
    // Every refined pattern is valid, which covers the gap bound per member.
    for (const CandidateSeq& c : cands) {
      for (const Pattern& p : refine_candidate(c, in.data, parts, in.params)) {
        CHECK(validate_pattern(p, in.data, in.params));
        for (ObjectId o : p.objects) CHECK(route_embeds(p.route, cameras_of(in.data.path(o)), in.params.d));
      }
    }
    const auto r = mine_frb(in.data, in.params);
    CHECK(r.patterns == oracle);
    for (std::size_t i = 0; i < r.patterns.size(); ++i) {
      for (std::size_t j = 0; j < r.patterns.size(); ++j) {
        if (i != j) CHECK_FALSE(dominates(r.patterns[i], r.patterns[j], in.params.d));
      }
    }
  }
}
