#include <algorithm>
#include <map>

#include "doctest.h"

#include "comove/evalkit.hpp"
#include "comove/io.hpp"
#include "comove/maxgrowth.hpp"
#include "comove/rng.hpp"

using namespace comove;

namespace {

GenConfig small_config(std::uint64_t seed) {
  GenConfig cfg;
  cfg.num_cameras = 30;
  cfg.num_objects = 80;
  cfg.num_planted_groups = 6;
  cfg.group_size = {3, 5};
  cfg.route_length = {4, 7};
  cfg.horizon = 3000;
  cfg.seed = seed;
  return cfg;
}

NamedPattern named(std::vector<std::string> objects, Interval span) {
  return {std::move(objects), {"A", "B"}, span, std::nullopt};
}

// Applies a recorded trace to the clean paths.
std::vector<RawPath> replay(std::vector<RawPath> paths, const NoiseTrace& trace) {
  std::map<std::string, RawPath*> by_name;
  for (RawPath& p : paths) by_name[p.object] = &p;
  for (const auto& s : trace.shifts) {
    RawVisit& v = by_name.at(s.object)->visits.at(s.index);
    v.enter += s.offset;
    v.exit += s.offset;
  }
  std::map<std::string, std::vector<std::size_t>> deleted;
  for (const auto& del : trace.deletions) deleted[del.object].push_back(del.index);
  for (auto& [name, idx] : deleted) {
    auto& v = by_name.at(name)->visits;
    std::sort(idx.rbegin(), idx.rend());
    for (std::size_t i : idx) v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
  }
  for (const auto& sw : trace.switches) {
    auto& a = by_name.at(sw.first)->visits;
    auto& b = by_name.at(sw.second)->visits;
    auto after = [&](const RawVisit& x) { return x.enter > sw.cut; };
    const auto ia = std::find_if(a.begin(), a.end(), after);
    const auto ib = std::find_if(b.begin(), b.end(), after);
    std::vector<RawVisit> na(a.begin(), ia), nb(b.begin(), ib);
    na.insert(na.end(), ib, b.end());
    nb.insert(nb.end(), ia, a.end());
    a = std::move(na);
    b = std::move(nb);
  }
  std::erase_if(paths, [](const RawPath& p) { return p.visits.empty(); });
  return paths;
}

}  // namespace

TEST_CASE("generator is deterministic and golden is its own ground truth") {
  const Synthetic a = gen_synthetic(small_config(4));
  const Synthetic b = gen_synthetic(small_config(4));
  CHECK(dataset_text(a.data) == dataset_text(b.data));
  CHECK(a.golden == b.golden);
  CHECK_FALSE(a.golden.empty());
  CHECK(dataset_text(gen_synthetic(small_config(5)).data) != dataset_text(a.data));

  const auto mined = to_named(mine_maxgrowth(a.data, small_config(4).params).patterns, a.data);
  const EvalReport r = match_patterns(mined, to_named(a.golden, a.data));
  CHECK(r.recall == 1.0);
  CHECK(r.precision == 1.0);
}

TEST_CASE("no planted groups and single-visit background give no golden patterns") {
  GenConfig cfg = small_config(9);
  cfg.num_planted_groups = 0;
  cfg.background_path_length = {1, 1};
  CHECK(gen_synthetic(cfg).golden.empty());
}

TEST_CASE("generator refuses infeasible configurations") {
  GenConfig cfg = small_config(1);
  cfg.route_length = {40, 50};
  CHECK_THROWS_AS(gen_synthetic(cfg), InputError);
  cfg = small_config(1);
  cfg.entrance_jitter = 100;
  CHECK_THROWS_AS(gen_synthetic(cfg), InputError);
  cfg = small_config(1);
  cfg.num_objects = 5;
  CHECK_THROWS_AS(gen_synthetic(cfg), InputError);
}

TEST_CASE("noise at rate zero is the identity") {
  const Dataset data = gen_synthetic(small_config(2)).data;
  NoiseTrace trace;
  const Dataset same = inject_noise(data, {0, 50, 0, 0, 17}, &trace);
  CHECK(dataset_text(same) == dataset_text(data));
  CHECK(trace.shifts.empty());
  CHECK(trace.deletions.empty());
  CHECK(trace.switches.empty());
}

TEST_CASE("deleting every visit of single-visit paths drops them") {
  const Dataset data = Dataset::from_raw({{"a", {{"X", 0, 1}}}, {"b", {{"Y", 3, 4}}}, {"c", {{"X", 5, 6}, {"Y", 9, 10}}}});
  NoiseTrace trace;
  const Dataset out = inject_noise(data, {0, 0, 1.0, 0, 3}, &trace);
  CHECK(out.num_objects() == 0);
  CHECK(trace.dropped.size() == 3);
  CHECK(trace.deletions.size() == 4);
}

TEST_CASE("noise trace replays to the noisy dataset") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Dataset clean = gen_synthetic(small_config(seed)).data;
    const NoiseSpec spec{0.2, 20, 0.15, 0.1, seed};
    NoiseTrace trace;
    const Dataset noisy = inject_noise(clean, spec, &trace);
    CHECK(noisy.audit_index());
    CHECK(dataset_text(inject_noise(clean, spec)) == dataset_text(noisy));

    const auto replayed = replay(clean.to_raw(), trace);
    CHECK(dataset_text(Dataset::from_raw(replayed)) == dataset_text(noisy));
    CHECK(noisy.num_objects() == clean.num_objects() - trace.dropped.size());
    CHECK(noisy.num_visits() == clean.num_visits() - trace.deletions.size());
    CHECK_FALSE(trace.switches.empty());
  }
}

TEST_CASE("matching arithmetic") {
  const std::vector<NamedPattern> golden = {named({"o1", "o2", "o3"}, {0, 100}), named({"o7", "o8"}, {500, 600})};
  const EvalReport same = match_patterns(golden, golden);
  CHECK(same.precision == 1.0);
  CHECK(same.recall == 1.0);
  CHECK(same.f1 == 1.0);

  const EvalReport partial = match_patterns({named({"o1", "o2"}, {0, 100})}, {golden[0]});
  CHECK(doctest::Approx(object_iou({"o1", "o2"}, {"o1", "o2", "o3"})) == 2.0 / 3.0);
  CHECK(partial.matched_found == 0);
  CHECK(partial.recall == 0.0);

  const EvalReport half = match_patterns({golden[0], named({"o5", "o6"}, {0, 10})}, {golden[0]});
  CHECK(half.precision == 0.5);
  CHECK(half.recall == 1.0);
  CHECK(doctest::Approx(half.f1) == 2.0 / 3.0);
  CHECK(half.iou_histogram[9] == 1);
  CHECK(half.iou_histogram[0] == 1);

  CHECK(match_patterns({}, {}).f1 == 1.0);
  CHECK(match_patterns({}, golden).recall == 0.0);
  CHECK(match_patterns(golden, {}).precision == 0.0);

  NamedPattern bare = golden[0];
  bare.span.reset();
  CHECK_THROWS_AS(match_patterns({bare}, golden), InputError);
}

TEST_CASE("one-to-one and many-to-one matching") {
  const NamedPattern g = named({"o1", "o2", "o3", "o4", "o5"}, {0, 100});
  const std::vector<NamedPattern> found = {g, named({"o1", "o2", "o3", "o4", "o5", "o6"}, {0, 100})};
  const EvalReport one = match_patterns(found, {g});
  CHECK(one.matched_found == 1);
  CHECK(one.matches.size() == 1);
  CHECK(one.matches[0].found == 0);
  const EvalReport many = match_patterns(found, {g}, {0.8, true});
  CHECK(many.matched_found == 2);
  CHECK(many.matched_golden == 1);
}

TEST_CASE("IoU symmetry and threshold monotonicity") {
  Rng rng(11);
  auto random_named = [&] {
    std::vector<std::string> objs;
    for (int o = 0; o < 8; ++o) {
      if (rng.chance(0.5)) objs.push_back("o" + std::to_string(o));
    }
    if (objs.empty()) objs.push_back("o0");
    const Timestamp b = rng.uniform(0, 100);
    return named(objs, {b, b + rng.uniform(1, 100)});
  };
  for (int trial = 0; trial < 200; ++trial) {
    const NamedPattern a = random_named();
    const NamedPattern b = random_named();
    CHECK(object_iou(a.objects, b.objects) == object_iou(b.objects, a.objects));
    CHECK(span_iou(*a.span, *b.span) == span_iou(*b.span, *a.span));

    std::vector<NamedPattern> found, golden;
    for (int i = 0; i < 6; ++i) found.push_back(random_named());
    for (int i = 0; i < 4; ++i) golden.push_back(random_named());
    double last = 1.0;
    for (double t = 0.0; t < 1.0; t += 0.1) {
      const double r = match_patterns(found, golden, {t, false}).recall;
      CHECK(r <= last);
      last = r;
    }
  }
}

TEST_CASE("d sweep") {
  const Synthetic s = gen_synthetic(small_config(3));
  const Dataset noisy = inject_noise(s.data, {0, 0, 0.1, 0, 3});
  const auto golden = to_named(s.golden, s.data);
  const MiningParams base = small_config(3).params;

  const auto one = sweep_d(noisy, golden, base, {0});
  REQUIRE(one.size() == 1);
  const auto direct = match_patterns(to_named(mine_maxgrowth(noisy, base).patterns, noisy), golden);
  CHECK(one[0].recall == direct.recall);
  CHECK(one[0].precision == direct.precision);
  CHECK(sweep_d(noisy, golden, base, {0, 1, 2, 3}).size() == 4);
}
