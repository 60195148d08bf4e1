// Command-line front end: mine, gen, perturb, eval, sweep, bench.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "comove/evalkit.hpp"
#include "comove/frb.hpp"
#include "comove/io.hpp"
#include "comove/maxgrowth.hpp"
#include "comove/oracle.hpp"

namespace {

using namespace comove;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitLimit = 3;
constexpr int kExitInternal = 4;

struct ParamFlags {
  std::size_t m = 2;
  std::size_t k = 2;
  Gap d = 0;
  Timestamp eps = 0;

  void add(CLI::App& app, bool required) {
    auto* om = app.add_option("-m", m, "minimum group size");
    auto* ok = app.add_option("-k", k, "minimum route length");
    auto* od = app.add_option("-d", d, "tolerated skipped cameras");
    auto* oe = app.add_option("--eps", eps, "entrance proximity threshold (dataset time unit)");
    if (required) {
      for (auto* o : {om, ok, od, oe}) o->required();
    }
  }
  MiningParams params() const { return {m, k, d, eps}; }
};

Range parse_range(const std::string& text) {
  auto parse = [&](std::string_view s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw CLI::ValidationError("range", "bad range '" + text + "'");
    return v;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto v = parse(text);
    return {v, v};
  }
  return {parse(std::string_view(text).substr(0, dots)), parse(std::string_view(text).substr(dots + 2))};
}

std::ofstream open_output(const std::string& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw InputError("cannot write " + file);
  return out;
}

// Results are rendered in memory first so a failing run leaves no partial file.
void write_file(const std::string& file, const std::string& contents) {
  auto out = open_output(file);
  out << contents;
  if (!out) throw InputError("failed writing " + file);
}

std::string patterns_text(const std::vector<Pattern>& patterns, const Dataset& data, const Provenance& prov) {
  std::ostringstream out;
  write_patterns(out, to_named(patterns, data), prov);
  return out.str();
}

struct MineFlags {
  std::string input;
  std::string output;
  std::string algo = "maxgrowth";
  ParamFlags params;
  bool no_root_prune = false;
  bool no_dep_prune = false;
  bool parallel = false;
  unsigned threads = 0;
  std::string stats;
  bool no_timings = false;
  std::size_t oracle_max_objects = OracleLimits{}.max_objects;
  std::size_t oracle_max_route_len = OracleLimits{}.max_route_len;
};

MiningResult run_algorithm(const std::string& algo, const Dataset& data, const MiningParams& params,
                           const MineFlags& flags) {
  if (algo == "frb") return mine_frb(data, params);
  if (algo == "oracle") {
    StageTimer timer;
    MiningResult r;
    r.patterns = mine_bruteforce(data, params, {flags.oracle_max_objects, flags.oracle_max_route_len});
    r.stats.final_patterns = r.patterns.size();
    r.stats.stages.push_back({std::string(stage::kCandidateGeneration), timer.elapsed_ms(), r.patterns.size(), 0});
    return r;
  }
  MaxGrowthOptions opt;
  opt.root_prune = !flags.no_root_prune;
  opt.dep_prune = !flags.no_dep_prune;
  if (algo == "mg-root") opt.dep_prune = false;
  if (algo == "mg-dep") opt.root_prune = false;
  if (algo == "mg-noprune") opt.root_prune = opt.dep_prune = false;
  opt.parallel = flags.parallel;
  opt.threads = flags.threads;
  return mine_maxgrowth(data, params, opt);
}

const std::vector<std::string> kAlgos = {"maxgrowth", "frb", "oracle", "mg-root", "mg-dep", "mg-noprune"};

int cmd_mine(const MineFlags& f) {
  const Dataset data = load_dataset(f.input);
  const MiningParams params = f.params.params();
  params.validate();
  const MiningResult result = run_algorithm(f.algo, data, params, f);
  const Provenance prov{f.algo, params, data.unit() == TimeUnit::milliseconds ? "ms" : "s", dataset_digest(data)};
  write_file(f.output, patterns_text(result.patterns, data, prov));
  if (!f.stats.empty()) {
    std::ostringstream s;
    write_stats(s, result.stats, !f.no_timings);
    write_file(f.stats, s.str());
  }
  std::cerr << result.patterns.size() << " maximal patterns from " << result.stats.candidates << " candidates\n";
  return kExitOk;
}

struct GenFlags {
  GenConfig cfg;
  std::string group_size = "3..6";
  std::string route_len = "4..8";
  std::string bg_len = "2..6";
  std::string hop = "60..180";
  std::string dwell = "5..30";
  ParamFlags params;
  std::string output;
  std::string golden;
};

int cmd_gen(GenFlags& f, const CLI::App& app) {
  f.cfg.group_size = parse_range(f.group_size);
  f.cfg.route_length = parse_range(f.route_len);
  f.cfg.background_path_length = parse_range(f.bg_len);
  f.cfg.hop_time = parse_range(f.hop);
  f.cfg.dwell = parse_range(f.dwell);
  const bool have_params = app.count("-m") && app.count("-k") && app.count("-d") && app.count("--eps");
  if (!f.golden.empty() && !have_params) {
    throw CLI::ValidationError("--golden", "requires -m, -k, -d and --eps");
  }
  if (have_params) f.cfg.params = f.params.params();
  const Synthetic s = gen_synthetic(f.cfg);
  write_file(f.output, dataset_text(s.data));
  if (!f.golden.empty()) {
    write_file(f.golden, patterns_text(s.golden, s.data, {"maxgrowth", f.cfg.params, "s", dataset_digest(s.data)}));
  }
  std::cerr << s.data.num_objects() << " objects, " << s.golden.size() << " golden patterns\n";
  return kExitOk;
}

struct PerturbFlags {
  std::string input;
  std::string output;
  std::string trace;
  NoiseSpec spec;
};

int cmd_perturb(const PerturbFlags& f) {
  const Dataset data = load_dataset(f.input);
  NoiseTrace trace;
  const Dataset noisy = inject_noise(data, f.spec, &trace);
  write_file(f.output, dataset_text(noisy));
  if (!f.trace.empty()) {
    std::ostringstream out;
    for (const auto& s : trace.shifts) {
      out << Json{{"op", "shift"}, {"object", s.object}, {"index", s.index}, {"offset", s.offset}}.dump() << '\n';
    }
    for (const auto& d : trace.deletions) {
      out << Json{{"op", "delete"}, {"object", d.object}, {"index", d.index}}.dump() << '\n';
    }
    for (const auto& s : trace.switches) {
      out << Json{{"op", "id_switch"}, {"first", s.first}, {"second", s.second}, {"cut", s.cut}}.dump() << '\n';
    }
    for (const auto& o : trace.dropped) out << Json{{"op", "drop"}, {"object", o}}.dump() << '\n';
    write_file(f.trace, out.str());
  }
  std::cerr << trace.shifts.size() << " shifts, " << trace.deletions.size() << " deletions, " << trace.switches.size()
            << " id switches\n";
  return kExitOk;
}

struct EvalFlags {
  std::string found;
  std::string golden;
  std::string report;
  std::string histogram;
  double iou = 0.8;
  bool many_to_one = false;
  bool allow_param_mismatch = false;
};

std::vector<NamedPattern> patterns_of(const std::vector<PatternRecord>& records) {
  std::vector<NamedPattern> out;
  for (const auto& r : records) out.push_back(r.pattern);
  return out;
}

void check_params(const std::vector<PatternRecord>& found, const std::vector<PatternRecord>& golden) {
  std::vector<const PatternRecord*> all;
  for (const auto& r : found) all.push_back(&r);
  for (const auto& r : golden) all.push_back(&r);
  for (const PatternRecord* r : all) {
    const auto& a = all.front()->provenance;
    const auto& b = r->provenance;
    if (a.params != b.params || a.unit != b.unit) {
      std::ostringstream msg;
      msg << "mining parameters differ between pattern files (m=" << a.params.m << " k=" << a.params.k
          << " d=" << a.params.d << " eps=" << a.params.eps << " vs m=" << b.params.m << " k=" << b.params.k
          << " d=" << b.params.d << " eps=" << b.params.eps << "); pass --allow-param-mismatch to compare anyway";
      throw InputError(msg.str());
    }
  }
}

std::string histogram_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "bin_start,count\n";
  for (std::size_t i = 0; i < r.iou_histogram.size(); ++i) out << "0." << i << ',' << r.iou_histogram[i] << '\n';
  return out.str();
}

int cmd_eval(const EvalFlags& f) {
  const auto found = load_patterns(f.found);
  const auto golden = load_patterns(f.golden);
  if (!f.allow_param_mismatch) check_params(found, golden);
  const EvalReport r = match_patterns(patterns_of(found), patterns_of(golden), {f.iou, f.many_to_one});

  std::ostringstream out;
  out << Json{{"type", "summary"},          {"precision", r.precision},
              {"recall", r.recall},         {"f1", r.f1},
              {"found", found.size()},      {"golden", golden.size()},
              {"matched_found", r.matched_found}, {"matched_golden", r.matched_golden},
              {"threshold", f.iou},         {"many_to_one", f.many_to_one}}
             .dump()
      << '\n';
  for (const Match& m : r.matches) {
    out << Json{{"type", "match"},
                {"found", m.found},
                {"golden", m.golden},
                {"object_iou", m.object_iou},
                {"span_iou", m.span_iou}}
               .dump()
        << '\n';
  }
  for (std::size_t i = 0; i < r.iou_histogram.size(); ++i) {
    out << Json{{"type", "histogram"}, {"bin_start", static_cast<double>(i) / 10}, {"count", r.iou_histogram[i]}}.dump()
        << '\n';
  }
  write_file(f.report, out.str());
  if (!f.histogram.empty()) write_file(f.histogram, histogram_csv(r));
  std::fprintf(stderr, "precision %.4f  recall %.4f  F1 %.4f  (%zu found, %zu golden)\n", r.precision, r.recall, r.f1,
              found.size(), golden.size());
  return kExitOk;
}

struct SweepFlags {
  std::string input;
  std::string golden;
  std::string report;
  std::vector<Gap> d_values{0, 1, 2, 3};
  ParamFlags params;
  double iou = 0.8;
  bool many_to_one = false;
};

int cmd_sweep(const SweepFlags& f) {
  const Dataset data = load_dataset(f.input);
  const auto golden = patterns_of(load_patterns(f.golden));
  const auto rows = sweep_d(data, golden, f.params.params(), f.d_values, {f.iou, f.many_to_one});
  std::ostringstream out;
  for (const SweepRow& r : rows) {
    out << Json{{"d", r.d}, {"found", r.found}, {"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1}}.dump()
        << '\n';
    std::fprintf(stderr, "d=%u  found %zu  precision %.4f  recall %.4f  F1 %.4f\n", r.d, r.found, r.precision, r.recall, r.f1);
  }
  write_file(f.report, out.str());
  return kExitOk;
}

struct BenchFlags {
  MineFlags mine;
  std::string algos = "maxgrowth,frb";
  std::string grid;
  std::string report;
  bool no_timings = false;
};

std::vector<MiningParams> load_grid(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(file + ": " + e.what());
  }
  std::vector<MiningParams> grid;
  auto one = [&](const nlohmann::json& p) {
    return MiningParams{p.at("m").get<std::size_t>(), p.at("k").get<std::size_t>(), p.at("d").get<Gap>(),
                        p.at("eps").get<Timestamp>()};
  };
  try {
    if (j.is_array()) {
      for (const auto& p : j) grid.push_back(one(p));
    } else {
      // Cartesian product of value lists.
      for (auto m : j.at("m")) {
        for (auto k : j.at("k")) {
          for (auto d : j.at("d")) {
            for (auto eps : j.at("eps")) grid.push_back(one({{"m", m}, {"k", k}, {"d", d}, {"eps", eps}}));
          }
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(file + ": parameter grid needs m, k, d and eps: " + e.what());
  }
  for (const auto& p : grid) p.validate();
  return grid;
}

int cmd_bench(const BenchFlags& f) {
  const Dataset data = load_dataset(f.mine.input);
  const auto grid = load_grid(f.grid);
  std::vector<std::string> algos;
  for (std::stringstream ss(f.algos); ss.good();) {
    std::string a;
    std::getline(ss, a, ',');
    if (std::find(kAlgos.begin(), kAlgos.end(), a) == kAlgos.end()) throw InputError("unknown algorithm '" + a + "'");
    algos.push_back(a);
  }

  std::ostringstream out;
  std::fprintf(stderr, "%-11s %3s %3s %3s %6s %12s %12s %12s %10s %10s %8s\n", "algo", "m", "k", "d", "eps", "cand_ms",
              "verify_ms", "dominance_ms", "candidates", "non_max", "final");
  for (const MiningParams& params : grid) {
    for (const std::string& algo : algos) {
      const MiningResult r = run_algorithm(algo, data, params, f.mine);
      auto ms = [&](std::string_view name) {
        const StageStats* s = r.stats.find(name);
        return s && !f.no_timings ? s->wall_ms : 0.0;
      };
      Json row{{"algo", algo},
               {"m", params.m},
               {"k", params.k},
               {"d", params.d},
               {"eps", params.eps},
               {"candidate_generation_ms", ms(stage::kCandidateGeneration)},
               {"validness_verification_ms", ms(stage::kValidnessVerification)},
               {"dominance_verification_ms", ms(stage::kDominanceVerification)},
               {"candidates", r.stats.candidates},
               {"non_maximal", r.stats.non_maximal},
               {"patterns", r.patterns.size()}};
      out << row.dump() << '\n';
      std::fprintf(stderr, "%-11s %3zu %3zu %3u %6lld %12.2f %12.2f %12.2f %10llu %10llu %8zu\n", algo.c_str(), params.m,
                  params.k, params.d, static_cast<long long>(params.eps), ms(stage::kCandidateGeneration),
                  ms(stage::kValidnessVerification), ms(stage::kDominanceVerification),
                  static_cast<unsigned long long>(r.stats.candidates),
                  static_cast<unsigned long long>(r.stats.non_maximal), r.patterns.size());
    }
  }
  write_file(f.report, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relaxed co-movement pattern mining over camera trajectories"};
  app.require_subcommand(1);

  MineFlags mine;
  auto* m = app.add_subcommand("mine", "mine maximal patterns from a paths file");
  m->add_option("--input", mine.input, "paths file")->required()->check(CLI::ExistingFile);
  m->add_option("--output", mine.output, "pattern JSONL output")->required();
  m->add_option("--algo", mine.algo, "algorithm")->check(CLI::IsMember(kAlgos));
  mine.params.add(*m, true);
  m->add_flag("--no-root-prune", mine.no_root_prune, "disable root pruning");
  m->add_flag("--no-dep-prune", mine.no_dep_prune, "disable dependency pruning");
  m->add_flag("--parallel", mine.parallel, "grow root subtrees on several threads");
  m->add_option("--threads", mine.threads, "thread count for --parallel (0: all cores)");
  m->add_option("--stats", mine.stats, "per-stage statistics JSONL output");
  m->add_flag("--no-timings", mine.no_timings, "write wall_ms as 0 in --stats");
  m->add_option("--oracle-max-objects", mine.oracle_max_objects, "object limit for --algo oracle");
  m->add_option("--oracle-max-route-len", mine.oracle_max_route_len, "path length limit for --algo oracle");

  GenFlags gen;
  auto* g = app.add_subcommand("gen", "generate a synthetic dataset with planted groups");
  g->add_option("--cameras", gen.cfg.num_cameras, "number of cameras");
  g->add_option("--grid-degree", gen.cfg.grid_degree, "mean degree of the camera graph");
  g->add_option("--objects", gen.cfg.num_objects, "number of objects");
  g->add_option("--groups", gen.cfg.num_planted_groups, "number of planted groups");
  g->add_option("--group-size", gen.group_size, "group size range A..B");
  g->add_option("--route-len", gen.route_len, "planted route length range A..B");
  g->add_option("--bg-len", gen.bg_len, "background path length range A..B");
  g->add_option("--hop", gen.hop, "entrance-to-entrance time range A..B");
  g->add_option("--dwell", gen.dwell, "dwell time range A..B");
  g->add_option("--jitter", gen.cfg.entrance_jitter, "maximum entrance jitter inside a group");
  g->add_option("--horizon", gen.cfg.horizon, "latest start time");
  g->add_option("--seed", gen.cfg.seed, "random seed");
  gen.params.add(*g, false);
  g->add_option("--output", gen.output, "paths file output")->required();
  g->add_option("--golden", gen.golden, "golden pattern JSONL output (needs -m -k -d --eps)");

  PerturbFlags perturb;
  auto* p = app.add_subcommand("perturb", "inject shift, deletion and id-switch noise");
  p->add_option("--input", perturb.input, "paths file")->required()->check(CLI::ExistingFile);
  p->add_option("--output", perturb.output, "paths file output")->required();
  p->add_option("--shift-rate", perturb.spec.shift_rate, "per-visit shift probability")->check(CLI::Range(0.0, 1.0));
  p->add_option("--shift-max", perturb.spec.shift_max, "maximum absolute shift");
  p->add_option("--delete-rate", perturb.spec.delete_rate, "per-visit deletion probability")->check(CLI::Range(0.0, 1.0));
  p->add_option("--idswitch-rate", perturb.spec.idswitch_rate, "per-object id switch probability")
      ->check(CLI::Range(0.0, 1.0));
  p->add_option("--seed", perturb.spec.seed, "random seed");
  p->add_option("--trace", perturb.trace, "JSONL trace of applied operations");

  EvalFlags eval;
  auto* e = app.add_subcommand("eval", "score found patterns against golden ones");
  e->add_option("--found", eval.found, "pattern JSONL")->required()->check(CLI::ExistingFile);
  e->add_option("--golden", eval.golden, "pattern JSONL")->required()->check(CLI::ExistingFile);
  e->add_option("--iou", eval.iou, "IoU threshold")->check(CLI::Range(0.0, 1.0));
  e->add_flag("--many-to-one", eval.many_to_one, "let several found patterns match one golden pattern");
  e->add_flag("--allow-param-mismatch", eval.allow_param_mismatch, "compare files mined with different parameters");
  e->add_option("--report", eval.report, "JSONL report output")->required();
  e->add_option("--histogram", eval.histogram, "IoU histogram CSV output");

  SweepFlags sweep;
  auto* s = app.add_subcommand("sweep", "mine with several d values and score each run");
  s->add_option("--input", sweep.input, "paths file")->required()->check(CLI::ExistingFile);
  s->add_option("--golden", sweep.golden, "golden pattern JSONL")->required()->check(CLI::ExistingFile);
  s->add_option("--d-values", sweep.d_values, "d values")->delimiter(',');
  s->add_option("-m", sweep.params.m, "minimum group size")->required();
  s->add_option("-k", sweep.params.k, "minimum route length")->required();
  s->add_option("--eps", sweep.params.eps, "entrance proximity threshold")->required();
  s->add_option("--iou", sweep.iou, "IoU threshold")->check(CLI::Range(0.0, 1.0));
  s->add_flag("--many-to-one", sweep.many_to_one, "let several found patterns match one golden pattern");
  s->add_option("--report", sweep.report, "JSONL rows output")->required();

  BenchFlags bench;
  auto* b = app.add_subcommand("bench", "stage breakdown and non-maximal counts over a parameter grid");
  b->add_option("--input", bench.mine.input, "paths file")->required()->check(CLI::ExistingFile);
  b->add_option("--algos", bench.algos, "comma-separated algorithms");
  b->add_option("--params-grid", bench.grid, "JSON parameter grid")->required()->check(CLI::ExistingFile);
  b->add_option("--report", bench.report, "JSONL report output")->required();
  b->add_flag("--no-timings", bench.no_timings, "report wall times as 0");
  b->add_flag("--parallel", bench.mine.parallel, "grow root subtrees on several threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*m) return cmd_mine(mine);
    if (*g) return cmd_gen(gen, *g);
    if (*p) return cmd_perturb(perturb);
    if (*e) return cmd_eval(eval);
    if (*s) return cmd_sweep(sweep);
    if (*b) return cmd_bench(bench);
  } catch (const CLI::ValidationError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const LimitError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitLimit;
  } catch (const InputError& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitInput;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << '\n';
    return kExitInternal;
  }
  return kExitUsage;
}
