#include "comove/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "json.hpp"

namespace comove {

namespace {

constexpr std::string_view kHeader = "#comove-paths v1";

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw InputError(source + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

Timestamp parse_time(std::string_view tok, const std::string& source, std::size_t line) {
  Timestamp value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    fail(source, line, "expected an integer timestamp, got '" + std::string(tok) + "'");
  }
  return value;
}

std::ofstream open_out(const std::filesystem::path& file) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw InputError("cannot write " + file.string());
  return out;
}

}  // namespace

Dataset parse_dataset(std::istream& in, const std::string& source) {
  std::string text;
  std::size_t line_no = 0;
  if (!std::getline(in, text)) fail(source, 1, "missing header '" + std::string(kHeader) + " unit=s'");
  ++line_no;
  const auto header = split_ws(text);
  if (header.size() < 2 || std::string_view(text).substr(0, kHeader.size()) != kHeader || header.size() > 3) {
    if (!header.empty() && header[0] == "#comove-paths") fail(source, 1, "unsupported format version");
    fail(source, 1, "missing header '" + std::string(kHeader) + " unit=s'");
  }
  TimeUnit unit = TimeUnit::seconds;
  if (header.size() == 3) {
    if (header[2] == "unit=ms") {
      unit = TimeUnit::milliseconds;
    } else if (header[2] != "unit=s") {
      fail(source, 1, "unknown time unit '" + std::string(header[2]) + "'");
    }
  }

  std::vector<RawPath> paths;
  std::map<std::string, std::size_t> seen;
  while (std::getline(in, text)) {
    ++line_no;
    const auto tok = split_ws(text);
    if (tok.empty() || tok[0].front() == '#') continue;
    if ((tok.size() - 1) % 3 != 0 || tok.size() < 4) {
      fail(source, line_no, "expected an object id followed by camera/enter/exit triples");
    }
    RawPath path{std::string(tok[0]), {}};
    if (auto [it, fresh] = seen.emplace(path.object, line_no); !fresh) {
      fail(source, line_no, "duplicate object id '" + path.object + "' (first on line " + std::to_string(it->second) + ")");
    }
    for (std::size_t i = 1; i < tok.size(); i += 3) {
      RawVisit v{std::string(tok[i]), parse_time(tok[i + 1], source, line_no), parse_time(tok[i + 2], source, line_no)};
      const std::size_t index = path.visits.size() + 1;
      if (v.enter >= v.exit) {
        fail(source, line_no, "object '" + path.object + "' visit " + std::to_string(index) + " (" + v.camera + ", " +
                                  std::to_string(v.enter) + ", " + std::to_string(v.exit) + "): entrance not before exit");
      }
      if (!path.visits.empty() && path.visits.back().enter >= v.enter) {
        fail(source, line_no, "object '" + path.object + "' visit " + std::to_string(index) + " (" + v.camera + ", " +
                                  std::to_string(v.enter) + ", " + std::to_string(v.exit) +
                                  "): entrances must strictly increase");
      }
      path.visits.push_back(std::move(v));
    }
    paths.push_back(std::move(path));
  }
  return Dataset::from_raw(std::move(paths), unit);
}

Dataset load_dataset(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot open " + file.string());
  return parse_dataset(in, file.string());
}

void write_dataset(std::ostream& out, const Dataset& data) {
  out << kHeader << " unit=" << (data.unit() == TimeUnit::milliseconds ? "ms" : "s") << '\n';
  for (const RawPath& p : data.to_raw()) {
    out << p.object;
    for (const RawVisit& v : p.visits) out << ' ' << v.camera << ' ' << v.enter << ' ' << v.exit;
    out << '\n';
  }
}

std::string dataset_text(const Dataset& data) {
  std::ostringstream out;
  write_dataset(out, data);
  return out.str();
}

void save_dataset(const std::filesystem::path& file, const Dataset& data) {
  auto out = open_out(file);
  write_dataset(out, data);
}

std::string dataset_digest(const Dataset& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dataset_text(data)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

void write_patterns(std::ostream& out, const std::vector<NamedPattern>& patterns, const Provenance& provenance) {
  for (const NamedPattern& p : patterns) {
    nlohmann::ordered_json j;
    j["objects"] = p.objects;
    j["route"] = p.route;
    if (p.span) j["span"] = {p.span->begin, p.span->end};
    if (p.camera_windows) {
      auto& w = j["camera_windows"] = nlohmann::ordered_json::array();
      for (const Interval& i : *p.camera_windows) w.push_back({i.begin, i.end});
    }
    j["provenance"] = {{"algorithm", provenance.algorithm}, {"m", provenance.params.m}, {"k", provenance.params.k},
                       {"d", provenance.params.d},          {"eps", provenance.params.eps},
                       {"unit", provenance.unit},           {"dataset", provenance.dataset}};
    out << j.dump() << '\n';
  }
}

std::vector<PatternRecord> read_patterns(std::istream& in, const std::string& source) {
  std::vector<PatternRecord> out;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (split_ws(text).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(text);
      PatternRecord r;
      r.pattern.objects = j.at("objects").get<std::vector<std::string>>();
      r.pattern.route = j.at("route").get<std::vector<std::string>>();
      if (j.contains("span")) {
        const auto s = j.at("span").get<std::vector<Timestamp>>();
        if (s.size() != 2) fail(source, line_no, "span must have two entries");
        r.pattern.span = Interval{s[0], s[1]};
      }
      if (j.contains("camera_windows")) {
        std::vector<Interval> windows;
        for (const auto& w : j.at("camera_windows")) {
          const auto s = w.get<std::vector<Timestamp>>();
          if (s.size() != 2) fail(source, line_no, "camera window must have two entries");
          windows.push_back({s[0], s[1]});
        }
        r.pattern.camera_windows = std::move(windows);
      }
      if (j.contains("provenance")) {
        const auto& p = j.at("provenance");
        r.provenance.algorithm = p.value("algorithm", "");
        r.provenance.params.m = p.at("m").get<std::size_t>();
        r.provenance.params.k = p.at("k").get<std::size_t>();
        r.provenance.params.d = p.at("d").get<Gap>();
        r.provenance.params.eps = p.at("eps").get<Timestamp>();
        r.provenance.unit = p.value("unit", "s");
        r.provenance.dataset = p.value("dataset", "");
      }
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      fail(source, line_no, std::string("malformed pattern record: ") + e.what());
    }
  }
  return out;
}

std::vector<PatternRecord> load_patterns(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw InputError("cannot open " + file.string());
  return read_patterns(in, file.string());
}

void write_stats(std::ostream& out, const MiningStats& stats, bool timings) {
  for (const StageStats& s : stats.stages) {
    nlohmann::ordered_json j;
    j["stage"] = s.stage;
    j["wall_ms"] = timings ? s.wall_ms : 0.0;
    j["candidates"] = s.candidates;
    j["non_maximal_removed"] = s.non_maximal_removed;
    out << j.dump() << '\n';
  }
}

}  // namespace comove
