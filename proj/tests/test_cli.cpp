#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "comove/io.hpp"

namespace fs = std::filesystem;
using namespace comove;

namespace {

const std::string kFixture = std::string(COMOVE_DATA_DIR) + "/four_objects.paths";

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("comove_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const int status = std::system((std::string(COMOVE_CLI) + " " + args + " 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<PatternRecord> records(const std::string& file) { return load_patterns(file); }

}  // namespace

TEST_CASE("mine writes the pattern records and both miners agree") {
  TempDir dir;
  const std::string params = " -m 2 -k 3 -d 1 --eps 6 ";
  REQUIRE(run("mine --input " + kFixture + " --algo maxgrowth" + params + "--output " + (dir / "mg.jsonl")) == 0);
  REQUIRE(run("mine --input " + kFixture + " --algo frb" + params + "--output " + (dir / "frb.jsonl")) == 0);
  REQUIRE(run("mine --input " + kFixture + " --algo oracle" + params + "--output " + (dir / "or.jsonl")) == 0);

  const auto mg = records(dir / "mg.jsonl");
  REQUIRE(mg.size() == 2);
  CHECK(mg[0].pattern.objects == std::vector<std::string>{"o1", "o2", "o3"});
  CHECK(mg[0].pattern.route == std::vector<std::string>{"A", "B", "D"});
  CHECK(mg[0].provenance.algorithm == "maxgrowth");

  // Canonical outputs differ only in the algorithm named in provenance.
  for (const std::string other : {"frb.jsonl", "or.jsonl"}) {
    const auto r = records(dir / other);
    REQUIRE(r.size() == mg.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      CHECK(r[i].pattern == mg[i].pattern);
      CHECK(r[i].provenance.params == mg[i].provenance.params);
      CHECK(r[i].provenance.dataset == mg[i].provenance.dataset);
    }
  }
}

TEST_CASE("exit codes") {
  TempDir dir;
  const std::string out = dir / "out.jsonl";
  CHECK(run("mine --input " + kFixture + " -m 2 -k 3 -d 1 --eps 6 --bogus --output " + out) == 1);
  CHECK_FALSE(fs::exists(out));
  CHECK(run("") == 1);
  CHECK(run("mine --input " + kFixture + " -k 3 -d 1 --eps 6 --output " + out) == 1);
  CHECK_FALSE(fs::exists(out));

  {
    std::ofstream bad(dir / "bad.paths");
    bad << "#comove-paths v1\na X 5 5\n";
  }
  CHECK(run("mine --input " + (dir / "bad.paths") + " -m 2 -k 3 -d 1 --eps 6 --output " + out) == 2);
  CHECK_FALSE(fs::exists(out));
  CHECK(run("mine --input " + kFixture + " -m 0 -k 3 -d 1 --eps 6 --output " + out) == 2);
  CHECK(run("mine --input " + kFixture + " --algo oracle --oracle-max-objects 2 -m 2 -k 3 -d 1 --eps 6 --output " +
            out) == 3);
  CHECK_FALSE(fs::exists(out));
}

TEST_CASE("gen, perturb, eval, sweep and bench run end to end") {
  TempDir dir;
  REQUIRE(run("gen --cameras 30 --objects 80 --groups 5 --group-size 3..5 --route-len 4..6 --seed 3 -m 3 -k 3 -d 0 "
              "--eps 10 --output " + (dir / "g.paths") + " --golden " + (dir / "g.jsonl")) == 0);
  CHECK(run("gen --objects 80 --output " + (dir / "x.paths") + " --golden " + (dir / "x.jsonl")) == 1);
  REQUIRE(run("perturb --input " + (dir / "g.paths") + " --delete-rate 0.1 --seed 1 --output " + (dir / "n.paths")) == 0);
  REQUIRE(run("mine --input " + (dir / "n.paths") + " -m 3 -k 3 -d 2 --eps 10 --output " + (dir / "f.jsonl")) == 0);
  // Found and golden were mined with different d.
  CHECK(run("eval --found " + (dir / "f.jsonl") + " --golden " + (dir / "g.jsonl") + " --report " + (dir / "r.jsonl")) ==
        2);
  CHECK(run("eval --found " + (dir / "f.jsonl") + " --golden " + (dir / "g.jsonl") + " --allow-param-mismatch --report " +
            (dir / "r.jsonl") + " --histogram " + (dir / "h.csv")) == 0);
  CHECK(fs::file_size(dir / "h.csv") > 0);
  CHECK(run("eval --found " + (dir / "g.jsonl") + " --golden " + (dir / "g.jsonl") + " --report " + (dir / "self.jsonl")) ==
        0);
  {
    std::ifstream in(dir / "self.jsonl");
    std::string first;
    std::getline(in, first);
    CHECK(first.find(R"("precision":1.0,"recall":1.0,"f1":1.0)") != std::string::npos);
  }
  CHECK(run("sweep --input " + (dir / "n.paths") + " --golden " + (dir / "g.jsonl") +
            " -m 3 -k 3 --eps 10 --d-values 0,1,2 --report " + (dir / "s.jsonl")) == 0);
  {
    std::ofstream grid(dir / "grid.json");
    grid << R"({"m":[3],"k":[3],"d":[0,1],"eps":[10]})";
  }
  CHECK(run("bench --input " + (dir / "g.paths") + " --algos maxgrowth,frb --params-grid " + (dir / "grid.json") +
            " --report " + (dir / "b.jsonl")) == 0);
  CHECK(run("bench --input " + (dir / "g.paths") + " --algos nope --params-grid " + (dir / "grid.json") + " --report " +
            (dir / "b2.jsonl")) == 2);
}
