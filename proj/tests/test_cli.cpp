#include <filesystem>
#include <string>
#include <vector>

#include "anisofield/cli.hpp"
#include "anisofield/io.hpp"
#include "doctest.h"

using namespace anisofield;
namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  const fs::path dir = fs::temp_directory_path() / "anisofield-cli-test";
  fs::create_directories(dir);
  return dir;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "anisofield");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli::run(static_cast<int>(argv.size()), argv.data());
}

void write(const std::string& name, const std::string& text) { io::write_atomic(path(name), text); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("analyze") {
    write("stein.json", R"({"kind": "Stein", "nu": 2.5, "stein_c": [1, 2], "stein_a": [0.5, 1], "stein_alpha": [1, 1.5]})");
    CHECK(run({"analyze", "--model", path("stein.json"), "--out", path("report.json")}) == 0);
    const nlohmann::json rep = io::read_json(path("report.json"));
    CHECK(rep.contains("exponents"));
    CHECK(rep.contains("meta"));

    write("bad.json", R"({"kind": "Stein", "nu": 1.0, "stein_c": [1, 1], "stein_a": [1, 1], "stein_alpha": [1, 1]})");
    CHECK(run({"analyze", "--model", path("bad.json"), "--out", path("bad-report.json")}) == 1);
    CHECK_FALSE(fs::exists(path("bad-report.json")));
    CHECK(run({"analyze", "--model", path("absent.json")}) == 3);
    CHECK(run({"analyze", "--bogus-flag"}) == 1);
  }

  TEST_CASE("variogram table") {
    write("fbm.json", R"({"kind": "Fbm", "dims": 1, "hurst": 0.5})");
    write("lags.csv", "h_1\n0.5\n2\n");
    CHECK(run({"variogram", "--model", path("fbm.json"), "--lags", path("lags.csv"), "--out", path("v.csv")}) == 0);
    const io::CsvTable t = io::read_csv(path("v.csv"));
    CHECK(t.header == std::vector<std::string>{"h_1", "value", "err"});
    CHECK(t.rows[1][1] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(run({"variogram", "--model", path("fbm.json"), "--lags", path("lags.csv"), "--rel-tol", "0.5"}) == 1);
  }

  TEST_CASE("simulate is deterministic") {
    write("canon.json", R"({"kind": "CanonicalC", "beta": [1, 2], "gamma": 4})");
    const std::vector<std::string> common{"simulate", "--model", path("canon.json"), "--grid", "0:1:9,0:1:9",
                                          "--lattice", "32", "--seed", "11", "--realizations", "2"};
    auto a = common, b = common;
    a.insert(a.end(), {"--out", path("s1.csv")});
    b.insert(b.end(), {"--out", path("s2.csv"), "--threads", "4"});
    CHECK(run(a) == 0);
    CHECK(run(b) == 0);
    CHECK(io::read_file(path("s1.csv")) == io::read_file(path("s2.csv")));
    CHECK(io::read_csv(path("s1.csv")).header.front() == "realization");

    auto c = common;
    c.insert(c.end(), {"--out", path("s.afld1")});
    CHECK(run(c) == 0);
    const auto recs = io::decode_afld1_stream(io::read_file(path("s.afld1")));
    CHECK(recs.size() == 2);
    CHECK(recs[0].seed == 11);
    CHECK(recs[1].seed == 12);
    CHECK(recs[0].values[0] == 0.0);
  }

  TEST_CASE("simulate with the exact gneiting sampler") {
    write("gm.json", R"({"d": 1, "alpha": 0.5, "beta": 1, "gamma": 0.75})");
    CHECK(run({"simulate", "--gneiting", path("gm.json"), "--grid", "0:1:5,0:1:4", "--pin-origin", "--out",
               path("g.csv")}) == 0);
    CHECK(io::read_csv(path("g.csv")).rows.size() == 20);
    CHECK(run({"simulate", "--gneiting", path("gm.json"), "--grid", "0:1:5"}) == 1);
  }

  TEST_CASE("krige") {
    write("fbm.json", R"({"kind": "Fbm", "dims": 1, "hurst": 0.5})");
    write("obs.csv", "t_1,value\n1,0.8\n");
    write("targets.csv", "t_1\n2\n0.5\n");
    CHECK(run({"krige", "--model", path("fbm.json"), "--obs", path("obs.csv"), "--targets", path("targets.csv"),
               "--out", path("pred.csv")}) == 0);
    const io::CsvTable t = io::read_csv(path("pred.csv"));
    CHECK(t.header == std::vector<std::string>{"t_1", "prediction", "variance"});
    CHECK(t.rows[0][2] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(t.rows[1][1] == doctest::Approx(0.4).epsilon(1e-6));
    CHECK(t.rows[1][2] == doctest::Approx(0.25).epsilon(1e-6));
  }

  TEST_CASE("dims") {
    write("gm2.json", R"({"d": 2, "alpha": 0.5, "beta": 1, "gamma": 0.75})");
    CHECK(run({"dims", "--gneiting", path("gm2.json"), "--p", "1", "--out", path("d.json")}) == 0);
    const nlohmann::json d = io::read_json(path("d.json"));
    CHECK(d.dump().find("3.5") != std::string::npos);
    CHECK(run({"dims", "--out", path("d2.json")}) == 1);
  }

  TEST_CASE("verify runs a suite") {
    CHECK(run({"verify", "--suite", "dims"}) == 0);
    CHECK(run({"verify", "--suite", "nonexistent"}) == 1);
  }
}
