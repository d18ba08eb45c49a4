#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fwg/cli.hpp"
#include "fwg/io.hpp"

using namespace fwg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           fs::path("fwg_test_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int counter() {
    static int c = 0;
    return c++;
  }
  std::string file(const std::string& name, const std::string& content) {
    auto p = path / name;
    std::ofstream f(p);
    f << content;
    return p.string();
  }
};

int run_cli(const std::vector<std::string>& args, std::string* out_text = nullptr,
            std::string* err_text = nullptr) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

const char* kFig2Csv =
    "x1,x2,weight\n0,1,1\n1,1,3\n1,0,1\n0,-1,3\n-1,-1,1\n-1,0,3\n";

}  // namespace

TEST_CASE("gauge-info: tropical and quantile descriptors") {
  TempDir tmp;
  auto trop = tmp.file("trop.json", R"({"type":"tropical","d":2})");
  std::string out;
  REQUIRE(run_cli({"gauge-info", "--gauge", trop}, &out) == 0);
  auto j = nlohmann::json::parse(out);
  CHECK(j["skewness"].get<double>() == doctest::Approx(2.0));
  CHECK(j["skew_dirs"].size() == 3);

  auto quant = tmp.file("q.json", R"({"type":"quantile","b":0.25})");
  REQUIRE(run_cli({"gauge-info", "--gauge", quant}, &out) == 0);
  j = nlohmann::json::parse(out);
  CHECK(j["skewness"].get<double>() == doctest::Approx(3.0));
  CHECK(j["breakdown_point"].get<double>() == doctest::Approx(0.25));

  auto square = tmp.file("sq.json",
                         R"({"type":"polyhedral","dim":2,
                             "primal_vertices":[[1,0],[0,1],[-1,0],[0,-1]]})");
  REQUIRE(run_cli({"gauge-info", "--gauge", square}, &out) == 0);
  j = nlohmann::json::parse(out);
  CHECK(j["skewness"].get<double>() == doctest::Approx(1.0));
  CHECK(j["is_norm"].get<bool>());

  auto euc = tmp.file("e.json", R"({"type":"euclidean","dim":3})");
  REQUIRE(run_cli({"gauge-info", "--gauge", euc}, &out) == 0);
  j = nlohmann::json::parse(out);
  CHECK(j["dim"].get<int>() == 3);
  CHECK(j["breakdown_point"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("gauge-info: malformed input exits 2") {
  TempDir tmp;
  auto bad = tmp.file("bad.json", "{not json");
  std::string err;
  CHECK(run_cli({"gauge-info", "--gauge", bad}, nullptr, &err) == 2);

  auto invalid = tmp.file("inv.json",
                          R"({"type":"polyhedral","dim":2,
                              "primal_vertices":[[1,0],[2,0],[1,1]]})");
  CHECK(run_cli({"gauge-info", "--gauge", invalid}, nullptr, &err) == 2);
  CHECK(err.find("origin") != std::string::npos);

  CHECK(run_cli({"gauge-info", "--gauge", tmp.file("u.json", R"({"type":"x"})")},
                nullptr, &err) == 2);
}

TEST_CASE("solve: six-point instance and a single point") {
  TempDir tmp;
  auto gauge = tmp.file("g.json", R"({"type":"tropical","d":2})");
  auto sample = tmp.file("s.csv", kFig2Csv);
  std::string out;
  REQUIRE(run_cli({"solve", "--gauge", gauge, "--sample", sample}, &out) == 0);
  auto j = nlohmann::json::parse(out);
  CHECK(std::abs(j["optimizer"][0].get<double>()) <= 1e-9);
  CHECK(std::abs(j["optimizer"][1].get<double>()) <= 1e-9);
  CHECK(j["unique"] == "yes");

  auto one = tmp.file("one.csv", "x1,x2,weight\n2,3,1.5\n");
  REQUIRE(run_cli({"solve", "--gauge", gauge, "--sample", one}, &out) == 0);
  j = nlohmann::json::parse(out);
  CHECK(j["optimizer"][0].get<double>() == doctest::Approx(2.0));
  CHECK(j["optimizer"][1].get<double>() == doctest::Approx(3.0));
}

TEST_CASE("solve: quantile instance and euclidean dispatch") {
  TempDir tmp;
  auto q = tmp.file("q.json", R"({"type":"quantile","b":0.25})");
  auto s = tmp.file("s.csv", "x1,weight\n0,1\n1,1\n2,1\n3,1\n");
  std::string out;
  REQUIRE(run_cli({"solve", "--gauge", q, "--sample", s}, &out) == 0);
  auto j = nlohmann::json::parse(out);
  // optimal set is [0,1]; the LP returns a vertex of it
  CHECK(j["optimizer"][0].get<double>() >= -1e-9);
  CHECK(j["optimizer"][0].get<double>() <= 1.0 + 1e-9);
  CHECK(j["unique"] == "no");

  auto e = tmp.file("e.json", R"({"type":"euclidean","dim":1})");
  auto s5 = tmp.file("s5.csv", "x1,weight\n0,1\n1,1\n2,1\n3,1\n4,1\n");
  REQUIRE(run_cli({"solve", "--gauge", e, "--sample", s5}, &out) == 0);
  j = nlohmann::json::parse(out);
  CHECK(j["optimizer"][0].get<double>() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(j["unique"] == "unknown");
}

TEST_CASE("solve: malformed sample exits 2") {
  TempDir tmp;
  auto gauge = tmp.file("g.json", R"({"type":"quantile","b":0.25})");
  std::string err;
  CHECK(run_cli({"solve", "--gauge", gauge, "--sample",
                 tmp.file("bad.csv", "a,b\n1,2\n")},
                nullptr, &err) == 2);
  CHECK(run_cli({"solve", "--gauge", gauge, "--sample",
                 tmp.file("neg.csv", "x1,weight\n0,-1\n")},
                nullptr, &err) == 2);
  CHECK(run_cli({"solve", "--gauge", gauge, "--sample",
                 tmp.file("missing.csv", "x1,weight\n")},
                nullptr, &err) == 2);
}

TEST_CASE("robust: kappa mode and precondition exit code") {
  TempDir tmp;
  auto gauge = tmp.file("g.json", R"({"type":"tropical","d":2})");
  auto sample = tmp.file("s.csv", kFig2Csv);
  std::string out;
  REQUIRE(run_cli({"robust", "--gauge", gauge, "--sample", sample, "--kappa",
                   "0.25"},
                  &out) == 0);
  auto j = nlohmann::json::parse(out);
  CHECK(j["mode"] == "kappa");
  CHECK(j["kappa"].get<double>() > 0);

  std::string err;
  CHECK(run_cli({"robust", "--gauge", gauge, "--sample", sample, "--kappa",
                 "0.5"},
                nullptr, &err) == 3);
}

TEST_CASE("robust: verify and escape modes") {
  TempDir tmp;
  auto gauge = tmp.file("g.json", R"({"type":"quantile","b":0.25})");
  auto sample = tmp.file("s.csv", "x1,weight\n0,1\n1,1\n2,1\n3,1\n");
  std::string out;
  REQUIRE(run_cli({"--seed", "5", "robust", "--gauge", gauge, "--sample",
                   sample, "--fraction", "0.2", "--trials", "20"},
                  &out) == 0);
  auto j = nlohmann::json::parse(out);
  CHECK(j["mode"] == "verify");
  CHECK(j["result"]["violations"].get<int>() == 0);

  TempDir outdir;
  REQUIRE(run_cli({"--out", outdir.path.string(), "robust", "--gauge", gauge,
                   "--sample", sample, "--fraction", "0.5"}) == 0);
  auto rj = nlohmann::json::parse(io::read_file((outdir.path / "robust.json").string()));
  CHECK(rj["mode"] == "escape");
  CHECK(rj["result"]["escaped"].get<bool>());
  auto csv = io::read_file((outdir.path / "escape_trace.csv").string());
  CHECK(csv.rfind("M,distance\n", 0) == 0);
}

TEST_CASE("robust: breakdown mode") {
  TempDir tmp;
  auto gauge = tmp.file("g.json", R"({"type":"quantile","b":0.25})");
  std::string csv = "x1,weight\n";
  for (int i = 0; i < 20; ++i) csv += std::to_string(i) + ",1\n";
  auto sample = tmp.file("s.csv", csv);
  std::string out;
  REQUIRE(run_cli({"robust", "--gauge", gauge, "--sample", sample,
                   "--breakdown", "--resolution", "0.02"},
                  &out) == 0);
  auto j = nlohmann::json::parse(out);
  CHECK(std::abs(j["estimate"].get<double>() - 0.25) <= 0.05 + 0.02 + 1e-9);
  CHECK(j["closed_form"].get<double>() == doctest::Approx(0.25));
}

TEST_CASE("hull: ehull and cl JSON plus SVG") {
  TempDir tmp;
  auto gauge = tmp.file("g.json", R"({"type":"tropical","d":2})");
  auto sample = tmp.file("s.csv", kFig2Csv);
  std::string out;
  REQUIRE(run_cli({"hull", "--gauge", gauge, "--sample", sample, "--ehull"},
                  &out) == 0);
  auto j = nlohmann::json::parse(out);
  CHECK(j["cells"].size() > 0);
  for (auto& c : j["cells"]) CHECK(c["bounded"].get<bool>());

  auto svg_path = (tmp.path / "fig.svg").string();
  REQUIRE(run_cli({"hull", "--gauge", gauge, "--sample", sample, "--cl",
                   "--svg", svg_path},
                  &out) == 0);
  j = nlohmann::json::parse(out);
  int segs = 0;
  for (auto& c : j["accepted"])
    if (c["dim"].get<int>() == 1) ++segs;
  CHECK(segs == 3);
  CHECK(j["connected"].get<bool>());
  auto svg = io::read_file(svg_path);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("#cccccc") != std::string::npos);  // hull in grey
  CHECK(svg.find("stroke=\"black\"") != std::string::npos);
}

TEST_CASE("1-D hull: interval JSON") {
  TempDir tmp;
  auto gauge = tmp.file("g.json", R"({"type":"quantile","b":0.25})");
  auto sample = tmp.file("s.csv", "x1,weight\n0,1\n3,1\n");
  std::string out;
  REQUIRE(run_cli({"hull", "--gauge", gauge, "--sample", sample, "--ehull"},
                  &out) == 0);
  auto j = nlohmann::json::parse(out);
  double lo = 1e30, hi = -1e30;
  for (auto& c : j["cells"])
    for (auto& v : c["vertices"]) {
      lo = std::min(lo, v[0].get<double>());
      hi = std::max(hi, v[0].get<double>());
    }
  CHECK(lo == doctest::Approx(0.0));
  CHECK(hi == doctest::Approx(3.0));
}

TEST_CASE("determinism: identical seed gives byte-identical output") {
  TempDir tmp;
  auto gauge = tmp.file("g.json", R"({"type":"tropical","d":2})");
  auto sample = tmp.file("s.csv", kFig2Csv);
  std::string a, b;
  REQUIRE(run_cli({"--seed", "42", "robust", "--gauge", gauge, "--sample",
                   sample, "--fraction", "0.05", "--trials", "16"},
                  &a) == 0);
  REQUIRE(run_cli({"--seed", "42", "--threads", "3", "robust", "--gauge", gauge,
                   "--sample", sample, "--fraction", "0.05", "--trials", "16"},
                  &b) == 0);
  CHECK(a == b);
}

TEST_CASE("reproduce: all ids pass") {
  std::string out;
  for (const char* id :
       {"fig2-ehull", "fig2-cl", "appendix-w6", "appendix-w5", "euclid-3pt",
        "quantile-cl", "quantile-1d", "separable-box", "skew-line"}) {
    CHECK(run_cli({"reproduce", id}, &out) == 0);
    CHECK(out.rfind("PASS", 0) == 0);
  }
  CHECK(run_cli({"reproduce", "euclid-3pt", "--rho", "100"}, &out) == 0);

  std::string err;
  CHECK(run_cli({"reproduce", "nonsense"}, nullptr, &err) == 2);
}

TEST_CASE("sample CSV round-trips") {
  auto s = sample_from_csv_text("x1,x2,weight\n0.5,-1.25,2\n3,4,0.125\n");
  auto again = sample_from_csv_text(sample_to_csv_text(s));
  CHECK((again.points - s.points).norm() == 0.0);
  CHECK((again.weights - s.weights).norm() == 0.0);
}

TEST_CASE("usage errors exit 2") {
  std::string err;
  CHECK(run_cli({"hull", "--gauge", "x.json"}, nullptr, &err) == 2);
  CHECK(run_cli({"frobnicate"}, nullptr, &err) == 2);
}
