#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "support.hpp"

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
  nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "condreg");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = condreg::app::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

const char* kCells = "SDH,Pb,Cd\n737.1,-1,-1\n639.9,1,-1\n658.3,-1,1\n736.7,1,1\n";

std::string synthetic_csv(int n) {
  std::ostringstream os;
  os << "Y,x1,x2,x3\n";
  std::mt19937_64 rng(support::kSeed);
  std::normal_distribution<double> z;
  for (int i = 0; i < n; ++i) {
    const double a = z(rng), b = 0.5 * a + z(rng), c = z(rng);
    os.precision(17);
    os << 1 + 2 * a - b + 0.5 * a * b + 0.3 * z(rng) << "," << a << "," << b << "," << c << "\n";
  }
  return os.str();
}

bool single_error_line(const Outcome& o) {
  return o.err.rfind("condreg: error[", 0) == 0 && o.err.find('\n') == o.err.size() - 1;
}

}  // namespace

TEST_CASE("cli fit on the cell means") {
  support::TempDir dir;
  const auto data = dir.file("cells.csv", kCells);
  const auto o = run_cli({"fit", "--data", data.string(), "--formula", "SDH ~ Pb + Cd + Pb:Cd", "--exact-fit"});
  REQUIRE(o.code == 0);
  const auto j = o.json();
  CHECK(j["schema"] == "condreg/1");
  CHECK(j["command"] == "fit");
  const auto& table = j["model"]["table"];
  REQUIRE(table.size() == 4);
  CHECK(table[3]["term"] == "Cd:Pb");
  CHECK(std::fabs(table[3]["coef"].get<double>() - 43.92) <= 0.05);
  CHECK(table[3]["p"].is_null());

  const auto sat = run_cli({"fit", "--data", data.string(), "--formula", "SDH ~ Pb + Cd + Pb:Cd"});
  CHECK(sat.code == 2);
  CHECK(sat.err.find("error[saturated]") != std::string::npos);
  CHECK(single_error_line(sat));
}

TEST_CASE("cli fit formula errors and text output") {
  support::TempDir dir;
  const auto data = dir.file("d.csv", synthetic_csv(30));
  const auto dup = run_cli({"fit", "--data", data.string(), "--formula", "Y ~ x1 + x1"});
  CHECK(dup.code == 2);
  CHECK(dup.err.find("error[parse]") != std::string::npos);
  CHECK(dup.err.find("duplicate term") != std::string::npos);
  CHECK(single_error_line(dup));

  const auto quad = run_cli({"fit", "--data", data.string(), "--formula", "Y ~ quad(x1,x2)"});
  REQUIRE(quad.code == 0);
  CHECK(quad.json()["model"]["table"].size() == 6);
  CHECK(quad.json()["fit"]["n"] == 30);

  const auto text = run_cli({"fit", "--data", data.string(), "--formula", "Y ~ x1", "--format", "text"});
  CHECK(text.code == 0);
  CHECK(text.out.find("x1") != std::string::npos);
}

TEST_CASE("cli error paths are single-line with exit codes") {
  support::TempDir dir;
  const auto missing = run_cli({"fit", "--data", dir.path("nope.csv").string(), "--formula", "Y ~ x"});
  CHECK(missing.code == 1);
  CHECK(single_error_line(missing));

  const auto bad = dir.file("bad.csv", "Y,x\n1,2,3\n");
  const auto parse = run_cli({"fit", "--data", bad.string(), "--formula", "Y ~ x"});
  CHECK(parse.code == 1);
  CHECK(parse.err.find("error[parse] load") != std::string::npos);

  const auto usage = run_cli({"fit", "--bogus"});
  CHECK(usage.code == 2);
  CHECK(single_error_line(usage));
  CHECK(run_cli({}).code == 2);

  const auto data = dir.file("d.csv", synthetic_csv(10));
  const auto unknown = run_cli({"fit", "--data", data.string(), "--formula", "Y ~ zz"});
  CHECK(unknown.code == 2);
  CHECK(unknown.err.find("error[unknown_column]") != std::string::npos);

  const auto help = run_cli({"--help"});
  CHECK(help.code == 0);
}

TEST_CASE("cli conditional with --coef and sweep") {
  const auto o = run_cli({"conditional", "--formula", "Y ~ CO + SO2 + CO:SO2", "--coef", "204,1674,36,-413",
                          "--target", "CO", "--fix", "SO2=0.598", "--sweep", "0:1:11"});
  REQUIRE(o.code == 0);
  const auto j = o.json();
  CHECK(std::fabs(j["conditional"]["t"]["T_linear"].get<double>() - 1427.0) <= 0.5);
  CHECK(std::fabs(j["conditional"]["t"]["T0"].get<double>() - 225.5) <= 0.5);
  REQUIRE(j["sweep"].size() == 11);
  for (const auto& row : j["sweep"]) {
    const double x = row["x"];
    CHECK(row["y"].get<double>() == doctest::Approx(204 + 1674 * x + 36 * 0.598 - 413 * x * 0.598));
  }
  CHECK(j["fit"].is_null());
}

TEST_CASE("cli conditional with presets on data and plot output") {
  support::TempDir dir;
  const auto data = dir.file("d.csv", synthetic_csv(40));
  const auto plot = dir.path("curve.tsv");
  const auto o = run_cli({"conditional", "--data", data.string(), "--formula", "Y ~ x1 + x2 + x3", "--target",
                          "x1", "--fix", "x2=mean", "--fix", "x3=q25", "--plot", plot.string()});
  REQUIRE(o.code == 0);
  const auto j = o.json();
  const auto& table = j["model"]["table"];
  CHECK(j["conditional"]["t"]["T_linear"].get<double>() == doctest::Approx(table[1]["coef"].get<double>()));
  CHECK(j["sweep"].size() == 101);
  const auto tsv = support::read_file(plot);
  CHECK(tsv.rfind("# condreg/1", 0) == 0);
  CHECK(tsv.find("x1\tY\n") != std::string::npos);

  const auto bad = run_cli({"conditional", "--formula", "Y ~ a + b", "--coef", "1,2,3", "--target", "a", "--fix",
                            "b=mean"});
  CHECK(bad.code == 2);
  CHECK(single_error_line(bad));
}

TEST_CASE("cli effect") {
  const auto o = run_cli({"effect", "--formula", "Y ~ x1 + x1^2", "--coef", "1,2,3", "--target", "x1", "--at", "1"});
  REQUIRE(o.code == 0);
  CHECK(o.json()["effect"]["delta"].get<double>() == doctest::Approx(11.0));
}

TEST_CASE("cli bridge") {
  const auto k = run_cli({"bridge", "--target", "CO", "--other", "SO2", "--constants", "579,52.5,0.316,1.683,0.729",
                          "--expected-sign", "1"});
  REQUIRE(k.code == 0);
  const auto j = k.json();
  CHECK(std::fabs(j["bridge"]["b"].get<double>() - 1047) <= 1.0);
  CHECK(std::fabs(j["bridge"]["two_predictor"]["b_other"].get<double>() - -278) <= 1.0);
  bool flip = false;
  for (const auto& f : j["findings"]) flip = flip || (f["kind"] == "sign_flip" && f["predictor"] == "SO2");
  CHECK(flip);

  support::TempDir dir;
  const auto data = dir.file("d.csv", synthetic_csv(30));
  const auto d = run_cli({"bridge", "--data", data.string(), "--response", "Y", "--predictors", "x1,x2", "--target",
                          "x1"});
  REQUIRE(d.code == 0);
  const auto b = d.json()["bridge"];
  CHECK(b["two_predictor"]["residual_target"].get<double>() < 1e-9);
  CHECK(b["two_predictor"]["residual_other"].get<double>() < 1e-9);
  CHECK(b["ac_discrepancy"].get<double>() < 1e-9);
}

TEST_CASE("cli residualize") {
  support::TempDir dir;
  const auto data = dir.file("d.csv", synthetic_csv(30));
  const auto csv = dir.path("out.csv");
  const auto o = run_cli({"residualize", "--data", data.string(), "--target", "x1", "--others", "x2,x3",
                          "--response", "Y", "--csv", csv.string()});
  REQUIRE(o.code == 0);
  CHECK(o.json()["check"]["difference"].get<double>() < 1e-9);
  const auto written = support::read_file(csv);
  CHECK(written.rfind("Y,x1,x2,x3,x1*\n", 0) == 0);
}

TEST_CASE("cli stepwise and subset") {
  support::TempDir dir;
  const auto data = dir.file("d.csv", synthetic_csv(60));
  const auto s = run_cli({"stepwise", "--data", data.string(), "--formula", "Y ~ quad(x1,x2,x3)", "--alpha", "0.05"});
  REQUIRE(s.code == 0);
  const auto trace = s.json()["trace"];
  for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i]["terms"] < trace[i - 1]["terms"]);

  const auto sub = run_cli({"subset", "--data", data.string(), "--response", "Y", "--pool", "x1,x2,x3,x1:x2",
                            "--size", "2", "--top", "3"});
  REQUIRE(sub.code == 0);
  CHECK(sub.json()["ranked"].size() == 3);
  CHECK(sub.json()["candidates"] == 6);
}

TEST_CASE("cli ellipse") {
  support::TempDir dir;
  const auto data = dir.file("d.csv", synthetic_csv(80));
  const auto plot = dir.path("e.tsv");
  const auto o = run_cli({"ellipse", "--data", data.string(), "--x", "x1", "--y", "x2", "--level", "0.95", "--point",
                          "0,0", "--point", "-4,4", "--plot", plot.string()});
  REQUIRE(o.code == 0);
  const auto j = o.json();
  CHECK(j["ellipse"]["threshold"].get<double>() == doctest::Approx(5.99146454711));
  CHECK(j["points"][0]["region"] == "inside");
  CHECK(j["points"][1]["region"] == "outside");
  const auto tsv = support::read_file(plot);
  std::size_t data_lines = 0;
  std::istringstream in(tsv);
  std::string line;
  bool saw_threshold = false;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) {
      saw_threshold = saw_threshold || line.find("threshold=5.99146") != std::string::npos;
    } else {
      ++data_lines;
    }
  }
  CHECK(saw_threshold);
  CHECK(data_lines == 361);  // header + 360 vertices
}

TEST_CASE("cli action") {
  const auto o = run_cli({"action", "--formula", "SDH ~ Pb + Cd + Pb:Cd", "--coef", "693.0,-4.70,4.49,43.92",
                          "--f1", "Pb", "--f2", "Cd"});
  REQUIRE(o.code == 0);
  CHECK(o.json()["action"]["label"] == "antagonism");
  const auto a = run_cli({"action", "--formula", "Y ~ a + b + a:b", "--coef", "0,1,1,-0.5", "--coef-p",
                          "0.01,0.01,0.01,0.5", "--f1", "a", "--f2", "b"});
  REQUIRE(a.code == 0);
  CHECK(a.json()["action"]["label"] == "additive");
}

TEST_CASE("cli corr and summary") {
  support::TempDir dir;
  const auto data = dir.file("d.csv", synthetic_csv(19));
  const auto c = run_cli({"corr", "--data", data.string(), "--columns", "Y,x1,x2"});
  REQUIRE(c.code == 0);
  const auto j = c.json();
  CHECK(j["n"] == 19);
  CHECK(j["r"][0][0] == 1.0);
  CHECK(j["p"][1][1] == "—");
  CHECK(run_cli({"corr", "--data", data.string(), "--format", "text"}).code == 0);

  const auto s = run_cli({"summary", "--data", data.string()});
  REQUIRE(s.code == 0);
  CHECK(s.json()["columns"].size() == 4);
}

TEST_CASE("cli output is byte-identical across runs and written atomically") {
  support::TempDir dir;
  const auto data = dir.file("d.csv", synthetic_csv(50));
  const std::vector<std::string> args{"subset", "--data", data.string(), "--response", "Y",
                                      "--pool", "x1,x2,x3,x1:x2,x1^2", "--size", "3", "--threads", "3"};
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto with_output = args;
  with_output.push_back("--output");
  with_output.push_back(dir.path("report.json").string());
  REQUIRE(run_cli(with_output).code == 0);
  CHECK(support::read_file(dir.path("report.json")) == a.out);
}

TEST_CASE("cli config precedence") {
  support::TempDir dir;
  const auto data = dir.file("d.csv", synthetic_csv(80));
  const auto cfg = dir.file("cfg.json", R"({"level": 0.5})");
  const auto from_cfg = run_cli({"--config", cfg.string(), "ellipse", "--data", data.string(), "--x", "x1", "--y", "x2"});
  REQUIRE(from_cfg.code == 0);
  CHECK(from_cfg.json()["ellipse"]["level"] == 0.5);
  const auto flag = run_cli({"--config", cfg.string(), "ellipse", "--data", data.string(), "--x", "x1", "--y", "x2",
                             "--level", "0.9"});
  CHECK(flag.json()["ellipse"]["level"] == 0.9);
  const auto def = run_cli({"ellipse", "--data", data.string(), "--x", "x1", "--y", "x2"});
  CHECK(def.json()["ellipse"]["level"] == 0.95);
  const auto bad = dir.file("bad.json", R"({"levle": 0.5})");
  const auto rejected = run_cli({"--config", bad.string(), "summary", "--data", data.string()});
  CHECK(rejected.code == 2);
  CHECK(single_error_line(rejected));
}
