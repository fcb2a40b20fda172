#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "twistlap/errors.hpp"

using namespace twistlap;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      cells.push_back(cell);
    }
    rows.push_back(cells);
  }
  return rows;
}

}  // namespace

TEST_CASE("oracle subcommands") {
  auto r = run({"oracle", "bound-main", "--n", "2", "--degree", "-1", "--rank", "1", "--vol", "1"});
  CHECK(r.code == cli::kOk);
  CHECK(std::stod(r.out) == doctest::Approx(4 * std::numbers::pi / 3).epsilon(1e-15));

  r = run({"oracle", "sphere-dirac", "--R", "2", "--degL", "0", "--qmax", "3"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out == "1 2 3 4\n");

  r = run({"oracle", "bound-dirac-complex", "--degree", "1", "--rank", "1", "--vol", "1"});
  CHECK(r.code == cli::kUsage);
  CHECK(r.err.find("negative degree") != std::string::npos);

  r = run({"oracle", "torus-dolbeault", "--vol", "1", "--degree", "-3", "--kmax", "1",
           "--format", "json"});
  CHECK(r.code == cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["oracle"][0].get<double>() == doctest::Approx(6 * std::numbers::pi));
  CHECK(j["report"]["multiplicities"][0] == 3);

  r = run({"oracle", "dirac-from-dolbeault", "--values", "0,8"});
  CHECK(r.out == "4\n");
  r = run({"oracle", "twist-degree", "--degree", "-1", "--genus", "0"});
  CHECK(r.out == "-2\n");
  r = run({"oracle", "bound-naive", "--n", "2", "--degree", "-4", "--rank", "2", "--vol",
           "6.283185307179586"});
  CHECK(std::stod(r.out) == doctest::Approx(1.0));
  r = run({"oracle", "bound-main", "--degree", "-1", "--vol", "-1"});
  CHECK(r.code == cli::kUsage);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"bogus"}).code == cli::kUsage);
  CHECK(run({"spectrum", "--geometry", "sphere", "--R", "2", "--grid", "64"}).code == cli::kUsage);
  CHECK(run({"verify", "--theorem", "main", "--geometry", "sphere", "--R", "2", "--degrees",
             "-1..x"})
            .code == cli::kUsage);
  CHECK(run({"convergence", "--geometry", "sphere", "--R", "2", "--degree", "-1", "--grids",
             "100,200"})
            .code == cli::kUsage);
  CHECK(run({"spectrum", "--geometry", "cube", "--degree", "-1"}).code == cli::kUsage);
  CHECK(run({"spectrum", "--geometry", "torus", "--degree", "-1"}).code == cli::kUsage);
  CHECK(run({"spectrum", "--geometry", "torus", "--vol", "1", "--degree", "2"}).code ==
        cli::kUsage);
  CHECK(run({"spectrum", "--geometry", "sphere", "--R", "2", "--degree", "-1", "--format",
             "xml"})
            .code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kOk);
}

TEST_CASE("degree and grid parsing") {
  CHECK(cli::parse_degrees("-1..-4") == std::vector<int>{-1, -2, -3, -4});
  CHECK(cli::parse_degrees("-3") == std::vector<int>{-3});
  CHECK(cli::parse_degrees("-1,-5") == std::vector<int>{-1, -5});
  CHECK(cli::parse_degrees("-4..-2") == std::vector<int>{-4, -3, -2});
  CHECK_THROWS_AS(cli::parse_degrees("-1..x"), InvalidParameter);
  CHECK_THROWS_AS(cli::parse_degrees(""), InvalidParameter);
  CHECK_THROWS_AS(cli::parse_degrees("1.5"), InvalidParameter);
  CHECK(cli::parse_grids("100,200,400") == std::vector<int>{100, 200, 400});
  CHECK_THROWS_AS(cli::parse_grids("100,,200"), InvalidParameter);
}

TEST_CASE("spectrum: JSON document shape") {
  const auto r = run({"spectrum", "--geometry", "sphere", "--R", "2", "--degree", "-1",
                      "--operator", "dolbeault", "--grid", "400", "--k", "5", "--format", "json"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  for (const char* key : {"params", "eigenvalues", "residuals", "oracle", "report"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["params"].is_object());
  CHECK(j["report"].is_object());
  CHECK(j["eigenvalues"].size() == 5);
  CHECK(j["residuals"].size() == 5);
  CHECK(j["eigenvalues"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(j["oracle"][0].get<double>() == doctest::Approx(0.5));
  CHECK(j["report"]["clusters"][0]["multiplicity"] == 2);
}

TEST_CASE("spectrum: torus Landau cluster") {
  const auto r = run({"spectrum", "--geometry", "torus", "--vol", "1", "--degree", "-3",
                      "--grid", "64", "--k", "9", "--format", "json"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["report"]["clusters"][0]["value"].get<double>() ==
        doctest::Approx(6 * std::numbers::pi).epsilon(0.02));
  CHECK(j["report"]["clusters"][0]["multiplicity"] == 3);
}

TEST_CASE("verify: exit codes and rows") {
  auto r = run({"verify", "--theorem", "all", "--geometry", "sphere", "--R", "2", "--degrees",
                "-1..-6", "--grid", "800", "--format", "json"});
  CHECK(r.code == cli::kOk);
  json j = json::parse(r.out);
  CHECK(j["report"]["rows"].size() == 18);
  CHECK(j["report"]["all_satisfied"] == true);

  r = run({"verify", "--theorem", "main", "--geometry", "torus", "--vol", "1", "--degrees",
           "-1..-4", "--grid", "64", "--no-diagnostics", "--format", "json"});
  CHECK(r.code == cli::kOk);
  j = json::parse(r.out);
  REQUIRE(j["report"]["rows"].size() == 4);
  for (const auto& row : j["report"]["rows"]) {
    CHECK(row["sharp"] == true);
  }

  r = run({"verify", "--theorem", "cor1", "--geometry", "torus", "--vol", "1", "--degree", "-1"});
  CHECK(r.code == cli::kUsage);
}

TEST_CASE("CSV round-trips bit-exactly and runs are reproducible") {
  const auto dir = std::filesystem::temp_directory_path() / "twistlap_cli_test";
  std::filesystem::create_directories(dir);
  const std::vector<std::string> base = {"spectrum", "--geometry", "torus", "--vol", "1",
                                         "--degree", "-2",        "--grid",  "24", "--k", "5",
                                         "--seed",   "7"};
  auto with = [&](std::vector<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };
  REQUIRE(run(with({"--format", "csv", "--out", (dir / "a.csv").string()})).code == cli::kOk);
  REQUIRE(run(with({"--format", "csv", "--out", (dir / "b.csv").string()})).code == cli::kOk);
  REQUIRE(run(with({"--format", "json", "--out", (dir / "a.json").string()})).code == cli::kOk);
  REQUIRE(run(with({"--format", "json", "--out", (dir / "b.json").string()})).code == cli::kOk);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.json") == slurp(dir / "b.json"));

  const auto rows = parse_csv(slurp(dir / "a.csv"));
  const json j = json::parse(slurp(dir / "a.json"));
  REQUIRE(rows.size() == 6);
  CHECK(rows[0][1] == "eigenvalue");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double from_csv = std::strtod(rows[i][1].c_str(), nullptr);
    const double from_json = j["eigenvalues"][i - 1].get<double>();
    CHECK(std::memcmp(&from_csv, &from_json, sizeof(double)) == 0);
    CHECK(cli::format_real(from_csv) == rows[i][1]);
  }

  // Thread count does not change the bytes.
  setenv("TWISTLAP_THREADS", "2", 1);
  const std::vector<std::string> sweep = {"verify", "--theorem", "all", "--geometry", "sphere",
                                          "--R", "2", "--degrees", "-1..-3", "--grid", "200",
                                          "--format", "csv"};
  const auto many = run(sweep);
  setenv("TWISTLAP_THREADS", "1", 1);
  const auto one = run(sweep);
  unsetenv("TWISTLAP_THREADS");
  CHECK(many.out == one.out);
  std::filesystem::remove_all(dir);
}

TEST_CASE("convergence subcommand") {
  const auto r = run({"convergence", "--geometry", "sphere", "--R", "2", "--degree", "-1",
                      "--grids", "100,200,400", "--format", "json"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["report"]["order"].get<double>() == doctest::Approx(2.0).epsilon(0.1));
  CHECK(j["eigenvalues"].size() == 3);
}

namespace {

// Just the keywords the published schema uses.
bool conforms(const json& v, const json& s, std::string& why) {
  if (s.contains("enum") &&
      std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end()) {
    why = "enum " + v.dump();
    return false;
  }
  if (s.contains("type")) {
    const std::string t = s["type"];
    const bool ok = t == "object"    ? v.is_object()
                    : t == "array"   ? v.is_array()
                    : t == "number"  ? v.is_number()
                    : t == "integer" ? v.is_number_integer()
                    : t == "string"  ? v.is_string()
                                     : false;
    if (!ok) {
      why = "type " + t + " for " + v.dump();
      return false;
    }
  }
  if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>()) {
    why = "minimum";
    return false;
  }
  if (v.is_object()) {
    for (const auto& key : s.value("required", json::array())) {
      if (!v.contains(key.get<std::string>())) {
        why = "missing " + key.get<std::string>();
        return false;
      }
    }
    const json props = s.value("properties", json::object());
    for (const auto& [key, child] : v.items()) {
      if (props.contains(key)) {
        if (!conforms(child, props[key], why)) {
          return false;
        }
      } else if (s.contains("additionalProperties") && s["additionalProperties"] == false) {
        why = "unexpected " + key;
        return false;
      }
    }
  }
  if (v.is_array() && s.contains("items")) {
    for (const auto& item : v) {
      if (!conforms(item, s["items"], why)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("JSON output conforms to the published schema") {
  const json schema =
      json::parse(slurp(std::filesystem::path(TWISTLAP_SOURCE_DIR) / "docs/output.schema.json"));
  const std::vector<std::vector<std::string>> runs = {
      {"spectrum", "--geometry", "sphere", "--R", "2", "--degree", "-2", "--grid", "100"},
      {"spectrum", "--geometry", "torus", "--vol", "1", "--degree", "-1", "--grid", "16",
       "--operator", "dirac"},
      {"verify", "--theorem", "all", "--geometry", "sphere", "--R", "2", "--degrees", "-1,-2",
       "--grid", "100"},
      {"convergence", "--geometry", "torus", "--vol", "1", "--degree", "-1", "--grids",
       "8,12,16"},
      {"oracle", "torus-dolbeault", "--vol", "2", "--degree", "-2", "--kmax", "2"},
      {"oracle", "bound-main", "--n", "3", "--degree", "-1", "--vol", "1"}};
  for (auto args : runs) {
    args.insert(args.end(), {"--format", "json"});
    const auto r = run(args);
    REQUIRE(r.code == cli::kOk);
    std::string why;
    INFO(args[0], " ", args[1]);
    CHECK(conforms(json::parse(r.out), schema, why));
    CHECK(why == "");
  }
}
