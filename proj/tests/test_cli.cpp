#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lenselast/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LENSCLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / ("lenselast_test_" + name);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

}  // namespace

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli("") == 2);
  CHECK(run_cli("unknown-command") == 2);
  CHECK(run_cli("verify --R 1.0") == 2);
  CHECK(run_cli("verify --R 2 --k -1") == 2);
  CHECK(run_cli("sample --field bogus") == 2);
  CHECK(run_cli("sample --param-space bogus") == 2);
  CHECK(run_cli("integrals --a 3.0") == 2);
  CHECK(run_cli("integrals --a-seq nonsense") == 2);
  CHECK(run_cli("integrals --a 0.2 --a-seq 0.4:3") == 2);
  CHECK(run_cli("ellipticity --grid 8") == 2);
  CHECK(run_cli("sample --format xml") == 2);
}

TEST_CASE("unwritable output path exits with code 3") {
  CHECK(run_cli("sample --grid 4 --out /nonexistent-dir/x.csv") == 3);
}

TEST_CASE("sample csv: contract and pinned stress value") {
  const fs::path out = temp_file("sample.csv");
  REQUIRE(run_cli("sample --field stress --param-space circle --grid 3 --k 1 --format csv --out " +
                  out.string()) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("\r\n") == std::string::npos);  // LF line endings
  const auto lines = split(text, '\n');
  REQUIRE(lines.size() >= 10);
  CHECK(lines[0] == "x1,x2,c,theta,s11,s12,s22,flag");

  // the c=1, theta=pi/4 node lands on (1,1): cos(2 theta) = 0 so s12 = 0
  bool found = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto cells = split(lines[i], ',');
    REQUIRE(cells.size() == 8);
    if (std::abs(std::stod(cells[0]) - 1.0) < 1e-9 && std::abs(std::stod(cells[1]) - 1.0) < 1e-9) {
      found = true;
      CHECK(std::abs(std::stod(cells[5])) < 1e-12);
      CHECK(cells[7] == "ok");
    }
  }
  CHECK(found);
  fs::remove(out);
}

TEST_CASE("sample cartesian json: singular and exterior markers") {
  const fs::path out = temp_file("sample.json");
  REQUIRE(run_cli("sample --field displacement --R 2 --grid 9 --out " + out.string()) == 0);
  const json doc = json::parse(slurp(out));
  REQUIRE(doc.contains("config"));
  REQUIRE(doc.contains("results"));
  REQUIRE(doc.contains("checks"));
  REQUIRE(doc.contains("warnings"));
  CHECK(doc["config"]["command"] == "sample");
  bool saw_singular = false, saw_exterior = false, saw_ok = false;
  for (const auto& row : doc["results"]) {
    const std::string flag = row["flag"];
    if (flag == "singular") {
      saw_singular = true;
      CHECK(row["u1"] == "singular");
    } else if (flag == "exterior") {
      saw_exterior = true;
    } else {
      saw_ok = true;
      CHECK(row["u1"].is_number());
    }
  }
  // the grid contains the cusp (0,0), exterior corners, and interior points
  CHECK(saw_singular);
  CHECK(saw_exterior);
  CHECK(saw_ok);
  fs::remove(out);
}

TEST_CASE("sample lame with k=0 exposes non-elliptic rows") {
  const fs::path out = temp_file("lame.json");
  REQUIRE(run_cli("sample --field lame --k 0 --param-space circle --grid 12 --out " +
                  out.string()) == 0);
  const json doc = json::parse(slurp(out));
  bool negative = false;
  for (const auto& row : doc["results"]) {
    if (row["lambda_plus_2mu"].is_number() && row["lambda_plus_2mu"].get<double>() < 0.0)
      negative = true;
  }
  CHECK(negative);
  fs::remove(out);
}

TEST_CASE("verify passes and reports schema-stable checks") {
  const fs::path out = temp_file("verify.json");
  REQUIRE(run_cli("verify --R 2 --k 1 --out " + out.string()) == 0);
  const json doc = json::parse(slurp(out));
  REQUIRE(doc["checks"].is_array());
  CHECK(doc["checks"].size() >= 8);
  for (const auto& c : doc["checks"]) {
    CHECK(c.contains("name"));
    CHECK(c.contains("ref"));
    CHECK(c.contains("status"));
    CHECK(c.contains("measured"));
    CHECK(c.contains("expected"));
    CHECK(c.contains("tolerance"));
    CHECK(c["status"] != "fail");
  }
  fs::remove(out);
}

TEST_CASE("verify with k=0: ellipticity finding is informational") {
  const fs::path out = temp_file("verify0.json");
  REQUIRE(run_cli("verify --R 2 --k 0 --out " + out.string()) == 0);
  const json doc = json::parse(slurp(out));
  bool found = false;
  for (const auto& c : doc["checks"])
    if (c["name"] == "ellipticity-margin") {
      found = true;
      CHECK(c["status"] == "info");
      CHECK(c["measured"].get<double>() < 0.0);
    }
  CHECK(found);
  fs::remove(out);
}

TEST_CASE("integrals: single a and sequence with disclosure") {
  const fs::path out = temp_file("integrals.json");
  REQUIRE(run_cli("integrals --R 2 --k 1 --a 0.3 --out " + out.string()) == 0);
  {
    const json doc = json::parse(slurp(out));
    REQUIRE(doc["results"]["rows"].size() == 1);
    const auto& row = doc["results"]["rows"][0];
    CHECK(std::abs(row["T2a"].get<double>() - row["T2a_closed"].get<double>()) < 1e-8);
    CHECK_FALSE(doc["results"].contains("limits"));
  }

  REQUIRE(run_cli("integrals --R 2 --k 1 --a-seq 0.4:5 --out " + out.string()) == 0);
  {
    const json doc = json::parse(slurp(out));
    REQUIRE(doc["results"]["rows"].size() == 5);
    REQUIRE(doc["results"].contains("limits"));
    const auto& limits = doc["results"]["limits"];
    CHECK(limits.contains("couple_limit"));
    CHECK(limits.contains("couple_limit_nominal"));
    CHECK(limits.contains("couple_limit_difference"));
    CHECK(doc["warnings"].size() >= 1);
    bool info = false;
    for (const auto& c : doc["checks"])
      if (c["name"] == "couple-limit-disclosure") info = (c["status"] == "info");
    CHECK(info);
  }
  fs::remove(out);
}

TEST_CASE("integrals csv table") {
  const fs::path out = temp_file("integrals.csv");
  REQUIRE(run_cli("integrals --R 2 --k 0 --a 0.5 --format csv --out " + out.string()) == 0);
  const auto lines = split(slurp(out), '\n');
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] ==
        "a,T1,T2a,T2a_closed,Gamma_a,Gamma_a_closed,V1,V1_closed,V2,V2_closed,W1,W2,E");
  CHECK(split(lines[1], ',').size() == 13);
  fs::remove(out);
}

TEST_CASE("ellipticity report") {
  const fs::path out = temp_file("ellipticity.json");
  REQUIRE(run_cli("ellipticity --R 2 --k 0 --out " + out.string()) == 0);
  const json doc = json::parse(slurp(out));
  CHECK(doc["results"]["min_margin"].get<double>() < 0.0);
  CHECK(doc["results"]["k_threshold"].get<double>() > 0.0);
  REQUIRE(doc["results"]["table"].is_array());
  fs::remove(out);

  const fs::path out2 = temp_file("ellipticity2.json");
  REQUIRE(run_cli("ellipticity --R 1.5 --k 100 --out " + out2.string()) == 0);
  const json doc2 = json::parse(slurp(out2));
  CHECK(doc2["results"]["min_margin"].get<double>() > 0.0);
  fs::remove(out2);
}

TEST_CASE("config file: precedence flags > config > defaults") {
  const fs::path conf = temp_file("conf.txt");
  {
    std::ofstream f(conf);
    f << "# comment\nR = 1.6\nk = 2.5\ngrid=40\n";
  }
  const fs::path out = temp_file("conf_out.json");
  REQUIRE(run_cli("verify --config " + conf.string() + " --k 1 --out " + out.string()) == 0);
  const json doc = json::parse(slurp(out));
  CHECK(doc["config"]["R"].get<double>() == doctest::Approx(1.6));  // from file
  CHECK(doc["config"]["k"].get<double>() == doctest::Approx(1.0));  // flag wins
  CHECK(doc["config"]["grid"].get<int>() == 40);

  {
    std::ofstream f(conf);
    f << "bogus_key = 1\n";
  }
  CHECK(run_cli("verify --config " + conf.string()) == 2);
  fs::remove(conf);
  fs::remove(out);
}

TEST_CASE("load_config_file and parse_a_sequence directly") {
  lens::cli::RunConfig cfg;
  std::string err;
  CHECK_FALSE(lens::cli::load_config_file("/nonexistent/conf", cfg, err));
  CHECK_FALSE(err.empty());

  const auto seq = lens::cli::parse_a_sequence("0.4:3");
  REQUIRE(seq.size() == 3);
  CHECK(seq[0] == doctest::Approx(0.4));
  CHECK(seq[2] == doctest::Approx(0.1));
  CHECK_THROWS_AS(lens::cli::parse_a_sequence("0.4"), std::invalid_argument);
  CHECK_THROWS_AS(lens::cli::parse_a_sequence("x:3"), std::invalid_argument);
  CHECK_THROWS_AS(lens::cli::parse_a_sequence("0.4:0"), std::invalid_argument);
  CHECK_THROWS_AS(lens::cli::parse_a_sequence("2.5:3"), std::invalid_argument);
}
