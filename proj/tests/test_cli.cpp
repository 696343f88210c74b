#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace {

const std::string kCli = DDMAG_CLI_PATH;

int run(const std::string& args, const std::string& out_file,
        const std::string& err_file = "/tmp/ddmag_err.txt") {
  const std::string cmd = kCli + " " + args + " > " + out_file + " 2> " + err_file;
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

Csv parse_csv(const std::string& text) {
  Csv csv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (csv.columns.empty()) {
      csv.columns = cells;
    } else {
      std::vector<double> row;
      for (const auto& c : cells) row.push_back(std::stod(c));
      csv.rows.push_back(row);
    }
  }
  return csv;
}

}  // namespace

TEST_CASE("weight subcommand emits the matched-frequency unity row") {
  const int code =
      run("weight --scheme re --k 1 --n 2 --omega 1000 --grid 0.25:4.0:16",
          "/tmp/ddmag_w.csv");
  REQUIRE(code == 0);
  const std::string text = slurp("/tmp/ddmag_w.csv");
  CHECK(text.find("# config = {") != std::string::npos);
  const Csv csv = parse_csv(text);
  REQUIRE(csv.columns.size() == 3);
  CHECK(csv.columns[2] == "W");
  bool unity = false;
  for (const auto& row : csv.rows) {
    // omega_over_Omega = 0.5 is the optimal band for k = 1
    if (std::abs(row[1] - 0.5) < 1e-12 && std::abs(row[2] - 1.0) < 1e-9) unity = true;
  }
  CHECK(unity);
}

TEST_CASE("invalid configuration exits with code 2 and a JSON error") {
  const int code = run("weight --scheme nope --omega 10", "/tmp/ddmag_bad.txt",
                       "/tmp/ddmag_bad_err.txt");
  CHECK(code == 2);
  const auto err = nlohmann::json::parse(slurp("/tmp/ddmag_bad_err.txt"));
  CHECK(err.contains("error"));

  CHECK(run("weight --scheme re --n 1", "/tmp/o", "/tmp/e") == 2);  // no omega
  CHECK(run("decay --scheme re --omega 100 --tauc -1", "/tmp/o", "/tmp/e") == 2);
  CHECK(run("bogus", "/tmp/o", "/tmp/e") == 2);
}

TEST_CASE("noiseless decay is an all-ones envelope") {
  REQUIRE(run("decay --scheme re --k 1 --omega 1000 --sigma 0 --nmax 5",
              "/tmp/ddmag_d.csv") == 0);
  const Csv csv = parse_csv(slurp("/tmp/ddmag_d.csv"));
  REQUIRE(csv.rows.size() == 5);
  for (const auto& row : csv.rows) CHECK(row[1] == 1.0);
}

TEST_CASE("montecarlo output is byte-identical across thread counts") {
  const std::string args =
      "montecarlo --scheme re --k 1 --n 2 --omega 1000 --sigma 200 --tauc 0.01 "
      "--traj 400 --spp 128 --seed 99";
  REQUIRE(run(args + " --threads 1", "/tmp/ddmag_t1.csv") == 0);
  REQUIRE(run(args + " --threads 7", "/tmp/ddmag_t7.csv") == 0);
  const std::string a = slurp("/tmp/ddmag_t1.csv");
  const std::string b = slurp("/tmp/ddmag_t7.csv");
  CHECK(a == b);
  CHECK(!a.empty());
}

TEST_CASE("json format embeds the configuration") {
  REQUIRE(run("passbands --k 4 --omega 1000 --pmax 2 --format json",
              "/tmp/ddmag_p.json") == 0);
  const auto doc = nlohmann::json::parse(slurp("/tmp/ddmag_p.json"));
  REQUIRE(doc.contains("config"));
  CHECK(doc["config"]["command"] == "passbands");
  REQUIRE(doc.contains("rows"));
  CHECK(doc["rows"].size() == 6);
  bool main_band = false;
  for (const auto& row : doc["rows"]) {
    if (row["p"] == 0 && std::abs(row["height"].get<double>() - 1.0) < 1e-12) {
      main_band = true;
    }
  }
  CHECK(main_band);
}

TEST_CASE("units flag switches the frequency convention") {
  REQUIRE(run("weight --scheme constant --omega 6283.185307179586 --units rads "
              "--grid 0.5:1.5:3",
              "/tmp/ddmag_u.csv") == 0);
  const std::string text = slurp("/tmp/ddmag_u.csv");
  CHECK(text.find("\"omega\":6283.185307179586") != std::string::npos);
}

TEST_CASE("sensitivity scan emits the documented columns") {
  REQUIRE(run("sensitivity --scheme pdd --period 2e-5 --axis time --lo 2e-5 "
              "--hi 5e-4 --count 20 --t2 500e-6 --c 0.03 --phi 1.5707963267948966",
              "/tmp/ddmag_s.csv") == 0);
  const Csv csv = parse_csv(slurp("/tmp/ddmag_s.csv"));
  REQUIRE(csv.columns.size() == 7);
  CHECK(csv.columns[0] == "axis_value");
  CHECK(csv.columns[5] == "eta_eff_T_sqrtHz");
  CHECK(csv.columns[6] == "matched_freq_Hz");
  REQUIRE(!csv.rows.empty());
  for (const auto& row : csv.rows) {
    CHECK(row[1] > 0.0);   // eta_ideal
    CHECK(row[4] <= 1.0);  // D
    CHECK(row[5] >= row[1]);
  }
}
