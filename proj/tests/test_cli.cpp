#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = rlasso::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const std::string kDiabetes = RLASSO_TEST_DATA_DIR "/diabetes.csv";

fs::path scratch() {
  const fs::path d = fs::temp_directory_path() / "rlasso_cli_test";
  fs::create_directories(d);
  return d;
}

bool single_line(const std::string& s) {
  return !s.empty() && s.find('\n') == s.size() - 1;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("fit writes a versioned JSON document") {
  const Result r = run({"fit", "--data", kDiabetes, "--response", "y", "--iters", "600", "--burnin",
                        "100", "--seed", "9", "--select", "fbp"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["config"]["seed"] == 9);
  CHECK(doc["config"]["lambda_mode"] == "hyperprior:0.001,0.001");
  CHECK(doc["coefficients"].size() == 10);
  CHECK(doc["coefficients"][2]["name"] == "bmi");
  CHECK(doc["lambda"].contains("median"));
  CHECK(doc["selection"].contains("support"));
}

TEST_CASE("fit lambda modes") {
  for (const std::string mode : {"fixed:2", "apriori", "mcem", "hyperprior:2,2"}) {
    CAPTURE(mode);
    const Result r = run({"fit", "--data", kDiabetes, "--response", "y", "--iters", "400",
                          "--burnin", "100", "--lambda-mode", mode, "--em-iters", "3", "--em-inner",
                          "100", "--sampler", "smdp"});
    CHECK(r.code == 0);
  }
}

TEST_CASE("fit is byte-for-byte reproducible") {
  const std::vector<std::string> args{"fit",   "--data",  kDiabetes, "--response", "y",
                                      "--iters", "500", "--burnin", "100"};
  CHECK(run(args).out == run(args).out);
}

TEST_CASE("exit codes and one-line diagnostics") {
  const auto bad_burn = run({"fit", "--data", kDiabetes, "--response", "y", "--lambda-mode",
                             "fixed:1", "--iters", "100", "--burnin", "1000"});
  CHECK(bad_burn.code == 2);
  CHECK(single_line(bad_burn.err));
  CHECK(run({"fit", "--data", kDiabetes, "--response", "y", "--lambda-mode", "wat"}).code == 2);
  CHECK(run({"fit", "--data", kDiabetes, "--response", "y", "--sampler", "gibbs"}).code == 2);
  CHECK(run({"fit", "--data", kDiabetes}).code == 2);
  CHECK(run({"simulate", "--scenario", "XXV", "--out", "x"}).code == 2);
  CHECK(run({"cv", "--data", kDiabetes, "--response", "y", "--folds", "1"}).code == 2);
  const auto missing = run({"cv", "--data", kDiabetes, "--response", "nope"});
  CHECK(missing.code == 3);
  CHECK(single_line(missing.err));
  CHECK(run({"fit", "--data", "/no/such.csv", "--response", "y"}).code == 3);

  const fs::path na = scratch() / "na.csv";
  std::ofstream(na) << "a,b,y\n1,2,3\n4,NA,6\n";
  const auto na_run = run({"fit", "--data", na.string(), "--response", "y"});
  CHECK(na_run.code == 3);
  CHECK(na_run.err.find("'b'") != std::string::npos);

  // A singular design reaches the SMDP kernel and fails numerically.
  const fs::path dup = scratch() / "dup.csv";
  {
    std::ofstream f(dup);
    f << "a,b,y\n";
    for (int i = 0; i < 20; ++i) f << i % 7 << "," << 2 * (i % 7) << "," << i << "\n";
  }
  CHECK(run({"fit", "--data", dup.string(), "--response", "y", "--sampler", "smdp",
             "--lambda-mode", "fixed:1", "--iters", "200", "--burnin", "10"})
            .code == 4);
}

TEST_CASE("simulate writes the replicate table and summary") {
  const fs::path prefix = scratch() / "sim";
  const Result r = run({"simulate", "--scenario", "I", "--reps", "2", "--methods", "rlasso",
                        "--seed", "3", "--out", prefix.string()});
  REQUIRE(r.code == 0);
  const std::string csv = slurp(prefix.string() + ".csv");
  std::istringstream lines(csv);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "replicate,method,mse,bar,model_size");
  int rows = 0;
  while (std::getline(lines, row)) ++rows;
  CHECK(rows == 2);
  const auto doc = nlohmann::json::parse(slurp(prefix.string() + ".json"));
  CHECK(doc["schema_version"] == 1);
  CHECK(doc["summary"][0]["method"] == "rlasso");
  CHECK(doc["summary"][0]["completed"] == 2);
  CHECK(doc["scenario"]["p"] == 20);
}

TEST_CASE("cv reports MSPE and model size") {
  const Result r = run({"cv", "--data", kDiabetes, "--response", "y", "--method", "ols",
                        "--repeats", "1", "--seed", "2"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["model_size"] == 10.0);
  CHECK(doc["fold_mse"].size() == 5);
  CHECK(doc["mspe"].get<double>() > 2000.0);
  CHECK(doc["mspe"].get<double>() < 4000.0);
}

TEST_CASE("ignored columns are dropped") {
  const Result r = run({"fit", "--data", kDiabetes, "--response", "y", "--ignore", "age,sex",
                        "--iters", "300", "--burnin", "100"});
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["p"] == 8);
  CHECK(doc["coefficients"][0]["name"] == "bmi");
  CHECK(run({"fit", "--data", kDiabetes, "--response", "y", "--ignore", "zzz"}).code == 3);
}

}
