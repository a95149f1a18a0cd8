#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "ppdipm/problem.hpp"
#include "ppdipm/solver.hpp"
#include "report.hpp"

using namespace ppdipm;

namespace {

SolveReport sample_report() {
  SolverConfig cfg;
  return solve(registry_get("convex_qp_2"), VectorXd::Zero(2), cfg);
}

}  // namespace

TEST_CASE("csv header is the exact required column list") {
  CHECK(std::string(cli::kCsvHeader) ==
        "problem,n,m,status,outer_iters,inner_iters_total,time_per_iter_ms,"
        "grad_phi_inf,phi_final");
}

TEST_CASE("csv_row field count and leading fields") {
  SolveReport r = sample_report();
  std::string row = cli::csv_row(r);
  int commas = 0;
  for (char c : row)
    if (c == ',') ++commas;
  CHECK(commas == 8);
  CHECK(row.rfind("convex_qp_2,2,1,converged,", 0) == 0);
}

TEST_CASE("csv round-trips phi and gradient at full precision") {
  SolveReport r = sample_report();
  std::string row = cli::csv_row(r);
  // split on commas
  std::vector<std::string> fields;
  std::stringstream ss(row);
  std::string f;
  while (std::getline(ss, f, ',')) fields.push_back(f);
  REQUIRE(fields.size() == 9);
  CHECK(std::stod(fields[7]) == r.grad_phi_inf);
  CHECK(std::stod(fields[8]) == r.phi_final);
  CHECK(std::stoi(fields[4]) == r.outer_iterations);
  CHECK(std::stol(fields[5]) == r.total_inner_iterations);
}

TEST_CASE("emit_reports writes the header exactly once") {
  SolveReport r = sample_report();
  std::ostringstream os;
  cli::emit_reports({r, r}, "csv", os, 0);
  std::string out = os.str();
  size_t first = out.find("problem,n,m");
  REQUIRE(first != std::string::npos);
  CHECK(out.find("problem,n,m", first + 1) == std::string::npos);
  // one line per report plus the header
  int lines = 0;
  for (char c : out)
    if (c == '\n') ++lines;
  CHECK(lines == 3);
}

TEST_CASE("json mirrors the solve report bit-exactly") {
  SolveReport r = sample_report();
  auto j = nlohmann::json::parse(cli::to_json(r, 0));
  CHECK(j["problem"] == r.problem);
  CHECK(j["n"] == r.n);
  CHECK(j["m"] == r.m);
  CHECK(j["status"] == "converged");
  CHECK(j["phi_final"].get<double>() == r.phi_final);
  CHECK(j["grad_phi_2"].get<double>() == r.grad_phi_2);
  CHECK(j["grad_phi_inf"].get<double>() == r.grad_phi_inf);
  CHECK(j["outer_iterations"] == r.outer_iterations);
  CHECK(j["total_inner_iterations"].get<long>() == r.total_inner_iterations);
  auto xs = j["x_final"].get<std::vector<double>>();
  REQUIRE(static_cast<int>(xs.size()) == r.n);
  for (int i = 0; i < r.n; ++i) CHECK(xs[i] == r.x_final[i]);
  CHECK_FALSE(j.contains("iterations"));
}

TEST_CASE("json carries the iteration trace only when verbose") {
  SolveReport r = sample_report();
  auto j = nlohmann::json::parse(cli::to_json(r, 1));
  REQUIRE(j.contains("iterations"));
  REQUIRE(j["iterations"].size() == r.iterations.size());
  auto first = j["iterations"][0];
  CHECK(first["phi"].get<double>() == r.iterations[0].phi);
  CHECK(first["alpha"].get<double>() == r.iterations[0].alpha);
  CHECK(first["inner_iterations"] == r.iterations[0].inner_iterations);
}

TEST_CASE("human table has one row per report") {
  SolveReport r = sample_report();
  std::string t = cli::human_table({r, r, r});
  int lines = 0;
  for (char c : t)
    if (c == '\n') ++lines;
  CHECK(lines == 4);  // header plus three rows
  CHECK(t.find("convex_qp_2") != std::string::npos);
}
