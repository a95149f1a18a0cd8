#include "report.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace ppdipm::cli {

namespace {

double time_per_iter_ms(const SolveReport& r) {
  return r.wall_time_s * 1000.0 / std::max(1, r.outer_iterations);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

std::string csv_row(const SolveReport& r) {
  std::ostringstream os;
  os << r.problem << ',' << r.n << ',' << r.m << ',' << to_string(r.status)
     << ',' << r.outer_iterations << ',' << r.total_inner_iterations << ','
     << fmt(time_per_iter_ms(r)) << ',' << fmt(r.grad_phi_inf) << ','
     << fmt(r.phi_final);
  return os.str();
}

std::string to_json(const SolveReport& r, int verbosity) {
  nlohmann::json j;
  j["problem"] = r.problem;
  j["n"] = r.n;
  j["m"] = r.m;
  j["status"] = to_string(r.status);
  j["x_final"] = std::vector<double>(r.x_final.begin(), r.x_final.end());
  j["phi_final"] = r.phi_final;
  j["grad_phi_2"] = r.grad_phi_2;
  j["grad_phi_inf"] = r.grad_phi_inf;
  j["outer_iterations"] = r.outer_iterations;
  j["total_inner_iterations"] = r.total_inner_iterations;
  j["wall_time_s"] = r.wall_time_s;
  if (verbosity > 0) {
    nlohmann::json iters = nlohmann::json::array();
    for (const auto& it : r.iterations) {
      iters.push_back({{"phi", it.phi},
                       {"grad_phi_2", it.grad_phi_2},
                       {"grad_phi_inf", it.grad_phi_inf},
                       {"alpha", it.alpha},
                       {"inner_iterations", it.inner_iterations},
                       {"used_exact", it.used_exact},
                       {"polish_accepted", it.polish_accepted},
                       {"watchdog_standard_mode", it.watchdog_standard_mode}});
    }
    j["iterations"] = iters;
  }
  return j.dump(2);
}

std::string human_table(const std::vector<SolveReport>& reports) {
  std::ostringstream os;
  os << std::left << std::setw(22) << "problem" << std::right << std::setw(4)
     << "n" << std::setw(4) << "m" << std::setw(22) << "status" << std::setw(8)
     << "iters" << std::setw(8) << "inner" << std::setw(14) << "ms/iter"
     << std::setw(13) << "|grad|inf" << std::setw(16) << "phi\n";
  for (const auto& r : reports) {
    os << std::left << std::setw(22) << r.problem << std::right << std::setw(4)
       << r.n << std::setw(4) << r.m << std::setw(22) << to_string(r.status)
       << std::setw(8) << r.outer_iterations << std::setw(8)
       << r.total_inner_iterations << std::setw(14) << std::scientific
       << std::setprecision(2) << time_per_iter_ms(r) << std::setw(13)
       << r.grad_phi_inf << std::setw(16) << std::setprecision(6)
       << r.phi_final << '\n'
       << std::defaultfloat;
  }
  return os.str();
}

void emit_reports(const std::vector<SolveReport>& reports,
                  const std::string& format, std::ostream& sink,
                  int verbosity) {
  if (format == "csv") {
    sink << kCsvHeader << '\n';
    for (const auto& r : reports) sink << csv_row(r) << '\n';
  } else if (format == "json") {
    sink << "[\n";
    for (size_t i = 0; i < reports.size(); ++i) {
      sink << to_json(reports[i], verbosity);
      if (i + 1 < reports.size()) sink << ',';
      sink << '\n';
    }
    sink << "]\n";
  } else {
    sink << human_table(reports);
  }
}

}  // namespace ppdipm::cli
