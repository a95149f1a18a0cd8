#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ppdipm/solver.hpp"

namespace ppdipm::cli {

inline constexpr const char* kCsvHeader =
    "problem,n,m,status,outer_iters,inner_iters_total,time_per_iter_ms,"
    "grad_phi_inf,phi_final";

std::string csv_row(const SolveReport& r);
std::string to_json(const SolveReport& r, int verbosity);
std::string human_table(const std::vector<SolveReport>& reports);

void emit_reports(const std::vector<SolveReport>& reports,
                  const std::string& format, std::ostream& sink,
                  int verbosity);

}  // namespace ppdipm::cli
