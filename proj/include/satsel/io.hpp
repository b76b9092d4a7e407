#ifndef SATSEL_IO_HPP
#define SATSEL_IO_HPP

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <string>

#include "satsel/evaluation.hpp"
#include "satsel/strategies.hpp"

namespace satsel {

/// Headerless CSV, one regressor per line, decimal floats. `skip_header`
/// drops the first line.
Matrix read_matrix_csv(std::istream& in, bool skip_header = false);
Matrix read_matrix_csv_file(const std::string& path, bool skip_header = false);
void write_matrix_csv(std::ostream& out, const Matrix& matrix);
void write_matrix_csv_file(const std::string& path, const Matrix& matrix);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

/// Keys: indices, step_values, phi; pool added only for pre-selected
/// runs. Deterministic field order.
nlohmann::json trace_to_json(const SelectionTrace& trace, double phi);

/// Keys exactly phi, phi_opt, phi_star_s, eff_exact, eff_lower; absent
/// optionals are omitted.
nlohmann::json report_to_json(const EfficiencyReport& report);

/// Multi-run profile CSV: run_index,cumulative_seconds,best_value,
/// best_efficiency_if_known (last column empty when unknown).
void write_multi_run_profile_csv(std::ostream& out,
                                 const std::vector<ProfilePoint>& profile);

}  // namespace satsel

#endif
