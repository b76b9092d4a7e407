#include "satsel/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace satsel {

Matrix read_matrix_csv(std::istream& in, bool skip_header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (first && skip_header) {
      first = false;
      continue;
    }
    first = false;
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      std::size_t next = line.find(',', pos);
      if (next == std::string::npos) next = line.size();
      const std::string cell = line.substr(pos, next - pos);
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw IoError("bad numeric cell '" + cell + "' in matrix CSV");
      }
      pos = next + 1;
      if (next == line.size()) break;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError("ragged matrix CSV: row " + std::to_string(rows.size() + 1) +
                    " has " + std::to_string(row.size()) + " cells");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError("empty matrix CSV");
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < out.rows(); ++i) {
    for (Index j = 0; j < out.cols(); ++j) {
      out(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return out;
}

Matrix read_matrix_csv_file(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix CSV '" + path + "'");
  return read_matrix_csv(in, skip_header);
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

void write_matrix_csv(std::ostream& out, const Matrix& matrix) {
  for (Index i = 0; i < matrix.rows(); ++i) {
    for (Index j = 0; j < matrix.cols(); ++j) {
      if (j) out << ',';
      out << format_double(matrix(i, j));
    }
    out << '\n';
  }
}

void write_matrix_csv_file(const std::string& path, const Matrix& matrix) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write matrix CSV '" + path + "'");
  write_matrix_csv(out, matrix);
}

nlohmann::json trace_to_json(const SelectionTrace& trace, double phi) {
  nlohmann::json j;
  j["indices"] = trace.subset.indices();
  j["step_values"] = trace.step_values;
  j["phi"] = phi;
  if (!trace.pool.empty()) j["pool"] = trace.pool;
  return j;
}

void write_multi_run_profile_csv(std::ostream& out,
                                 const std::vector<ProfilePoint>& profile) {
  out << "run_index,cumulative_seconds,best_value,best_efficiency_if_known\n";
  for (const auto& point : profile) {
    out << point.run_index << ',' << format_double(point.cumulative_s) << ','
        << format_double(point.best_value) << ','
        << (point.best_eff ? format_double(*point.best_eff) : std::string{}) << '\n';
  }
}

nlohmann::json report_to_json(const EfficiencyReport& report) {
  nlohmann::json j;
  j["phi"] = report.phi;
  if (report.phi_opt) j["phi_opt"] = *report.phi_opt;
  j["phi_star_s"] = report.phi_star_s;
  if (report.eff_exact) j["eff_exact"] = *report.eff_exact;
  j["eff_lower"] = report.eff_lower;
  return j;
}

}  // namespace satsel
