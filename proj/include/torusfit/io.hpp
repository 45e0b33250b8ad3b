#ifndef TORUSFIT_IO_HPP
#define TORUSFIT_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "torusfit/gof.hpp"
#include "torusfit/model.hpp"
#include "torusfit/simstudy.hpp"

namespace torusfit {

// Contingency layout: header "x2\x1,0,..,m1-1"; then m2 rows labelled
// m2-1 down to 0, each with m1 counts. m1 = m2 = 0 infers the shape.
CountTable read_count_table(std::istream& in, int m1 = 0, int m2 = 0);
CountTable parse_count_table(const std::filesystem::path& path, int m1 = 0, int m2 = 0);
void write_count_table(std::ostream& out, const CountTable& table);

struct ObservationTally {
  CountTable table;
  long calm_dropped = 0;
};

// Two columns (x1, x2) of compass labels or indices 0..15; rows holding
// "calm" are dropped and counted. An "x1,x2" header line is optional.
ObservationTally read_observations(std::istream& in);
ObservationTally parse_observations(const std::filesystem::path& path);

// Long format "k,l,value", row-major, 12 significant digits.
void emit_heatmap(std::ostream& out, const Eigen::MatrixXd& values);
void emit_heatmap(const std::filesystem::path& path, const Eigen::MatrixXd& values);
Eigen::MatrixXd read_heatmap(std::istream& in);

// 12 significant digits.
std::string format_number(double v);

nlohmann::json to_json(const FitResult& fit);
nlohmann::json to_json(const GofReport& report);
nlohmann::json to_json(const FittedParams& params);

// Header n,parameter,truth,mean,sd,mean_abs_error,value,count. Continuous
// parameters fill the summary columns; discrete tallies fill value,count.
void write_simulation_csv(std::ostream& out, const std::vector<SimulationRow>& rows);

}  // namespace torusfit

#endif  // TORUSFIT_IO_HPP
