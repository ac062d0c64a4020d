#pragma once

#include "cbi/estimate.hpp"
#include "cbi/moments.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cbi {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);
/// Strict inverse of format_double (whole field must be consumed).
double parse_double(const std::string& text);

struct CsvRow {
  double t = 0.0;
  int order = 0;
  std::vector<int> index;  // 0-based, sorted
  double value = 0.0;
  std::optional<double> stderr_value;
};

/// "t,order,index,value", orders 1..max_order at every node listed in
/// `nodes` (all nodes when empty); index rendered 1-based as "i1.i2...".
void write_moment_csv(std::ostream& os, const MomentTrajectory& traj, const std::vector<int>& nodes = {});

/// "t,order,index,estimate,stderr", orders 1..q; `central` picks the tensors.
void write_ensemble_csv(std::ostream& os, const std::vector<EmpiricalMoments>& est, bool central);

/// Reads either format back. Throws Error(ParseError) with the line number.
std::vector<CsvRow> read_csv(std::istream& is);

}  // namespace cbi
