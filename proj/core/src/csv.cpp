#include "cbi/csv.hpp"

#include "cbi/error.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace cbi {

std::string format_double(double x) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string& text) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end) throw Error(ErrorCode::ParseError, "not a number: '" + text + "'");
  return x;
}

namespace {

void write_tensor_rows(std::ostream& os, double t, const MomentTensor& value, const MomentTensor* se) {
  const auto set = SymmetricIndexSet::get(value.order(), value.dim());
  const std::string ts = format_double(t);
  for (std::size_t pos = 0; pos < set->size(); ++pos) {
    os << ts << ',' << value.order() << ',' << format_index(set->index(pos)) << ',' << format_double(value.at(pos));
    if (se) os << ',' << format_double(se->at(pos));
    os << '\n';
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_moment_csv(std::ostream& os, const MomentTrajectory& traj, const std::vector<int>& nodes) {
  os << "t,order,index,value\n";
  std::vector<int> which = nodes;
  if (which.empty())
    for (int m = 0; m <= traj.grid().intervals(); ++m) which.push_back(m);
  for (int m : which)
    for (int k = 1; k <= traj.max_order(); ++k) write_tensor_rows(os, traj.grid().time(m), traj.at(m, k), nullptr);
}

void write_ensemble_csv(std::ostream& os, const std::vector<EmpiricalMoments>& est, bool central) {
  os << "t,order,index,estimate,stderr\n";
  for (const EmpiricalMoments& e : est) {
    const auto& val = central ? e.central : e.raw;
    const auto& se = central ? e.central_se : e.raw_se;
    for (std::size_t k = 1; k < val.size(); ++k) write_tensor_rows(os, e.time, val[k], &se[k]);
  }
}

std::vector<CsvRow> read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorCode::ParseError, "empty CSV");
  bool with_se = false;
  if (line == "t,order,index,estimate,stderr") with_se = true;
  else if (line != "t,order,index,value") throw Error(ErrorCode::ParseError, "unknown CSV header '" + line + "'");

  std::vector<CsvRow> rows;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != (with_se ? 5u : 4u))
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": wrong number of fields");
    try {
      CsvRow r;
      r.t = parse_double(f[0]);
      r.order = std::stoi(f[1]);
      r.index = parse_index(f[2]);
      if (static_cast<int>(r.index.size()) != r.order) throw Error(ErrorCode::ParseError, "index length != order");
      r.value = parse_double(f[3]);
      if (with_se) r.stderr_value = parse_double(f[4]);
      rows.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

}  // namespace cbi
