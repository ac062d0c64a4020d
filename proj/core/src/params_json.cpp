#include "cbi/error.hpp"
#include "cbi/params.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace cbi {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& pointer, const std::string& what) {
  throw Error(ErrorCode::ParseError, (pointer.empty() ? std::string("/") : pointer) + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& ptr) {
  if (!obj.is_object()) fail(ptr, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(ptr + "/" + key, "missing field");
  return *it;
}

double number(const json& v, const std::string& ptr) {
  if (!v.is_number()) fail(ptr, "expected a number");
  return v.get<double>();
}

std::vector<double> numbers(const json& v, const std::string& ptr) {
  if (!v.is_array()) fail(ptr, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], ptr + "/" + std::to_string(i)));
  return out;
}

std::vector<RawAtom> atoms(const json& m, const std::string& ptr) {
  const json& list = field(m, "atoms", ptr);
  const std::string lptr = ptr + "/atoms";
  if (!list.is_array()) fail(lptr, "expected an array");
  std::vector<RawAtom> out;
  for (std::size_t a = 0; a < list.size(); ++a) {
    const std::string aptr = lptr + "/" + std::to_string(a);
    RawAtom atom;
    atom.z = numbers(field(list[a], "z", aptr), aptr + "/z");
    atom.weight = number(field(list[a], "w", aptr), aptr + "/w");
    out.push_back(std::move(atom));
  }
  return out;
}

json measure_json(const AtomicMeasure& m) {
  json list = json::array();
  for (const Atom& a : m.atoms()) {
    std::vector<double> z(a.z.data(), a.z.data() + a.z.size());
    list.push_back({{"z", z}, {"w", a.weight}});
  }
  return json{{"atoms", list}};
}

}  // namespace

ParamsCandidate parse_params_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("/: ") + e.what());
  }
  ParamsCandidate p;
  const json& d = field(doc, "d", "");
  if (!d.is_number_integer()) fail("/d", "expected an integer");
  p.d = d.get<int>();
  p.c = numbers(field(doc, "c", ""), "/c");
  p.beta = numbers(field(doc, "beta", ""), "/beta");
  const json& B = field(doc, "B", "");
  if (!B.is_array()) fail("/B", "expected an array of rows");
  for (std::size_t i = 0; i < B.size(); ++i) p.B.push_back(numbers(B[i], "/B/" + std::to_string(i)));
  p.nu = atoms(field(doc, "nu", ""), "/nu");
  const json& mu = field(doc, "mu", "");
  if (!mu.is_array()) fail("/mu", "expected an array of measures");
  for (std::size_t j = 0; j < mu.size(); ++j) p.mu.push_back(atoms(mu[j], "/mu/" + std::to_string(j)));
  return p;
}

ParamsCandidate load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open parameter file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_params_json(ss.str());
}

std::string params_to_json(const AdmissibleParams& p) {
  const int d = p.d();
  json doc;
  doc["d"] = d;
  doc["c"] = std::vector<double>(p.c().data(), p.c().data() + d);
  doc["beta"] = std::vector<double>(p.beta().data(), p.beta().data() + d);
  json B = json::array();
  for (int i = 0; i < d; ++i) {
    std::vector<double> row;
    for (int j = 0; j < d; ++j) row.push_back(p.B()(i, j));
    B.push_back(row);
  }
  doc["B"] = B;
  doc["nu"] = measure_json(p.nu());
  json mu = json::array();
  for (const auto& m : p.mu()) mu.push_back(measure_json(m));
  doc["mu"] = mu;
  return doc.dump(2);
}

}  // namespace cbi
