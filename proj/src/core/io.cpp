#include "jacobi/io.hpp"

#include <fstream>
#include <sstream>

namespace jacobi::io {

namespace {

json pair_of(cplx v) { return json::array({v.real(), v.imag()}); }

cplx complex_field(const json& rec, const char* key, std::size_t idx) {
  if (!rec.contains(key)) return cplx(0.0);
  const json& v = rec.at(key);
  if (v.is_number()) return cplx(v.get<double>());
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ParseError("deviations[" + std::to_string(idx) + "]." + key + ": expected [re, im]");
  return {v[0].get<double>(), v[1].get<double>()};
}

std::vector<double> real_list(const json& j, const char* key) {
  std::vector<double> out;
  if (!j.contains(key)) return out;
  const json& arr = j.at(key);
  if (!arr.is_array()) throw ParseError(std::string("field '") + key + "': expected array");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number())
      throw ParseError(std::string(key) + "[" + std::to_string(i) + "]: expected number");
    out.push_back(arr[i].get<double>());
  }
  return out;
}

}  // namespace

json to_json(const ComplexJacobiSpec& spec) {
  json devs = json::array();
  for (const auto& d : spec.deviations())
    devs.push_back({{"n", d.n}, {"da", pair_of(d.da)}, {"db", pair_of(d.db)}, {"dc", pair_of(d.dc)}});
  return {{"deviations", devs}};
}

json to_json(const RealJacobiSpec& spec) { return {{"a", spec.a_list()}, {"b", spec.b_list()}}; }

ComplexJacobiSpec complex_spec_from_json(const json& j) {
  if (j.contains("a") || j.contains("b")) return real_spec_from_json(j).to_complex();
  if (!j.contains("deviations") || !j.at("deviations").is_array())
    throw ParseError("spec: missing array field 'deviations'");
  std::vector<Deviation> devs;
  const json& arr = j.at("deviations");
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const json& rec = arr[i];
    if (!rec.is_object() || !rec.contains("n") || !rec.at("n").is_number_integer())
      throw ParseError("deviations[" + std::to_string(i) + "].n: expected integer");
    Deviation d;
    d.n = rec.at("n").get<int>();
    d.da = complex_field(rec, "da", i);
    d.db = complex_field(rec, "db", i);
    d.dc = complex_field(rec, "dc", i);
    devs.push_back(d);
  }
  try {
    return ComplexJacobiSpec(std::move(devs));
  } catch (const DomainError& e) {
    throw ParseError(std::string("spec: ") + e.what());
  }
}

RealJacobiSpec real_spec_from_json(const json& j) {
  if (!j.is_object() || (!j.contains("a") && !j.contains("b")))
    throw ParseError("real spec: expected fields 'a' and 'b'");
  try {
    return RealJacobiSpec(real_list(j, "a"), real_list(j, "b"));
  } catch (const DomainError& e) {
    throw ParseError(std::string("real spec: ") + e.what());
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

ComplexJacobiSpec load_complex_spec(const std::string& path) {
  try {
    return complex_spec_from_json(read_json_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

RealJacobiSpec load_real_spec(const std::string& path) {
  json j = read_json_file(path);
  if (j.contains("deviations")) {
    ComplexJacobiSpec c = complex_spec_from_json(j);
    std::vector<double> a, b;
    for (int n = 0; n < c.support(); ++n) {
      if (c.a(n) != c.c(n) || c.a(n).imag() != 0 || c.b(n).imag() != 0)
        throw ParseError(path + ": spec is not real symmetric at n = " + std::to_string(n));
      a.push_back(c.a(n).real());
      b.push_back(c.b(n).real());
    }
    return RealJacobiSpec(a, b);
  }
  try {
    return real_spec_from_json(j);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_spec(const std::string& path, const ComplexJacobiSpec& spec) {
  write_text_file(path, to_json(spec).dump(2) + "\n");
}

void save_spec(const std::string& path, const RealJacobiSpec& spec) {
  write_text_file(path, to_json(spec).dump(2) + "\n");
}

}  // namespace jacobi::io
