#include "lpvss/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lpvss {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw StructuralError("model file " + origin + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& origin) {
  auto it = j.find(key);
  if (it == j.end()) fail(origin, std::string("missing field '") + key + "'");
  return *it;
}

double number(const json& j, const std::string& origin, const std::string& where) {
  if (!j.is_number()) fail(origin, where + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(origin, where + ": non-finite number");
  return v;
}

int integer(const json& j, const std::string& origin, const std::string& where) {
  if (!j.is_number_integer()) fail(origin, where + ": expected an integer");
  return j.get<int>();
}

Matrix matrix(const json& j, const std::string& origin, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(origin, where + ": expected a non-empty array of rows");
  const size_t rows = j.size();
  size_t cols = 0;
  Matrix m;
  for (size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.empty()) fail(origin, where + ": row " + std::to_string(r) + " is not a non-empty array");
    if (r == 0) {
      cols = row.size();
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      fail(origin, where + ": ragged rows");
    }
    for (size_t c = 0; c < cols; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          number(row[c], origin, where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return m;
}

Vector vector(const json& j, const std::string& origin, const std::string& where) {
  if (!j.is_array()) fail(origin, where + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (size_t i = 0; i < j.size(); ++i)
    v(static_cast<Eigen::Index>(i)) = number(j[i], origin, where + "[" + std::to_string(i) + "]");
  return v;
}

BasisFunction basis_function(const json& j, const std::string& origin, size_t index) {
  const std::string where = "basis[" + std::to_string(index) + "]";
  const std::string kind = field(j, "kind", origin).get<std::string>();
  const json params = j.contains("params") ? j["params"] : json::object();
  BasisFunction f = [&]() {
    if (kind == "identity")
      return BasisFunction::identity(integer(field(params, "component", origin), origin, where + ".component"));
    if (kind == "monomial") {
      const json& exps = field(params, "exponents", origin);
      if (!exps.is_array()) fail(origin, where + ".exponents: expected an array");
      std::vector<int> e;
      for (size_t k = 0; k < exps.size(); ++k)
        e.push_back(integer(exps[k], origin, where + ".exponents[" + std::to_string(k) + "]"));
      return BasisFunction::monomial(std::move(e));
    }
    if (kind == "constant")
      return BasisFunction::constant(number(field(params, "value", origin), origin, where + ".value"));
    fail(origin, where + ": unknown kind '" + kind + "'");
  }();
  if (params.contains("bound"))
    f.set_declared_bound(number(params["bound"], origin, where + ".bound"));
  return f;
}

AffineMatrixFunction matrix_function(const json& j, const std::string& origin, const char* name) {
  Matrix m0 = matrix(field(j, "M0", origin), origin, std::string(name) + ".M0");
  std::vector<AffineTerm> terms;
  if (j.contains("terms")) {
    const json& ts = j["terms"];
    if (!ts.is_array()) fail(origin, std::string(name) + ".terms: expected an array");
    for (size_t k = 0; k < ts.size(); ++k) {
      const std::string where = std::string(name) + ".terms[" + std::to_string(k) + "]";
      AffineTerm term;
      term.basis_index = integer(field(ts[k], "i", origin), origin, where + ".i");
      term.coeff = matrix(field(ts[k], "M", origin), origin, where + ".M");
      terms.push_back(std::move(term));
    }
  }
  return AffineMatrixFunction(std::move(m0), std::move(terms));
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json function_to_json(const AffineMatrixFunction& f) {
  json out;
  out["M0"] = matrix_to_json(f.offset());
  json terms = json::array();
  for (const AffineTerm& t : f.terms())
    terms.push_back({{"i", t.basis_index}, {"M", matrix_to_json(t.coeff)}});
  out["terms"] = std::move(terms);
  return out;
}

}  // namespace

LpvSsModel parse_model(const std::string& json_text, const std::string& origin) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(origin, std::string("JSON parse error: ") + e.what());
  }

  const json& dims_j = field(j, "dims", origin);
  Dims dims;
  dims.nx = integer(field(dims_j, "nx", origin), origin, "dims.nx");
  dims.nu = integer(field(dims_j, "nu", origin), origin, "dims.nu");
  dims.ny = integer(field(dims_j, "ny", origin), origin, "dims.ny");
  dims.np = integer(field(dims_j, "np", origin), origin, "dims.np");

  const json& basis_j = field(j, "basis", origin);
  if (!basis_j.is_array()) fail(origin, "basis: expected an array");
  std::vector<BasisFunction> basis;
  for (size_t i = 0; i < basis_j.size(); ++i) basis.push_back(basis_function(basis_j[i], origin, i));

  const json& noise_j = field(j, "noise", origin);
  NoiseSpec noise;
  noise.Q = matrix(field(noise_j, "Q", origin), origin, "noise.Q");
  noise.S = matrix(field(noise_j, "S", origin), origin, "noise.S");
  noise.R = matrix(field(noise_j, "R", origin), origin, "noise.R");

  const json& box_j = field(j, "scheduling_set", origin);
  SchedulingBox box;
  box.lo = vector(field(box_j, "min", origin), origin, "scheduling_set.min");
  box.hi = vector(field(box_j, "max", origin), origin, "scheduling_set.max");

  try {
    return LpvSsModel(dims, matrix_function(field(j, "A", origin), origin, "A"),
                      matrix_function(field(j, "B", origin), origin, "B"),
                      matrix_function(field(j, "C", origin), origin, "C"),
                      matrix_function(field(j, "D", origin), origin, "D"),
                      matrix_function(field(j, "G", origin), origin, "G"),
                      matrix_function(field(j, "H", origin), origin, "H"), std::move(noise),
                      std::move(basis), std::move(box));
  } catch (const StructuralError& e) {
    fail(origin, e.what());
  }
}

LpvSsModel load_model(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw StructuralError("model file " + path.string() + ": cannot open");
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_model(buf.str(), path.string());
}

std::string model_to_json(const LpvSsModel& model) {
  json j;
  j["dims"] = {{"nx", model.dims().nx},
               {"nu", model.dims().nu},
               {"ny", model.dims().ny},
               {"np", model.dims().np}};
  json basis = json::array();
  for (const BasisFunction& f : model.basis()) {
    json entry;
    switch (f.kind()) {
      case BasisFunction::Kind::Identity:
        entry = {{"kind", "identity"}, {"params", {{"component", f.component()}}}};
        break;
      case BasisFunction::Kind::Monomial:
        entry = {{"kind", "monomial"}, {"params", {{"exponents", f.exponents()}}}};
        break;
      case BasisFunction::Kind::Constant:
        entry = {{"kind", "constant"}, {"params", {{"value", f.value()}}}};
        break;
    }
    if (f.declared_bound()) entry["params"]["bound"] = *f.declared_bound();
    basis.push_back(std::move(entry));
  }
  j["basis"] = std::move(basis);
  j["A"] = function_to_json(model.a());
  j["B"] = function_to_json(model.b());
  j["C"] = function_to_json(model.c());
  j["D"] = function_to_json(model.d());
  j["G"] = function_to_json(model.g());
  j["H"] = function_to_json(model.h());
  j["noise"] = {{"Q", matrix_to_json(model.noise().Q)},
                {"S", matrix_to_json(model.noise().S)},
                {"R", matrix_to_json(model.noise().R)}};
  json lo = json::array(), hi = json::array();
  for (int k = 0; k < model.scheduling_set().dim(); ++k) {
    lo.push_back(model.scheduling_set().lo(k));
    hi.push_back(model.scheduling_set().hi(k));
  }
  j["scheduling_set"] = {{"min", std::move(lo)}, {"max", std::move(hi)}};
  return j.dump(2) + "\n";
}

void save_model(const LpvSsModel& model, const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw StructuralError("model file " + path.string() + ": cannot open for writing");
  f << model_to_json(model);
}

}  // namespace lpvss
