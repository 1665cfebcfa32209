#pragma once

// JSON interchange: algebras, idempotent sets, check reports, Peirce data and
// canonical forms. Complex scalars are [re, im] pairs, prime residues plain
// integers.

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "nonassoc/peirce.hpp"

namespace nonassoc {

using json = nlohmann::json;

inline json to_json(const FieldDescriptor& fd) {
  if (fd.is_complex()) return {{"kind", "complex"}};
  return {{"kind", "prime"}, {"p", fd.p()}};
}

inline FieldDescriptor field_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "complex") return FieldDescriptor::complex();
    if (kind == "prime") return FieldDescriptor::prime(j.at("p").get<std::uint32_t>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("field: ") + e.what());
  }
  throw Error(ErrorCode::ParseError, "unknown field kind");
}

inline json scalar_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }
inline json scalar_to_json(const Fp& z) { return z.value(); }

template <FieldScalar F>
F scalar_from_json(const json& j, const FieldDescriptor& fd) {
  try {
    if constexpr (FieldOps<F>::exact) {
      return Fp(j.get<std::int64_t>(), fd.p());
    } else {
      if (j.is_number()) return {j.get<double>(), 0.0};
      if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::ParseError, "complex scalar must be [re, im]");
      return {j[0].get<double>(), j[1].get<double>()};
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("scalar: ") + e.what());
  }
}

template <FieldScalar F>
json vec_to_json(const Vec<F>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(scalar_to_json(x));
  return a;
}

template <FieldScalar F>
Vec<F> vec_from_json(const json& j, const FieldDescriptor& fd) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "vector must be an array");
  Vec<F> v;
  for (const auto& x : j) v.push_back(scalar_from_json<F>(x, fd));
  return v;
}

template <FieldScalar F>
json matrix_to_json(const Matrix<F>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(scalar_to_json(m(i, j)));
    rows.push_back(r);
  }
  return rows;
}

template <FieldScalar F>
json to_json(const Algebra<F>& a) {
  const std::size_t n = a.dim();
  json g = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json gi = json::array();
    for (std::size_t j = 0; j < n; ++j) {
      json gij = json::array();
      for (std::size_t k = 0; k < n; ++k) gij.push_back(scalar_to_json(a.gamma(i, j, k)));
      gi.push_back(gij);
    }
    g.push_back(gi);
  }
  json out = {{"field", to_json(a.field())}, {"dim", n}, {"gamma", g}};
  if (a.tag()) out["model"] = {{"name", a.tag()->name}, {"n", a.tag()->n}};
  return out;
}

using AnyAlgebra = std::variant<Algebra<Complex>, Algebra<Fp>>;

template <FieldScalar F>
Algebra<F> algebra_from_json_as(const json& j, const FieldDescriptor& fd) {
  std::size_t n = 0;
  try {
    n = j.at("dim").get<std::size_t>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("dim: ") + e.what());
  }
  const json& g = j.contains("gamma") ? j["gamma"] : json();
  if (!g.is_array() || g.size() != n) throw Error(ErrorCode::ParseError, "gamma must be an n x n x n array");
  std::vector<F> flat;
  flat.reserve(n * n * n);
  for (const auto& gi : g) {
    if (!gi.is_array() || gi.size() != n) throw Error(ErrorCode::ParseError, "gamma must be an n x n x n array");
    for (const auto& gij : gi) {
      if (!gij.is_array() || gij.size() != n) throw Error(ErrorCode::ParseError, "gamma must be an n x n x n array");
      for (const auto& x : gij) flat.push_back(scalar_from_json<F>(x, fd));
    }
  }
  Algebra<F> a(fd, n, std::move(flat));
  if (j.contains("model")) {
    try {
      a.with_tag({j["model"].at("name").get<std::string>(), j["model"].value("n", 0)});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, std::string("model: ") + e.what());
    }
  }
  return a;
}

/// Rejects non-commutative tensors (NonCommutative) and malformed input (ParseError).
inline AnyAlgebra algebra_from_json(const json& j) {
  if (!j.is_object() || !j.contains("field")) throw Error(ErrorCode::ParseError, "algebra must have a field");
  const FieldDescriptor fd = field_from_json(j["field"]);
  if (fd.is_complex()) return algebra_from_json_as<Complex>(j, fd);
  return algebra_from_json_as<Fp>(j, fd);
}

template <FieldScalar F>
json to_json(const IdempotentSet<F>& s) {
  json el = json::array();
  for (const auto& e : s.elements) el.push_back(vec_to_json(e));
  return {{"method", to_string(s.method)},
          {"complete", s.complete},
          {"elements", el},
          {"residuals", s.residuals},
          {"singular_jacobian", s.singular_jacobian}};
}

inline EnumerationMethod method_from_string(const std::string& s) {
  if (s == "closed-form") return EnumerationMethod::ClosedForm;
  if (s == "newton") return EnumerationMethod::Newton;
  if (s == "brute") return EnumerationMethod::BruteForce;
  throw Error(ErrorCode::ParseError, "unknown method " + s);
}

template <FieldScalar F>
IdempotentSet<F> idempotents_from_json(const json& j, const FieldDescriptor& fd) {
  IdempotentSet<F> s;
  try {
    s.method = method_from_string(j.at("method").get<std::string>());
    s.complete = j.at("complete").get<bool>();
    s.singular_jacobian = j.value("singular_jacobian", false);
    for (const auto& e : j.at("elements")) s.elements.push_back(vec_from_json<F>(e, fd));
    if (j.contains("residuals")) s.residuals = j["residuals"].get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("idempotent set: ") + e.what());
  }
  s.residuals.resize(s.elements.size(), 0.0);
  return s;
}

/// One entry of a verification report.
struct CheckResult {
  std::string check;
  bool pass = false;
  double residual = 0.0;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::string detail;
};

inline json to_json(const CheckResult& r) {
  return {{"check", r.check}, {"pass", r.pass},   {"residual", r.residual},
          {"samples", r.samples}, {"seed", r.seed}, {"detail", r.detail}};
}

template <FieldScalar F>
json to_json(const PeirceData<F>& pd) {
  return {{"idempotent", vec_to_json(pd.idempotent)},
          {"spectrum", vec_to_json(pd.spectrum)},
          {"eigenbasis", matrix_to_json(pd.eigenbasis)},
          {"semisimple", pd.semisimple},
          {"split", pd.split}};
}

inline json to_json(const CanonicalForm& cf) {
  return {{"c", vec_to_json(cf.c)},
          {"w1", vec_to_json(cf.w1)},
          {"mu", scalar_to_json(cf.mu)},
          {"basis", matrix_to_json(cf.basis)},
          {"tensor", to_json(cf.tensor)},
          {"pattern_residual", cf.pattern_residual}};
}

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

inline void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Usage, "cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace nonassoc
