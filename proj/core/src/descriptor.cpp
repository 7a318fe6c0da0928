#include "ratecert/descriptor.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace ratecert {

namespace {

using nlohmann::json;

AlgorithmFamily parse_family(const std::string& s) {
  if (s == "gradient_descent" || s == "gd") return AlgorithmFamily::GradientDescent;
  if (s == "projected_gradient" || s == "pg") return AlgorithmFamily::ProjectedGradient;
  if (s == "nesterov") return AlgorithmFamily::Nesterov;
  if (s == "admm_gradient_form" || s == "admm-g") return AlgorithmFamily::AdmmGradientForm;
  if (s == "admm_prox_form" || s == "admm-p") return AlgorithmFamily::AdmmProxForm;
  if (s == "custom") return AlgorithmFamily::Custom;
  throw std::invalid_argument("descriptor: unknown family \"" + s + "\"");
}

const char* family_name(AlgorithmFamily f) {
  switch (f) {
    case AlgorithmFamily::GradientDescent: return "gradient_descent";
    case AlgorithmFamily::ProjectedGradient: return "projected_gradient";
    case AlgorithmFamily::Nesterov: return "nesterov";
    case AlgorithmFamily::AdmmGradientForm: return "admm_gradient_form";
    case AlgorithmFamily::AdmmProxForm: return "admm_prox_form";
    case AlgorithmFamily::Custom: return "custom";
  }
  return "custom";
}

OracleKind parse_kind(const std::string& s) {
  if (s == "sector") return OracleKind::Sector;
  if (s == "slope_restricted") return OracleKind::SlopeRestricted;
  if (s == "smooth_strongly_convex") return OracleKind::SmoothStronglyConvex;
  throw std::invalid_argument("descriptor: unknown oracle kind \"" + s + "\"");
}

const char* kind_name(OracleKind k) {
  switch (k) {
    case OracleKind::Sector: return "sector";
    case OracleKind::SlopeRestricted: return "slope_restricted";
    case OracleKind::SmoothStronglyConvex: return "smooth_strongly_convex";
  }
  return "sector";
}

double parse_upper(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return kInf;
    throw std::invalid_argument("descriptor: L must be a number or \"inf\"");
  }
  if (!j.is_number()) throw std::invalid_argument("descriptor: L must be a number or \"inf\"");
  return j.get<double>();
}

Eigen::MatrixXd parse_matrix(const json& j, int rows, int cols, const char* name) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows * cols)
    throw std::invalid_argument(std::string("descriptor: custom ") + name +
                                " must be a flat row-major array of size rows*cols");
  Eigen::MatrixXd M(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int c = 0; c < cols; ++c) {
      const auto& e = j[i * cols + c];
      if (!e.is_number())
        throw std::invalid_argument(std::string("descriptor: custom ") + name +
                                    " has a non-numeric entry");
      M(i, c) = e.get<double>();
    }
  return M;
}

json matrix_to_json(const Eigen::MatrixXd& M) {
  json out = json::array();
  for (int i = 0; i < M.rows(); ++i)
    for (int c = 0; c < M.cols(); ++c) out.push_back(M(i, c));
  return out;
}

}  // namespace

AlgorithmDescriptor parse_descriptor(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("descriptor: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("descriptor: top level must be an object");
  if (!j.contains("family") || !j["family"].is_string())
    throw std::invalid_argument("descriptor: missing \"family\" string");

  AlgorithmDescriptor desc;
  desc.spec.family = parse_family(j["family"].get<std::string>());

  if (desc.spec.family == AlgorithmFamily::Custom) {
    if (!j.contains("custom") || !j["custom"].is_object())
      throw std::invalid_argument("descriptor: custom family requires a \"custom\" object");
    const json& c = j["custom"];
    if (!c.contains("n") || !c.contains("p"))
      throw std::invalid_argument("descriptor: custom object requires integer n and p");
    const int n = c["n"].get<int>();
    const int p = c["p"].get<int>();
    if (n <= 0 || p <= 0) throw std::invalid_argument("descriptor: custom n, p must be positive");
    desc.spec = AlgorithmSpec::custom(
        parse_matrix(c.value("A", json::array()), n, n, "A"),
        parse_matrix(c.value("B", json::array()), n, p, "B"),
        parse_matrix(c.value("C", json::array()), p, n, "C"),
        parse_matrix(c.value("D", json::array()), p, p, "D"));
  } else {
    if (!j.contains("eta") || !j["eta"].is_number())
      throw std::invalid_argument("descriptor: missing \"eta\" number");
    desc.spec.eta = j["eta"].get<double>();
    if (j.contains("beta")) {
      if (!j["beta"].is_number()) throw std::invalid_argument("descriptor: beta must be a number");
      desc.spec.beta = j["beta"].get<double>();
    }
    if (desc.spec.family == AlgorithmFamily::Nesterov && !desc.spec.beta)
      throw std::invalid_argument("descriptor: nesterov requires \"beta\"");
  }

  if (j.contains("oracles")) {
    if (!j["oracles"].is_array()) throw std::invalid_argument("descriptor: oracles must be an array");
    for (const auto& o : j["oracles"]) {
      if (!o.is_object() || !o.contains("kind") || !o.contains("m") || !o.contains("L"))
        throw std::invalid_argument("descriptor: each oracle needs kind, m, L");
      OracleClass oc;
      oc.kind = parse_kind(o["kind"].get<std::string>());
      if (!o["m"].is_number()) throw std::invalid_argument("descriptor: oracle m must be a number");
      oc.m = o["m"].get<double>();
      oc.L = parse_upper(o["L"]);
      oc.validate();
      desc.oracles.push_back(oc);
    }
  }
  return desc;
}

std::string serialize_descriptor(const AlgorithmDescriptor& desc) {
  json j;
  j["family"] = family_name(desc.spec.family);
  if (desc.spec.family == AlgorithmFamily::Custom) {
    json c;
    c["n"] = static_cast<int>(desc.spec.custom_A.rows());
    c["p"] = static_cast<int>(desc.spec.custom_C.rows());
    c["A"] = matrix_to_json(desc.spec.custom_A);
    c["B"] = matrix_to_json(desc.spec.custom_B);
    c["C"] = matrix_to_json(desc.spec.custom_C);
    c["D"] = matrix_to_json(desc.spec.custom_D);
    j["custom"] = std::move(c);
  } else {
    j["eta"] = desc.spec.eta;
    if (desc.spec.beta) j["beta"] = *desc.spec.beta;
  }
  json oracles = json::array();
  for (const auto& oc : desc.oracles) {
    json o;
    o["kind"] = kind_name(oc.kind);
    o["m"] = oc.m;
    if (std::isfinite(oc.L))
      o["L"] = oc.L;
    else
      o["L"] = "inf";
    oracles.push_back(std::move(o));
  }
  j["oracles"] = std::move(oracles);
  return j.dump(2);
}

AlgorithmModel build_from_descriptor(const AlgorithmDescriptor& desc) {
  AlgorithmModel model = build_algorithm(desc.spec);
  if (!desc.oracles.empty()) {
    if (static_cast<int>(desc.oracles.size()) != model.p)
      throw std::invalid_argument("descriptor: oracle count does not match the family");
    model = model.with_oracles(desc.oracles);
  }
  return model;
}

}  // namespace ratecert
