#pragma once

// JSON (canonical, schema "synccert/v1") and CSV (flat projection) output.
// Non-finite doubles are written as the strings "Infinity", "-Infinity" and
// "NaN" so that every document re-parses to the value it was written from.

#include "synccert/certifier.hpp"
#include "synccert/dynamics.hpp"
#include "synccert/spectral.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace synccert {

using json = nlohmann::json;

inline constexpr const char* schema_version = "synccert/v1";

namespace detail {

inline json number(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  return x;
}

inline double number(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "NaN") return std::numeric_limits<double>::quiet_NaN();
    if (s == "Infinity") return std::numeric_limits<double>::infinity();
    if (s == "-Infinity") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("not a number: " + s);
  }
  return j.get<double>();
}

inline NormSource parse_source(const std::string& s) {
  if (s == "formula") return NormSource::formula;
  if (s == "exact") return NormSource::exact;
  if (s == "estimated") return NormSource::estimated;
  if (s == "user") return NormSource::user;
  throw std::invalid_argument("unknown norm source " + s);
}

// CSV fields never contain quotes in practice; quote the ones with commas.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_number(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace detail

inline json to_json(const Condition& c) {
  return {{"name", c.name}, {"lhs", detail::number(c.lhs)}, {"rhs", detail::number(c.rhs)},
          {"relation", c.relation}, {"pass", c.pass}};
}

inline Condition condition_from_json(const json& j) {
  return {j.at("name").get<std::string>(), detail::number(j.at("lhs")), detail::number(j.at("rhs")),
          j.at("relation").get<std::string>(), j.at("pass").get<bool>()};
}

inline json to_json(const SpectralEstimates& s) {
  return {{"norm_a", detail::number(s.norm_a)}, {"norm_l", detail::number(s.norm_l)},
          {"p", s.p},
          {"n", s.n},
          {"source", std::string(to_string(s.source))},
          {"confidence", s.confidence},
          {"converged", s.converged}};
}

inline SpectralEstimates estimates_from_json(const json& j) {
  SpectralEstimates s;
  s.norm_a = detail::number(j.at("norm_a"));
  s.norm_l = detail::number(j.at("norm_l"));
  s.p = j.at("p").get<double>();
  s.n = j.at("n").get<std::size_t>();
  s.source = detail::parse_source(j.at("source").get<std::string>());
  s.confidence = j.at("confidence").get<double>();
  s.converged = j.at("converged").get<bool>();
  return s;
}

inline json to_json(const CertificationResult& r) {
  json trace = json::array();
  for (const auto& c : r.trace) trace.push_back(to_json(c));
  json j = {{"schema", schema_version},
            {"kind", "certification"},
            {"verdict", std::string(to_string(r.verdict))},
            {"method", std::string(to_string(r.method))},
            {"n", r.n},
            {"p", r.p},
            {"confidence", r.confidence},
            {"norms", to_json(r.norms)},
            {"reason", r.reason},
            {"sweeps", r.sweeps},
            {"trace", trace}};
  if (r.table) {
    json grid = json::array(), bounds = json::array();
    for (double g : r.table->grid) grid.push_back(detail::number(g));
    for (double b : r.table->bounds) bounds.push_back(detail::number(b));
    j["table"] = {{"grid", grid}, {"bounds", bounds}};
  }
  return j;
}

inline CertificationResult certification_from_json(const json& j) {
  if (j.at("schema").get<std::string>() != schema_version) throw std::invalid_argument("unsupported schema");
  CertificationResult r;
  const auto verdict = j.at("verdict").get<std::string>();
  if (verdict != "certified" && verdict != "not_certified") throw std::invalid_argument("bad verdict " + verdict);
  r.verdict = verdict == "certified" ? Verdict::certified : Verdict::not_certified;
  const auto method = j.at("method").get<std::string>();
  if (method != "theorem" && method != "refine") throw std::invalid_argument("bad method " + method);
  r.method = method == "theorem" ? CertMethod::theorem : CertMethod::refine;
  r.n = j.at("n").get<std::size_t>();
  r.p = j.at("p").get<double>();
  r.confidence = j.at("confidence").get<double>();
  r.norms = estimates_from_json(j.at("norms"));
  r.reason = j.at("reason").get<std::string>();
  r.sweeps = j.at("sweeps").get<std::size_t>();
  for (const auto& c : j.at("trace")) r.trace.push_back(condition_from_json(c));
  if (j.contains("table")) {
    TableSnapshot t;
    for (const auto& g : j["table"].at("grid")) t.grid.push_back(detail::number(g));
    for (const auto& b : j["table"].at("bounds")) t.bounds.push_back(detail::number(b));
    r.table = std::move(t);
  }
  return r;
}

inline json to_json(const ThresholdResult& t) {
  json probes = json::array();
  for (const auto& pr : t.probes) probes.push_back({{"p", pr.p}, {"certified", pr.certified}});
  return {{"schema", schema_version}, {"kind", "threshold"}, {"n", t.n},         {"p_star", t.p_star},
          {"p_below", t.p_below},     {"monotone", t.monotone}, {"probes", probes}};
}

inline json to_json(const TrialRecord& t) {
  json suite = json::array();
  for (const auto& c : t.suite) suite.push_back(to_json(c));
  return {{"seed", t.seed},
          {"converged", t.converged},
          {"rho1", t.rho1},
          {"residual", t.residual},
          {"time", t.time},
          {"stable", t.stable},
          {"hessian_second_eigenvalue", t.hessian_second_eigenvalue},
          {"energy_monotone", t.energy_monotone},
          {"half_circle_ok", t.half_circle_ok},
          {"suite_ran", t.suite_ran},
          {"suite_pass", t.suite_pass},
          {"suite", suite}};
}

inline TrialRecord trial_from_json(const json& j) {
  TrialRecord t;
  t.seed = j.at("seed").get<std::uint64_t>();
  t.converged = j.at("converged").get<bool>();
  t.rho1 = j.at("rho1").get<double>();
  t.residual = j.at("residual").get<double>();
  t.time = j.at("time").get<double>();
  t.stable = j.at("stable").get<bool>();
  t.hessian_second_eigenvalue = j.at("hessian_second_eigenvalue").get<double>();
  t.energy_monotone = j.at("energy_monotone").get<bool>();
  t.half_circle_ok = j.at("half_circle_ok").get<bool>();
  t.suite_ran = j.at("suite_ran").get<bool>();
  t.suite_pass = j.at("suite_pass").get<bool>();
  for (const auto& c : j.at("suite")) t.suite.push_back(condition_from_json(c));
  return t;
}

// CSV projections --------------------------------------------------------------

inline void write_csv(const CertificationResult& r, std::ostream& out) {
  out << "n,p,verdict,method,confidence,condition,lhs,relation,rhs,pass\n";
  for (const auto& c : r.trace)
    out << r.n << ',' << detail::csv_number(r.p) << ',' << to_string(r.verdict) << ',' << to_string(r.method) << ','
        << detail::csv_number(r.confidence) << ',' << detail::csv_field(c.name) << ',' << detail::csv_number(c.lhs)
        << ',' << detail::csv_field(c.relation) << ',' << detail::csv_number(c.rhs) << ',' << (c.pass ? 1 : 0)
        << '\n';
}

inline void write_csv_header_trials(std::ostream& out) {
  out << "seed,converged,rho1,residual,time,stable,hessian_second_eigenvalue,energy_monotone,half_circle_ok,"
         "suite_ran,suite_pass\n";
}

inline void write_csv_row(const TrialRecord& t, std::ostream& out) {
  out << t.seed << ',' << t.converged << ',' << detail::csv_number(t.rho1) << ',' << detail::csv_number(t.residual)
      << ',' << detail::csv_number(t.time) << ',' << t.stable << ',' << detail::csv_number(t.hessian_second_eigenvalue)
      << ',' << t.energy_monotone << ',' << t.half_circle_ok << ',' << t.suite_ran << ',' << t.suite_pass << '\n';
}

}  // namespace synccert
