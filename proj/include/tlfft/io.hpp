#pragma once

// JSON and CSV forms of transforms, frequency sets, lattices, coefficient maps
// and experiment records.

#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tlfft/freqsets.hpp"
#include "tlfft/lattice.hpp"
#include "tlfft/oracle.hpp"
#include "tlfft/tfft.hpp"
#include "tlfft/transforms.hpp"

namespace tlfft {

using json = nlohmann::json;

/// Shortest round-trip decimal form; "inf" / "-inf" / "nan" for non-finite values.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---- transforms

inline json to_json(const Transform1D& t) { return {{"kind", std::string(to_string(t.kind()))}, {"c", t.c()}}; }

inline json to_json(const TransformD& t) {
  json a = json::array();
  for (const auto& c : t.components()) a.push_back(to_json(c));
  return a;
}

inline Transform1D transform1d_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw InputError("transform JSON needs a \"kind\"");
  return Transform1D(parse_transform_kind(j.at("kind").get<std::string>()), j.value("c", 1.0));
}

/// Accepts an array of 1-D transforms, or a single object replicated d times.
inline TransformD transform_from_json(const json& j, std::size_t d = 0) {
  if (j.is_array()) {
    std::vector<Transform1D> v;
    for (const auto& e : j) v.push_back(transform1d_from_json(e));
    if (d != 0 && v.size() != d) throw InputError("transform array length does not match d");
    return TransformD(std::move(v));
  }
  if (d == 0) throw InputError("single transform object needs an explicit dimension");
  return TransformD(std::vector<Transform1D>(d, transform1d_from_json(j)));
}

// ---- frequency sets

inline json param_json(double v) { return std::isinf(v) ? json("inf") : json(v); }

inline double param_from_json(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw InputError("expected a number or \"inf\"");
  }
  return j.get<double>();
}

inline json to_json(const SetDescriptor& d) {
  json j{{"kind", std::string(to_string(d.kind))}, {"N", d.N}};
  if (d.kind == SetKind::hc) j["beta"] = d.param;
  if (d.kind == SetKind::lp) j["p"] = param_json(d.param);
  return j;
}

inline SetDescriptor descriptor_from_json(const json& j) {
  SetDescriptor d;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "hc") {
    d.kind = SetKind::hc;
    d.param = param_from_json(j.at("beta"));
  } else if (kind == "lp") {
    d.kind = SetKind::lp;
    d.param = param_from_json(j.at("p"));
  } else if (kind == "grid") {
    d.kind = SetKind::grid;
  } else if (kind == "custom") {
    d.kind = SetKind::custom;
  } else {
    throw InputError("unknown set kind '" + kind + "'");
  }
  d.N = j.value("N", 0.0);
  return d;
}

inline json to_json(const FrequencySet& I, bool with_freqs = true) {
  json j{{"dim", I.dim()}};
  if (I.descriptor()) j["descriptor"] = to_json(*I.descriptor());
  if (!I.materialized()) {
    j["cardinality"] = I.cardinality();
  } else if (with_freqs) {
    json rows = json::array();
    for (std::size_t i = 0; i < I.size(); ++i) rows.push_back(std::vector<Freq>(I[i].begin(), I[i].end()));
    j["freqs"] = std::move(rows);
  }
  return j;
}

/// Reads explicit freqs when present, otherwise regenerates from the descriptor.
inline FrequencySet frequency_set_from_json(const json& j) {
  const auto d = j.at("dim").get<std::size_t>();
  std::optional<SetDescriptor> desc;
  if (j.contains("descriptor")) desc = descriptor_from_json(j.at("descriptor"));
  if (j.contains("freqs")) {
    std::vector<Freq> flat;
    for (const auto& row : j.at("freqs")) {
      if (row.size() != d) throw InputError("frequency row length does not match dim");
      for (const auto& v : row) flat.push_back(v.get<Freq>());
    }
    return FrequencySet(d, std::move(flat), desc);
  }
  if (!desc) throw InputError("frequency set JSON needs freqs or a descriptor");
  switch (desc->kind) {
    case SetKind::hc: return hyperbolic_cross(d, desc->N, desc->param);
    case SetKind::lp: return lp_ball(d, desc->N, desc->param);
    case SetKind::grid: return full_grid(d, static_cast<std::int64_t>(desc->N));
    case SetKind::custom: break;
  }
  throw InputError("custom frequency set needs explicit freqs");
}

inline void write_csv(std::ostream& os, const FrequencySet& I) {
  for (std::size_t j = 0; j < I.dim(); ++j) os << (j ? "," : "") << "k" << j + 1;
  os << "\n";
  for (std::size_t i = 0; i < I.size(); ++i) {
    for (std::size_t j = 0; j < I.dim(); ++j) os << (j ? "," : "") << I[i][j];
    os << "\n";
  }
}

// ---- lattices

inline json to_json(const Rank1Lattice& lat) { return {{"z", lat.z()}, {"M", lat.size()}}; }

inline Rank1Lattice lattice_from_json(const json& j) {
  return Rank1Lattice(j.at("z").get<std::vector<std::int64_t>>(), j.at("M").get<std::int64_t>());
}

inline json to_json(const MultipleRank1Lattice& m) {
  json comps = json::array();
  for (const auto& c : m.components) comps.push_back(to_json(c));
  json assign = json::object();
  for (std::size_t i = 0; i < m.assignment.size(); ++i) assign[std::to_string(i)] = m.assignment[i];
  return {{"components", std::move(comps)}, {"assignment", std::move(assign)}};
}

inline MultipleRank1Lattice multiple_lattice_from_json(const json& j) {
  MultipleRank1Lattice m;
  for (const auto& c : j.at("components")) m.components.push_back(lattice_from_json(c));
  const auto& a = j.at("assignment");
  m.assignment.resize(a.size());
  for (const auto& [key, val] : a.items()) {
    const auto idx = std::stoul(key);
    if (idx >= m.assignment.size()) throw InputError("assignment index out of range");
    m.assignment[idx] = val.get<std::vector<std::uint32_t>>();
  }
  return m;
}

// ---- coefficients

inline Provenance parse_provenance(const std::string& s) {
  if (s == "exact") return Provenance::exact;
  if (s == "quadrature") return Provenance::quadrature;
  if (s == "reconstructed") return Provenance::reconstructed;
  throw InputError("unknown provenance '" + s + "'");
}

/// Values as [re, im] pairs; doubles are written with round-trip precision.
inline json to_json(const CoefficientMap& c) {
  json vals = json::array();
  for (const auto& v : c.values) vals.push_back({v.real(), v.imag()});
  return {{"I", to_json(c.freqs)}, {"values", std::move(vals)}, {"provenance", std::string(to_string(c.provenance))}};
}

inline CoefficientMap coefficients_from_json(const json& j) {
  auto I = frequency_set_from_json(j.at("I"));
  std::vector<Complex> v;
  for (const auto& p : j.at("values")) v.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return CoefficientMap(std::move(I), std::move(v), parse_provenance(j.value("provenance", "reconstructed")));
}

inline void write_csv(std::ostream& os, const CoefficientMap& c) {
  for (std::size_t j = 0; j < c.freqs.dim(); ++j) os << "k" << j + 1 << ",";
  os << "re,im\n";
  for (std::size_t i = 0; i < c.size(); ++i) {
    for (std::size_t j = 0; j < c.freqs.dim(); ++j) os << c.freqs[i][j] << ",";
    os << format_double(c.values[i].real()) << "," << format_double(c.values[i].imag()) << "\n";
  }
}

inline void write_csv(std::ostream& os, const std::vector<OracleRow>& rows) {
  os << "k,exact,quadrature,abs_diff\n";
  for (const auto& r : rows)
    os << r.k << "," << format_double(r.exact) << "," << format_double(r.quadrature) << ","
       << format_double(r.abs_diff) << "\n";
}

// ---- experiment records

inline const char* record_csv_header() {
  return "descriptor,d,N,beta_or_p,card_I,M,mode,abs_err,rel_err,seconds,"
         "experiment,transform,lattice,verified,seed,error";
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

inline void write_csv_row(std::ostream& os, const ExperimentRecord& r) {
  os << csv_field(r.descriptor) << "," << r.d << "," << format_double(r.N) << "," << format_double(r.beta_or_p) << ","
     << r.card_I << "," << r.M << "," << r.mode << "," << format_double(r.abs_err) << ","
     << (r.rel_defined ? format_double(r.rel_err) : std::string()) << "," << format_double(r.seconds) << ","
     << csv_field(r.experiment) << "," << csv_field(r.transform) << "," << r.lattice << ","
     << (r.verified ? "true" : "false") << "," << r.seed << "," << csv_field(r.error) << "\n";
}

inline void write_csv(std::ostream& os, const std::vector<ExperimentRecord>& rows) {
  os << record_csv_header() << "\n";
  for (const auto& r : rows) write_csv_row(os, r);
}

inline json to_json(const ExperimentRecord& r) {
  json j{{"experiment", r.experiment}, {"transform", r.transform}, {"descriptor", r.descriptor},
         {"d", r.d},                   {"N", r.N},                   {"beta_or_p", param_json(r.beta_or_p)},
         {"card_I", r.card_I},         {"M", r.M},                   {"lattice", r.lattice},
         {"mode", r.mode},             {"abs_err", r.abs_err},       {"verified", r.verified},
         {"seconds", r.seconds},       {"seed", r.seed}};
  j["rel_err"] = r.rel_defined ? json(r.rel_err) : json(nullptr);
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

}  // namespace tlfft
