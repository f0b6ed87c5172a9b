#pragma once

// Curve records in, congruence reports out (JSON and plain text).

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "oldcong/congruence.hpp"
#include "oldcong/curves.hpp"
#include "oldcong/error.hpp"
#include "oldcong/oldspace.hpp"

namespace oldcong {

using nlohmann::json;
using nlohmann::ordered_json;

namespace detail {

inline const json& require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw input_error(std::string(key) + ": required field is missing");
  return doc.at(key);
}

inline i64 as_i64(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw input_error(field + ": expected an integer");
  if (v.is_number_unsigned() && v.get<u64>() > static_cast<u64>(std::numeric_limits<i64>::max()))
    throw input_error(field + ": integer out of range");
  return v.get<i64>();
}

inline u64 as_positive(const json& v, const std::string& field) {
  const i64 x = as_i64(v, field);
  if (x <= 0) throw input_error(field + ": expected a positive integer");
  return static_cast<u64>(x);
}

constexpr u64 kJsonSafeInteger = u64{1} << 53;

template <class J>
J json_integer(const Integer& v) {
  if (abs(v) < Integer(std::to_string(kJsonSafeInteger))) return J(v.get_si());
  return J(v.get_str());
}

template <class J>
J json_integer(u64 v) {
  if (v < kJsonSafeInteger) return J(v);
  return J(std::to_string(v));
}

inline Integer integer_from_json(const json& v, const std::string& field) {
  if (v.is_number_integer()) return v.is_number_unsigned() ? Integer(std::to_string(v.get<u64>())) : Integer(v.get<long>());
  if (v.is_string()) {
    Integer x;
    if (x.set_str(v.get<std::string>(), 10) != 0) throw input_error(field + ": not a decimal integer");
    return x;
  }
  throw input_error(field + ": expected an integer or a decimal string");
}

inline u64 u64_from_json(const json& v, const std::string& field) {
  const Integer x = integer_from_json(v, field);
  if (x < 0 || !x.fits_ulong_p()) throw input_error(field + ": out of range");
  return x.get_ui();
}

}  // namespace detail

/// Parses and validates one curve document. Unknown keys are ignored and
/// listed in `warnings` when given.
inline CurveRecord parse_curve(const std::string& text, std::vector<std::string>* warnings = nullptr) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw input_error(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw input_error("curve document must be a JSON object");

  static const std::set<std::string> known{"label", "level", "ainvs", "modular_degree", "tamagawa", "torsion_order"};
  std::vector<std::string> unknown;
  for (const auto& [k, v] : doc.items())
    if (!known.count(k)) unknown.push_back(k);
  if (!unknown.empty() && warnings) {
    std::string w = "ignoring unknown keys:";
    for (const auto& k : unknown) w += " " + k;
    warnings->push_back(w);
  }

  CurveRecord c;
  if (doc.contains("label")) {
    if (!doc["label"].is_string()) throw input_error("label: expected a string");
    c.label = doc["label"].get<std::string>();
  }
  c.level = Level(detail::as_positive(detail::require(doc, "level"), "level"));

  const json& ainvs = detail::require(doc, "ainvs");
  if (!ainvs.is_array() || ainvs.size() != 5) throw input_error("ainvs: expected an array of 5 integers");
  for (std::size_t i = 0; i < 5; ++i) c.ainvs[i] = detail::as_i64(ainvs[i], "ainvs[" + std::to_string(i) + "]");

  if (doc.contains("modular_degree")) c.modular_degree = detail::as_positive(doc["modular_degree"], "modular_degree");
  if (doc.contains("torsion_order")) c.torsion_order = detail::as_positive(doc["torsion_order"], "torsion_order");
  if (doc.contains("tamagawa")) {
    const json& t = doc["tamagawa"];
    if (!t.is_object()) throw input_error("tamagawa: expected an object mapping primes to integers");
    std::map<u64, u64> tam;
    for (const auto& [k, v] : t.items()) {
      u64 p = 0;
      try {
        std::size_t used = 0;
        p = std::stoull(k, &used);
        if (used != k.size()) throw std::invalid_argument(k);
      } catch (const std::exception&) {
        throw input_error("tamagawa: key '" + k + "' is not an integer");
      }
      if (!is_prime(p)) throw input_error("tamagawa: key " + k + " is not prime");
      tam[p] = detail::as_positive(v, "tamagawa[" + k + "]");
    }
    c.tamagawa = std::move(tam);
  }
  validate_curve(c);
  return c;
}

inline CurveRecord load_curve(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot read " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_curve(text, warnings);
  } catch (const input_error& e) {
    throw input_error(path.string() + ": " + e.what());
  }
}

/// JSON form of a report. Integers of magnitude 2^53 or more are strings.
inline ordered_json report_to_json(const CongruenceReport& r) {
  ordered_json j;
  j["level"] = r.level.value();
  if (!r.label.empty()) j["label"] = r.label;
  j["sturm_bound"] = r.sturm_bound;
  j["method"] = to_string(r.method);
  j["candidates"] = ordered_json::array();
  for (const auto& c : r.candidates) {
    ordered_json e;
    e["p"] = detail::json_integer<ordered_json>(c.p);
    e["provenance"] = ordered_json::array();
    for (auto p : c.provenance) e["provenance"].push_back(to_string(p));
    j["candidates"].push_back(e);
  }
  j["congruence_primes"] = ordered_json::array();
  for (u64 p : r.congruence_primes) j["congruence_primes"].push_back(detail::json_integer<ordered_json>(p));
  j["witnesses"] = ordered_json::object();
  for (const auto& [p, w] : r.witnesses) {
    ordered_json arr = ordered_json::array();
    for (u64 x : w) arr.push_back(detail::json_integer<ordered_json>(x));
    j["witnesses"][std::to_string(p)] = arr;
  }
  if (r.congruence_exponent) j["congruence_exponent"] = detail::json_integer<ordered_json>(*r.congruence_exponent);
  if (r.conjecture1) {
    j["conjecture1"] = ordered_json::array();
    for (const auto& v : *r.conjecture1) {
      ordered_json e;
      e["ell"] = v.ell;
      e["verdict"] = v.consistent ? "consistent" : "counterexample";
      e["reason"] = v.reason;
      j["conjecture1"].push_back(e);
    }
  }
  j["oldspace_saturation_index"] = detail::json_integer<ordered_json>(r.oldspace_saturation_index);
  j["notes"] = r.notes;
  return j;
}

/// Inverse of report_to_json, with schema checks.
inline CongruenceReport report_from_json(const json& j) {
  if (!j.is_object()) throw input_error("report must be a JSON object");
  CongruenceReport r;
  r.level = Level(detail::as_positive(detail::require(j, "level"), "level"));
  if (j.contains("label")) r.label = j["label"].get<std::string>();
  r.sturm_bound = static_cast<u64>(detail::as_i64(detail::require(j, "sturm_bound"), "sturm_bound"));
  const json& method = detail::require(j, "method");
  if (!method.is_string()) throw input_error("method: expected a string");
  try {
    r.method = parse_method(method.get<std::string>());
  } catch (const usage_error& e) {
    throw input_error(std::string("method: ") + e.what());
  }
  for (const auto& c : detail::require(j, "candidates")) {
    Candidate cand{detail::u64_from_json(detail::require(c, "p"), "candidates.p"), {}};
    for (const auto& p : detail::require(c, "provenance")) cand.provenance.push_back(parse_provenance(p.get<std::string>()));
    r.candidates.push_back(std::move(cand));
  }
  for (const auto& p : detail::require(j, "congruence_primes"))
    r.congruence_primes.push_back(detail::u64_from_json(p, "congruence_primes"));
  for (const auto& [k, arr] : detail::require(j, "witnesses").items()) {
    std::vector<u64> w;
    for (const auto& x : arr) w.push_back(detail::u64_from_json(x, "witnesses"));
    r.witnesses[std::stoull(k)] = std::move(w);
  }
  if (j.contains("congruence_exponent"))
    r.congruence_exponent = detail::integer_from_json(j["congruence_exponent"], "congruence_exponent");
  if (j.contains("conjecture1")) {
    std::vector<Conjecture1Verdict> verdicts;
    for (const auto& v : j["conjecture1"]) {
      const auto verdict = detail::require(v, "verdict").get<std::string>();
      if (verdict != "consistent" && verdict != "counterexample")
        throw input_error("conjecture1.verdict: unknown value '" + verdict + "'");
      verdicts.push_back({detail::u64_from_json(detail::require(v, "ell"), "conjecture1.ell"), verdict == "consistent",
                          v.value("reason", "")});
    }
    r.conjecture1 = std::move(verdicts);
  }
  if (j.contains("oldspace_saturation_index"))
    r.oldspace_saturation_index = detail::integer_from_json(j["oldspace_saturation_index"], "oldspace_saturation_index");
  if (j.contains("notes")) r.notes = j["notes"].get<std::vector<std::string>>();
  return r;
}

/// "v(f) = 1*[11,d=1] + 2*[11,d=2] (mod p)" with the nonzero coefficients only.
inline std::string format_witness(u64 p, const std::vector<u64>& witness, const OldspaceMatrix& m) {
  std::ostringstream os;
  os << "v(f) == ";
  bool first = true;
  for (std::size_t i = 0; i < witness.size(); ++i) {
    if (witness[i] == 0) continue;
    os << (first ? "" : " + ") << witness[i] << "*row" << (i + 1);
    if (i < m.provenance.size())
      os << "[beta_" << m.provenance[i].degeneracy << " from level " << m.provenance[i].source_level << "]";
    first = false;
  }
  if (first) os << "0";
  os << " (mod " << p << ")";
  return os.str();
}

inline std::string format_report(const CongruenceReport& r, const OldspaceMatrix& m) {
  std::ostringstream os;
  os << "level " << r.level.value();
  if (!r.label.empty()) os << " (" << r.label << ")";
  os << "  Sturm bound " << r.sturm_bound << "  method " << to_string(r.method) << "\n";
  os << "old-space matrix: " << m.matrix.rows() << " rows";
  if (r.oldspace_saturation_index != 1) os << ", saturation index " << r.oldspace_saturation_index;
  os << "\n";
  os << "candidates:";
  if (r.candidates.empty()) os << " none";
  os << "\n";
  for (const auto& c : r.candidates) {
    os << "  " << c.p << "  ";
    for (std::size_t i = 0; i < c.provenance.size(); ++i) os << (i ? ", " : "") << to_string(c.provenance[i]);
    os << "\n";
  }
  os << "congruence primes:";
  if (r.congruence_primes.empty()) os << " none";
  for (u64 p : r.congruence_primes) os << " " << p;
  os << "\n";
  if (r.congruence_exponent) os << "congruence exponent: " << *r.congruence_exponent << "\n";
  for (const auto& [p, w] : r.witnesses) os << "  " << format_witness(p, w, m) << "\n";
  if (r.conjecture1) {
    os << "odd primes dividing the Tamagawa product:";
    if (r.conjecture1->empty()) os << " none";
    os << "\n";
    for (const auto& v : *r.conjecture1)
      os << "  ell=" << v.ell << ": " << (v.consistent ? "consistent" : "COUNTEREXAMPLE") << " (" << v.reason
         << ")\n";
  }
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  return os.str();
}

}  // namespace oldcong
