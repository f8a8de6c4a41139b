#pragma once

// CSV tables for experiment records and the JSON approximant document.

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lightning/builder.hpp"
#include "lightning/error.hpp"
#include "lightning/experiments.hpp"
#include "lightning/mpnum.hpp"
#include "lightning/poles.hpp"
#include "lightning/scheme.hpp"

namespace lightning {

inline constexpr int kCsvDigits = 30;
inline constexpr const char* kApproximantFormat = "lightning-lp-approximant";
inline constexpr int kApproximantVersion = 1;

inline const char* convergence_csv_header() {
  return "scheme,axis,alpha,sigma,n1,n2,n,sup_err,argmax_x,predicted_rho,normalized";
}
inline const char* quaderr_csv_header() { return "scheme,alpha,sigma,n1,sup_quad_err"; }

namespace detail {

template <class Record>
std::vector<Record> sorted_records(std::vector<Record> records) {
  std::stable_sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
    if (a.alpha != b.alpha) return a.alpha < b.alpha;
    if (a.sigma != b.sigma) return a.sigma < b.sigma;
    return a.n1 < b.n1;
  });
  return records;
}

inline std::string num(const BigReal& x) { return to_decimal(x, kCsvDigits); }

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline std::string format_csv(const std::vector<ConvergenceRecord>& records) {
  std::string out = std::string(convergence_csv_header()) + "\n";
  for (const auto& r : detail::sorted_records(records)) {
    out += std::string(to_string(r.kind)) + "," + to_string(r.axis) + "," + detail::num(r.alpha) + "," +
           detail::num(r.sigma) + "," + std::to_string(r.n1) + "," + std::to_string(r.n2) + "," +
           std::to_string(r.n) + "," + detail::num(r.sup_err) + "," + detail::num(r.argmax_x) + "," +
           detail::num(r.predicted_rho) + "," + detail::num(r.normalized) + "\n";
  }
  return out;
}

inline std::string format_csv(const std::vector<QuadErrRecord>& records) {
  std::string out = std::string(quaderr_csv_header()) + "\n";
  for (const auto& r : detail::sorted_records(records)) {
    out += std::string(to_string(r.kind)) + "," + detail::num(r.alpha) + "," + detail::num(r.sigma) + "," +
           std::to_string(r.n1) + "," + detail::num(r.sup_quad_err) + "\n";
  }
  return out;
}

template <class Record>
void emit_csv(const std::vector<Record>& records, const std::string& path) {
  detail::write_text(path, format_csv(records));
}

inline std::vector<ConvergenceRecord> parse_convergence_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line != convergence_csv_header()) {
    throw Error(ErrorKind::Format, "convergence CSV: unexpected header");
  }
  std::vector<ConvergenceRecord> out;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto c = detail::split_csv_line(line);
    if (c.size() != 11) throw Error(ErrorKind::Format, "convergence CSV: expected 11 columns");
    ConvergenceRecord r;
    r.kind = parse_scheme_kind(c[0]);
    r.axis = parse_axis(c[1]);
    r.alpha = from_decimal(c[2]);
    r.sigma = from_decimal(c[3]);
    r.n1 = std::stoi(c[4]);
    r.n2 = std::stoi(c[5]);
    r.n = std::stoi(c[6]);
    r.sup_err = from_decimal(c[7]);
    r.argmax_x = from_decimal(c[8]);
    r.predicted_rho = from_decimal(c[9]);
    r.normalized = from_decimal(c[10]);
    out.push_back(std::move(r));
  }
  return out;
}

inline std::vector<QuadErrRecord> parse_quaderr_csv(const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  if (!std::getline(ss, line) || line != quaderr_csv_header()) {
    throw Error(ErrorKind::Format, "quadrature CSV: unexpected header");
  }
  std::vector<QuadErrRecord> out;
  while (std::getline(ss, line)) {
    if (line.empty()) continue;
    const auto c = detail::split_csv_line(line);
    if (c.size() != 5) throw Error(ErrorKind::Format, "quadrature CSV: expected 5 columns");
    QuadErrRecord r;
    r.kind = parse_scheme_kind(c[0]);
    r.alpha = from_decimal(c[1]);
    r.sigma = from_decimal(c[2]);
    r.n1 = std::stoi(c[3]);
    r.sup_quad_err = from_decimal(c[4]);
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// approximant document

inline nlohmann::json approximant_to_json(const LPApproximant& a) {
  const int bits = a.diagnostics.build_precision_bits;
  const int digits = lossless_digits(bits);
  auto dec = [&](const BigReal& x) { return to_decimal(x, digits); };
  auto list = [&](const std::vector<BigReal>& xs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& x : xs) arr.push_back(dec(x));
    return arr;
  };
  const SchemeParams& p = a.params;
  nlohmann::json j;
  j["format"] = kApproximantFormat;
  j["version"] = kApproximantVersion;
  j["precision_bits"] = bits;
  j["params"] = {{"scheme", to_string(p.kind)}, {"axis", to_string(p.axis)}, {"alpha", dec(p.alpha)},
                 {"sigma", dec(p.sigma)},       {"c_shift", dec(p.c_shift)}, {"n1", p.n1},
                 {"n2", p.n2},                  {"step", dec(p.step)},      {"t_cap", dec(p.t_cap)},
                 {"n_total", p.n_total}};
  j["poles"] = list(a.pole_part.poles.real_poles);
  j["residues"] = list(a.pole_part.residues);
  j["tail"] = {{"degree", a.tail.degree},
               {"coeffs", list(a.tail.coeffs)},
               {"v_max", dec(a.tail.v_max)},
               {"trunc_bound", dec(a.tail.trunc_bound)},
               {"scale", dec(a.tail_scale)}};
  j["diagnostics"] = {{"trunc_t_bound", dec(a.diagnostics.trunc_t_bound)},
                      {"tail_bound", dec(a.diagnostics.tail_bound)},
                      {"build_precision_bits", bits}};
  return j;
}

inline std::string format_approximant(const LPApproximant& a) { return approximant_to_json(a).dump(2) + "\n"; }

inline void save_approximant(const LPApproximant& a, const std::string& path) {
  detail::write_text(path, format_approximant(a));
}

/// Rebuilds an approximant from its document; derived parameters are recomputed
/// and must match the stored ones.
inline LPApproximant approximant_from_json(const nlohmann::json& j) {
  auto fail = [](const std::string& msg) { return Error(ErrorKind::Load, "approximant document: " + msg); };
  try {
    if (j.at("format").get<std::string>() != kApproximantFormat) throw fail("unknown format");
    if (j.at("version").get<int>() != kApproximantVersion) throw fail("unsupported version");
    const int bits = j.at("precision_bits").get<int>();
    PrecisionScope scope(bits);
    auto dec = [&](const nlohmann::json& v) { return from_decimal(v.get<std::string>(), bits); };
    auto list = [&](const nlohmann::json& arr) {
      std::vector<BigReal> xs;
      for (const auto& v : arr) xs.push_back(dec(v));
      return xs;
    };
    const auto& jp = j.at("params");
    SchemeParams p = make_params(parse_scheme_kind(jp.at("scheme").get<std::string>()),
                                 parse_axis(jp.at("axis").get<std::string>()), dec(jp.at("alpha")),
                                 dec(jp.at("sigma")), dec(jp.at("c_shift")), jp.at("n1").get<int>(),
                                 jp.at("n2").get<int>());
    if (p.n_total != jp.at("n_total").get<long>()) throw fail("n_total does not match the parameters");

    LPApproximant a;
    a.params = p;
    PoleSet ps;
    ps.kind = p.kind;
    ps.axis = p.axis;
    ps.params = p;
    ps.real_poles = list(j.at("poles"));
    if (ps.real_poles.size() != static_cast<std::size_t>(p.n1)) throw fail("pole count differs from n1");
    for (const auto& v : ps.real_poles) {
      if (!(v.sign() < 0)) throw fail("poles must be negative");
    }
    ps.values = ps.real_poles;
    if (p.axis == Axis::ImagAxis) {
      for (auto& v : ps.values) v = sqrt(abs(v));
    }
    a.pole_part.poles = std::move(ps);
    a.pole_part.residues = list(j.at("residues"));
    if (a.pole_part.residues.size() != static_cast<std::size_t>(p.n1)) throw fail("residue count differs from n1");

    const auto& jt = j.at("tail");
    a.tail.degree = jt.at("degree").get<int>();
    a.tail.coeffs = list(jt.at("coeffs"));
    if (a.tail.degree != p.n2 || a.tail.coeffs.size() != static_cast<std::size_t>(p.n2 + 1)) {
      throw fail("tail coefficient count differs from n2 + 1");
    }
    a.tail.v_max = dec(jt.at("v_max"));
    a.tail.trunc_bound = dec(jt.at("trunc_bound"));
    a.tail_scale = dec(jt.at("scale"));
    const auto& jd = j.at("diagnostics");
    a.diagnostics.trunc_t_bound = dec(jd.at("trunc_t_bound"));
    a.diagnostics.tail_bound = dec(jd.at("tail_bound"));
    a.diagnostics.build_precision_bits = bits;
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw fail(e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Load) throw;
    throw fail(e.what());
  }
}

inline LPApproximant parse_approximant(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Load, std::string("approximant document: ") + e.what());
  }
  return approximant_from_json(j);
}

inline LPApproximant load_approximant(const std::string& path) { return parse_approximant(detail::read_text(path)); }

}  // namespace lightning
