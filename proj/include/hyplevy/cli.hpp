#pragma once

// Batch subcommands behind the hyplevy tool. Argument parsing lives in
// tools/hyplevy.cpp; this header turns a RunConfig into a document.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyplevy/errors.hpp"
#include "hyplevy/exponent.hpp"
#include "hyplevy/ladder.hpp"
#include "hyplevy/lattice.hpp"
#include "hyplevy/levy_measure.hpp"
#include "hyplevy/params.hpp"
#include "hyplevy/wiener_hopf.hpp"

namespace hyplevy::cli {

inline constexpr const char* kVersion = "1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitCheckFailed = 2;
inline constexpr int kExitUsage = 64;

enum class Subcommand { Validate, Exponent, Lattice, Factors, Density, Ladder, Check };
enum class Format { Json, Csv };

struct Grid {
  double min = 0.0;
  double max = 0.0;
  int points = 0;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::Validate;
  HypParams params;
  Format output_format = Format::Json;
  std::optional<Grid> grid;
  int truncation_K = 200;
  std::optional<std::string> output_path;
};

/// Default truncation: HYPLEVY_TERMS if set to a positive integer, else 200.
inline int default_terms() {
  if (const char* env = std::getenv("HYPLEVY_TERMS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 5000) return static_cast<int>(v);
  }
  return 200;
}

inline std::string_view to_string(Subcommand s) {
  switch (s) {
    case Subcommand::Validate: return "validate";
    case Subcommand::Exponent: return "exponent";
    case Subcommand::Lattice: return "lattice";
    case Subcommand::Factors: return "factors";
    case Subcommand::Density: return "density";
    case Subcommand::Ladder: return "ladder";
    case Subcommand::Check: return "check";
  }
  return "?";
}

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Output formatting: every number printed with 17 significant digits.

inline std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_json(std::ostream& os, const Json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) os << ",\n";
        first = false;
        os << pad << Json(k).dump() << ": ";
        write_json(os, v, indent + 2);
      }
      os << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << "[\n";
      bool first = true;
      for (const auto& v : j) {
        if (!first) os << ",\n";
        first = false;
        os << pad;
        write_json(os, v, indent + 2);
      }
      os << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float:
      os << format_number(j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

inline std::string csv_field(const Json& v) {
  std::string s;
  if (v.is_number_float()) {
    s = format_number(v.get<double>());
    if (s == "null") s.clear();
  } else if (v.is_string()) {
    s = v.get<std::string>();
  } else if (v.is_null()) {
    s.clear();
  } else {
    s = v.dump();
  }
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

/// Header row from the keys of the first row, CRLF line ends.
inline void write_csv(std::ostream& os, const Json& rows) {
  if (rows.empty()) return;
  std::vector<std::string> keys;
  for (const auto& [k, v] : rows.front().items()) keys.push_back(k);
  for (std::size_t i = 0; i < keys.size(); ++i) os << (i ? "," : "") << csv_field(Json(keys[i]));
  os << "\r\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < keys.size(); ++i) {
      os << (i ? "," : "") << csv_field(row.contains(keys[i]) ? row.at(keys[i]) : Json());
    }
    os << "\r\n";
  }
}

// ---------------------------------------------------------------------------

struct Document {
  Json meta;
  Json data = Json::array();
  Json checks = Json::object();
  bool failed = false;
};

namespace detail {

inline Json num(double v) { return std::isfinite(v) ? Json(v) : Json(); }

inline std::vector<double> grid_points(const std::optional<Grid>& g, Grid fallback) {
  const Grid use = g.value_or(fallback);
  std::vector<double> out(static_cast<std::size_t>(use.points));
  for (int i = 0; i < use.points; ++i) {
    out[static_cast<std::size_t>(i)] =
        use.min + (use.max - use.min) * static_cast<double>(i) / static_cast<double>(use.points - 1);
  }
  return out;
}

inline Json params_json(const HypParams& p) {
  return Json{{"beta", p.beta}, {"gamma", p.gamma}, {"beta_hat", p.beta_hat}, {"gamma_hat", p.gamma_hat}};
}

inline void add_check(Document& doc, const std::string& name, bool passed, double worst, double tolerance) {
  doc.checks[name] = Json{{"passed", passed}, {"worst", num(worst)}, {"tolerance", tolerance}};
  if (!passed) doc.failed = true;
}

inline Json factor_json(const WienerHopfFactor& f) {
  Json lin = Json::array();
  for (const auto& l : f.linear_factors) {
    lin.push_back(Json{{"root_shift", l.root_shift ? Json(*l.root_shift) : Json()},
                       {"pole_shift", l.pole_shift ? Json(*l.pole_shift) : Json()}});
  }
  return Json{{"side", std::string(to_string(f.side))},
              {"gamma_ratio",
               {{"num_offset", f.gamma_ratio.num_offset}, {"den_offset", f.gamma_ratio.den_offset}}},
              {"linear_factors", lin}};
}

inline void lattice_rows(Json& rows, const std::vector<LatticePoint>& pts, const char* side, const char* kind) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double sign = side[0] == 'p' ? 1.0 : -1.0;
    rows.push_back(Json{{"side", side},
                        {"kind", kind},
                        {"index", static_cast<int>(i) + 1},
                        {"value", sign * pts[i].value},
                        {"origin", std::string(to_string(pts[i].origin))},
                        {"family_index", pts[i].family_index}});
  }
}

// Series value or NaN when the truncation is too short.
inline double try_series(const MixtureCoefficients& m, double x) {
  try {
    return density_series(m, x);
  } catch (const TruncationError&) {
    return std::nan("");
  }
}

inline double try_closed(const HypParams& p, double x) {
  try {
    return density_closed(p, x);
  } catch (const ParameterError&) {
    return std::nan("");
  }
}

inline void run_validate(const RunConfig& c, Document& doc) {
  const Regime r = classify(c.params);
  const DerivedParams d = derive(c.params);
  doc.data.push_back(Json{{"regime", std::string(to_string(r.tag))},
                          {"n", r.shift_n},
                          {"eta", d.eta},
                          {"q", killing_rate(c.params)},
                          {"variation", std::string(to_string(d.variation))}});
}

inline void run_exponent(const RunConfig& c, Document& doc) {
  for (double theta : grid_points(c.grid, {-10.0, 10.0, 101})) {
    const Complex v = psi(c.params, Complex(0.0, theta));
    doc.data.push_back(Json{{"theta", theta}, {"re", num(v.real())}, {"im", num(v.imag())}});
  }
}

inline void run_lattice(const RunConfig& c, Document& doc) {
  const RootPoleLattice lat = enumerate(c.params, std::min(c.truncation_K, 10000));
  lattice_rows(doc.data, lat.pos_roots, "positive", "root");
  lattice_rows(doc.data, lat.pos_poles, "positive", "pole");
  lattice_rows(doc.data, lat.neg_roots, "negative", "root");
  lattice_rows(doc.data, lat.neg_poles, "negative", "pole");
  doc.meta["zero_root"] = lat.zero_root;
  Json canc = Json::array();
  for (const auto& x : lat.cancellations) canc.push_back(x.location);
  doc.meta["cancellations"] = canc;
  const bool ok = check_interlacing(lat);
  doc.checks["interlacing"] = Json{{"passed", ok}};
  if (!ok) doc.failed = true;
}

inline void run_factors(const RunConfig& c, Document& doc) {
  const auto [up, down] = build_factors(c.params);
  doc.meta["factors"] = Json{{"ascending", factor_json(up)}, {"descending", factor_json(down)}};
  for (double l : grid_points(c.grid, {0.0, 10.0, 101})) {
    doc.data.push_back(Json{{"lambda", l}, {"kappa", num(eval_factor(up, l))},
                            {"kappa_hat", num(eval_factor(down, l))}});
  }
  const auto grid = default_bernstein_grid();
  const std::pair<const char*, WienerHopfFactor> cases[] = {
      {"bernstein_kappa", up},
      {"bernstein_kappa_hat", down},
      {"bernstein_lambda_over_kappa", conjugate(up)},
      {"bernstein_lambda_over_kappa_hat", conjugate(down)}};
  for (const auto& [name, f] : cases) {
    const auto cert = bernstein_certificate(f, kBernsteinOrders, grid);
    add_check(doc, name, cert.passed, cert.worst_excess, 1e-9);
  }
}

inline void run_density(const RunConfig& c, Document& doc) {
  const MixtureCoefficients m = mixture_coefficients(c.params, c.truncation_K);
  for (double x : grid_points(c.grid, {-3.0, 3.0, 61})) {
    if (std::abs(x) < kDensityXMin) continue;
    const double closed = try_closed(c.params, x);
    const double series = try_series(m, x);
    doc.data.push_back(Json{{"x", x}, {"closed", num(closed)}, {"series", num(series)},
                            {"delta", num(std::abs(closed - series))}});
  }
}

inline void run_ladder(const RunConfig& c, Document& doc) {
  for (double x : grid_points(c.grid, {0.1, 5.0, 50})) {
    if (!(x > 0.0)) continue;
    doc.data.push_back(Json{{"x", x}, {"nu", ladder_density(c.params, x)},
                            {"u", potential_density(c.params, x)}});
  }
  static constexpr double kLambdas[] = {0.5, 1.0, 2.0, 5.0};
  const auto rep = verify_ladder_transform(c.params, kLambdas);
  add_check(doc, "nu_difference", rep.nu_difference_error < 1e-6, rep.nu_difference_error, 1e-6);
  add_check(doc, "potential_transform", rep.potential_error < 1e-6, rep.potential_error, 1e-6);
}

inline void run_check(const RunConfig& c, Document& doc) {
  const HypParams& p = c.params;

  const RootPoleLattice lat = enumerate(p, 50);
  const bool interlaced = check_interlacing(lat);
  add_check(doc, "interlacing", interlaced, interlaced ? 0.0 : 1.0, 0.0);

  std::vector<double> thetas(200);
  for (int i = 0; i < 200; ++i) thetas[static_cast<std::size_t>(i)] = -50.0 + 100.0 * i / 199.0;
  const double fact = verify_factorization(p, thetas);
  add_check(doc, "factorization", fact < 1e-9, fact, 1e-9);

  const MixtureCoefficients m = mixture_coefficients(p, c.truncation_K);
  double worst_series = 0.0;
  for (double x : {-3.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 3.0}) {
    const double closed = try_closed(p, x);
    const double series = try_series(m, x);
    if (std::isnan(closed)) continue;  // boundary case: only the series is available
    const double err = std::abs(closed - series) / std::abs(closed);
    worst_series = std::isnan(err) ? INFINITY : std::max(worst_series, err);
  }
  add_check(doc, "series_agreement", worst_series < 1e-7, worst_series, 1e-7);

  double min_density = INFINITY;
  for (int i = 0; i < 1000; ++i) {
    const double x = -10.0 + 20.0 * (i + 0.5) / 1000.0;
    double v = try_closed(p, x);
    if (std::isnan(v)) v = try_series(m, x);
    if (std::isnan(v)) continue;
    min_density = std::min(min_density, v);
  }
  add_check(doc, "positivity", min_density > 0.0, min_density, 0.0);

  const auto integ = integrability_check(p);
  add_check(doc, "integrability", integ.converged, integ.integral_min1x2, 1e-6);
}

}  // namespace detail

/// Computes the document for `c`. Library errors propagate.
inline Document build_document(const RunConfig& c) {
  Document doc;
  const Regime r = classify(c.params);
  doc.meta = Json{{"subcommand", std::string(to_string(c.subcommand))},
                  {"params", detail::params_json(c.params)},
                  {"regime", Json{{"tag", std::string(to_string(r.tag))}, {"n", r.shift_n}}},
                  {"version", kVersion}};
  switch (c.subcommand) {
    case Subcommand::Validate: detail::run_validate(c, doc); break;
    case Subcommand::Exponent: detail::run_exponent(c, doc); break;
    case Subcommand::Lattice: detail::run_lattice(c, doc); break;
    case Subcommand::Factors: detail::run_factors(c, doc); break;
    case Subcommand::Density: detail::run_density(c, doc); break;
    case Subcommand::Ladder: detail::run_ladder(c, doc); break;
    case Subcommand::Check: detail::run_check(c, doc); break;
  }
  return doc;
}

inline void write_document(std::ostream& os, const Document& doc, Format f) {
  if (f == Format::Csv) {
    write_csv(os, doc.data);
    return;
  }
  Json top;
  top["meta"] = doc.meta;
  top["data"] = doc.data;
  top["checks"] = doc.checks;
  write_json(os, top);
  os << "\n";
}

/// Runs one subcommand. The document goes to `out`; a one-line reason goes to
/// `err` on failure. Returns the process exit status.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.grid && (c.grid->points < 2 || !(c.grid->min < c.grid->max))) {
    err << "usage: grid needs points >= 2 and min < max\n";
    return kExitUsage;
  }
  if (c.truncation_K <= 0 || c.truncation_K > 5000) {
    err << "usage: --terms must be in [1, 5000]\n";
    return kExitUsage;
  }
  Document doc;
  try {
    doc = build_document(c);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  write_document(out, doc, c.output_format);
  return doc.failed ? kExitCheckFailed : kExitOk;
}

}  // namespace hyplevy::cli
