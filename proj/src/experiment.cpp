// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "berezin/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "toml.hpp"

#include "berezin/analysis.hpp"
#include "berezin/berezin.hpp"
#include "berezin/frames.hpp"
#include "berezin/operators.hpp"
#include "berezin/symbols.hpp"

namespace berezin {

using report::Json;

namespace {

constexpr const char* kVersion = "0.1.0";

Json obj(std::initializer_list<std::pair<const std::string, Json>> items) {
  Json j = Json::object();
  for (const auto& [k, v] : items) j[k] = v;
  return j;
}

Json num_array(std::initializer_list<double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

std::vector<OperationInfo> build_registry() {
  std::vector<OperationInfo> ops;
  auto add = [&](std::string name, std::string desc, bool schedule, bool symbol, Json params, Json thresholds) {
    ops.push_back({std::move(name), std::move(desc), schedule, symbol, std::move(params), std::move(thresholds)});
  };
  add("parseval_check", "max ||synthesis(analysis(f)) - f|| over seeded trial vectors", false, false,
      obj({{"trials", 20}, {"trial_margin", 3.0}}), obj({{"tolerance", 1e-10}}));
  add("spectrum", "eigenvalues of T_sigma (full, or top k)", false, true, obj({{"k", nullptr}, {"cap", kDenseCap}}),
      obj({{"eps", 0.1}}));
  add("trace_check", "tr T_sigma against sum sigma_j w_j ||k_j||^2", false, true, obj({{"cap", kDenseCap}}),
      obj({{"tolerance", 1e-8}}));
  add("berezin_transform", "Berezin transform of sigma at probe points with its radial envelope", false, true,
      obj({{"stride", 4}}), Json::object());
  add("thinness_report", "decay of the Berezin transform and ball integrals away from the origin", true, true,
      obj({{"R_list", num_array({0.5, 1.0})}, {"stride", 4}, {"steps", 16}}),
      obj({{"theta", 0.05}, {"margin", 1.0}}));
  add("schur_condition", "Schur test sums with weight (1 + d(e, x))^s and their tails beyond R", false, false,
      obj({{"R", 4.0}, {"weight_exponent", 0.0}}), Json::object());
  add("kernel_decay_profile", "max |<k_x, k_e>| binned by distance from the origin", false, false,
      obj({{"bin_width", 1.0}}), obj({{"threshold", 1e-3}}));
  add("admissibility_constant", "Calderon integral of the window in both directions", false, false,
      obj({{"normalize", false}}), obj({{"mean_tolerance", 1e-6}}));
  add("b1w_integral", "truncated B1_w integral of the wavelet over the A schedule", true, false,
      obj({{"A_schedule", num_array({16, 64, 256, 1024})}, {"epsilon", 0.5}}), Json::object());
  add("b1w_slope", "log-log slope of int |W psi psi(a, b)| db in a", false, false,
      obj({{"a_lo", 4.0}, {"a_hi", 256.0}, {"nodes", 17}}), Json::object());
  add("holder_modulus", "max ||tau_h phi - phi||_1 / h^alpha over h", false, false,
      obj({{"alpha", 1.0}, {"h_list", num_array({1.0})}}), Json::object());
  add("moment_check", "window mean and alpha-moment", false, false, obj({{"alpha", 1.0}}), Json::object());
  add("conjugation_residual", "||S_h T_sigma S_h^* - T_{sigma_h}|| for an invariant shift", false, true,
      obj({{"shift", 1.0}, {"interior_margin", 0.0}}), Json::object());
  add("ordering_residual", "order and subadditivity residuals for sigma and a translate", false, true,
      obj({{"rho_shift", 1.0}}), Json::object());
  add("sup_translates_select", "staged selection of translates with a certificate", false, true,
      obj({{"shifts", nullptr}, {"stages", 6}, {"budget_radius", 1.0}, {"probe_stride", 4}}), Json::object());
  add("uncertainty_constant", "c = lower frame bound - lambda_max(T_sigma) with Rayleigh verification", false,
      true, obj({{"trials", 100}, {"trial_margin", 3.0}, {"witness_box", nullptr}}),
      obj({{"parseval_tolerance", 1e-6}}));
  add("compactness_proxy", "eps-rank of T_{1_E} across an extent schedule", true, true,
      obj({{"extents", num_array({4, 8, 16})}, {"delta", 0.25}, {"lattice_margin", 2.0}, {"cap", kDenseCap}}),
      obj({{"eps", 0.1}}));
  add("l1_symbol_bound", "uncertainty constant together with the L1 operator bound", false, true,
      obj({{"trials", 100}, {"trial_margin", 3.0}}), obj({{"parseval_tolerance", 1e-6}}));
  add("translate_gram", "Gram matrix of iterated shifts of the window", false, false,
      obj({{"step", 0.5}, {"count", 5}, {"duplicate", false}}), Json::object());
  add("strip_counterexample", "box window and box signal whose transform vanishes off a strip", false, false,
      obj({{"phi_halfwidth", 0.5}, {"f_halfwidth", 0.5}, {"center", 0.5}}), obj({{"zero", 1e-12}}));
  add("export_matrix", "dense T_sigma as a binary row-major complex file", false, true, obj({{"cap", kDenseCap}}),
      Json::object());
  return ops;
}

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) fail(where + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; });
    if (!ok) fail("unknown field \"" + it.key() + "\" in " + where);
  }
}

double get_number(const Json& j, const char* key, double fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string() && (v == "inf" || v == "-inf")) return v == "inf" ? INFINITY : -INFINITY;
  fail(where + "." + key + " must be a number");
}

long long get_int(const Json& j, const char* key, long long fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) return static_cast<long long>(v.get<double>());
  fail(where + "." + key + " must be an integer");
}

std::string get_string(const Json& j, const char* key, const std::string& fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) fail(where + "." + key + " must be a string");
  return j.at(key).get<std::string>();
}

std::vector<double> numbers_of(const Json& v, const std::string& where) {
  if (!v.is_array()) fail(where + " must be an array of numbers");
  std::vector<double> out;
  for (const Json& x : v) {
    if (!x.is_number()) fail(where + " must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

bool same_kind(const Json& def, const Json& v) {
  if (def.is_null()) return true;
  if (def.is_boolean()) return v.is_boolean();
  if (def.is_number_integer() || def.is_number_unsigned()) return v.is_number_integer() || v.is_number_unsigned();
  if (def.is_number()) return v.is_number();
  if (def.is_string()) return v.is_string();
  if (def.is_array()) return v.is_array() && std::all_of(v.begin(), v.end(), [](const Json& x) { return x.is_number(); });
  return false;
}

Json merge_defaults(const Json& defaults, const Json& given, const std::string& where) {
  if (given.is_null()) return defaults;
  if (!given.is_object()) fail(where + " must be an object");
  Json out = defaults;
  for (auto it = given.begin(); it != given.end(); ++it) {
    if (!defaults.contains(it.key())) fail("unknown field \"" + it.key() + "\" in " + where);
    // budget_radius may be "inf" (no budget check).
    const bool inf_ok = it.key() == "budget_radius" && it.value() == "inf";
    if (!inf_ok && !same_kind(defaults.at(it.key()), it.value())) fail(where + "." + it.key() + " has the wrong type");
    out[it.key()] = it.value();
  }
  return out;
}

Json normalize_geometry(const Json& g) {
  const std::string where = "geometry";
  if (g.is_null()) return obj({{"kind", "plane"}, {"t_half", 8.0}, {"w_half", 8.0}, {"dt", 0.25}, {"dw", 0.25}});
  if (!g.is_object()) fail("geometry must be an object");
  const std::string kind = get_string(g, "kind", "plane", where);
  if (kind == "finite_gabor") {
    check_keys(g, {"kind", "N"}, where);
    const long long N = get_int(g, "N", 8, where);
    if (N < 1) fail("geometry.N must be positive");
    return obj({{"kind", kind}, {"N", N}});
  }
  if (kind == "plane") {
    check_keys(g, {"kind", "t_half", "w_half", "dt", "dw"}, where);
    return obj({{"kind", kind},
                {"t_half", get_number(g, "t_half", 8.0, where)},
                {"w_half", get_number(g, "w_half", 8.0, where)},
                {"dt", get_number(g, "dt", 0.25, where)},
                {"dw", get_number(g, "dw", 0.25, where)}});
  }
  if (kind == "affine") {
    check_keys(g, {"kind", "a_min", "a_max", "n_scales", "b_half", "n_shifts"}, where);
    return obj({{"kind", kind},
                {"a_min", get_number(g, "a_min", 0.125, where)},
                {"a_max", get_number(g, "a_max", 8.0, where)},
                {"n_scales", get_int(g, "n_scales", 25, where)},
                {"b_half", get_number(g, "b_half", 8.0, where)},
                {"n_shifts", get_int(g, "n_shifts", 129, where)}});
  }
  fail("unknown geometry kind \"" + kind + "\"");
}

Json normalize_lattice(const Json& l, const Json& geometry) {
  const std::string kind = geometry.at("kind");
  const std::string where = "lattice";
  const Json given = l.is_null() ? Json::object() : l;
  if (kind == "finite_gabor") {
    check_keys(given, {}, where);
    return Json::object();
  }
  if (kind == "plane") {
    check_keys(given, {"margin", "half_width", "step"}, where);
    if (given.contains("half_width") || given.contains("step")) {
      if (given.contains("margin")) fail("lattice: give either margin or half_width and step");
      if (!given.contains("half_width") || !given.contains("step")) fail("lattice needs both half_width and step");
      return obj({{"half_width", get_number(given, "half_width", 0, where)}, {"step", get_number(given, "step", 0, where)}});
    }
    return obj({{"margin", get_number(given, "margin", 2.0, where)}});
  }
  check_keys(given, {"half_width", "step"}, where);
  const double b_half = geometry.at("b_half");
  const long long n = geometry.at("n_shifts");
  const double db = n > 1 ? 2.0 * b_half / static_cast<double>(n - 1) : b_half;
  return obj({{"half_width", get_number(given, "half_width", b_half, where)}, {"step", get_number(given, "step", db, where)}});
}

Json normalize_window(const Json& w, const Json& geometry) {
  const bool affine = geometry.at("kind") == "affine";
  const std::string norm_default = affine ? "admissible" : "l2";
  const std::string name_default = affine ? "mexican_hat" : "gaussian";
  if (w.is_null()) return obj({{"name", name_default}, {"normalization", norm_default}});
  if (w.is_string()) return obj({{"name", w.get<std::string>()}, {"normalization", norm_default}});
  check_keys(w, {"name", "csv", "normalization"}, "window");
  const std::string norm = get_string(w, "normalization", norm_default, "window");
  if (norm != "l2" && norm != "admissible" && norm != "none") fail("window.normalization must be l2, admissible or none");
  if (w.contains("csv")) {
    if (w.contains("name")) fail("window: give either name or csv");
    return obj({{"csv", get_string(w, "csv", "", "window")}, {"normalization", norm}});
  }
  const std::string name = get_string(w, "name", name_default, "window");
  const auto& names = builtin_window_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) fail("unknown window \"" + name + "\"");
  return obj({{"name", name}, {"normalization", norm}});
}

std::string normalize_axis(const Json& s) {
  const std::string a = get_string(s, "axis", "second", "symbol");
  if (a == "first" || a == "p" || a == "w" || a == "a") return "first";
  if (a == "second" || a == "q" || a == "t" || a == "b") return "second";
  fail("symbol.axis must be first or second (or a coordinate name)");
}

Json normalize_symbol(const Json& s, std::uint64_t seed) {
  if (s.is_null()) return nullptr;
  if (!s.is_object()) fail("symbol must be an object");
  const std::string kind = get_string(s, "kind", "", "symbol");
  const std::string where = "symbol";
  if (kind == "ball_union") {
    check_keys(s, {"kind", "centers", "radii"}, where);
    if (!s.contains("centers") || !s.contains("radii")) fail("symbol: ball_union needs centers and radii");
    const Json& c = s.at("centers");
    if (!c.is_array()) fail("symbol.centers must be an array of [x, y] pairs");
    for (const Json& p : c) {
      if (numbers_of(p, "symbol.centers entry").size() != 2) fail("symbol.centers entries must be [x, y] pairs");
    }
    numbers_of(s.at("radii"), "symbol.radii");
    return obj({{"kind", kind}, {"centers", c}, {"radii", s.at("radii")}});
  }
  if (kind == "strip") {
    check_keys(s, {"kind", "axis", "center", "half_width"}, where);
    if (!s.contains("half_width")) fail("symbol: strip needs half_width");
    return obj({{"kind", kind},
                {"axis", normalize_axis(s)},
                {"center", get_number(s, "center", 0.0, where)},
                {"half_width", get_number(s, "half_width", 0.0, where)}});
  }
  if (kind == "band") {
    check_keys(s, {"kind", "axis", "lo", "hi"}, where);
    if (!s.contains("lo") || !s.contains("hi")) fail("symbol: band needs lo and hi");
    Json out = obj({{"kind", kind}, {"axis", s.contains("axis") ? normalize_axis(s) : std::string("first")}});
    out["lo"] = get_number(s, "lo", 0.0, where);
    out["hi"] = get_number(s, "hi", 0.0, where);
    return out;
  }
  if (kind == "predicate") {
    check_keys(s, {"kind", "expression"}, where);
    if (!s.contains("expression")) fail("symbol: predicate needs expression");
    return obj({{"kind", kind}, {"expression", get_string(s, "expression", "", where)}});
  }
  if (kind == "constant") {
    check_keys(s, {"kind", "value"}, where);
    return obj({{"kind", kind}, {"value", get_number(s, "value", 1.0, where)}});
  }
  if (kind == "random") {
    check_keys(s, {"kind", "seed"}, where);
    return obj({{"kind", kind}, {"seed", get_int(s, "seed", static_cast<long long>(seed), where)}});
  }
  if (kind == "point") {
    check_keys(s, {"kind", "at"}, where);
    if (!s.contains("at") || numbers_of(s.at("at"), "symbol.at").size() != 2) fail("symbol: point needs at = [x, y]");
    return obj({{"kind", kind}, {"at", s.at("at")}});
  }
  fail("unknown symbol kind \"" + kind + "\"");
}

Json toml_to_json(const toml::node& node) {
  if (const auto* t = node.as_table()) {
    Json j = Json::object();
    for (const auto& [k, v] : *t) j[std::string(k.str())] = toml_to_json(v);
    return j;
  }
  if (const auto* a = node.as_array()) {
    Json j = Json::array();
    for (const auto& v : *a) j.push_back(toml_to_json(v));
    return j;
  }
  if (const auto* v = node.as_integer()) return v->get();
  if (const auto* v = node.as_floating_point()) {
    const double d = v->get();
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    return d;
  }
  if (const auto* v = node.as_boolean()) return v->get();
  if (const auto* v = node.as_string()) return v->get();
  throw ConfigError("unsupported TOML value (dates and times are not config values)");
}

// ---- building the experiment objects ------------------------------------

QuadGrid make_grid(const Json& g) {
  const std::string kind = g.at("kind");
  if (kind == "finite_gabor") return finite_gabor_grid(g.at("N").get<int>());
  if (kind == "plane") return plane_grid(g.at("t_half"), g.at("w_half"), g.at("dt"), g.at("dw"));
  return affine_grid(g.at("a_min"), g.at("a_max"), g.at("n_scales").get<int>(), g.at("b_half"), g.at("n_shifts").get<int>());
}

SignalLattice make_lattice(const ExperimentConfig& c, const QuadGrid& grid) {
  const std::string kind = c.geometry.at("kind");
  if (kind == "finite_gabor") return SignalLattice::cyclic(c.geometry.at("N").get<int>());
  if (c.lattice.contains("margin")) return matched_lattice(grid, c.lattice.at("margin").get<double>());
  return SignalLattice::line(c.lattice.at("half_width").get<double>(), c.lattice.at("step").get<double>());
}

WindowNormalization parse_normalization(const std::string& s) {
  if (s == "l2") return WindowNormalization::L2;
  if (s == "admissible") return WindowNormalization::Admissible;
  return WindowNormalization::None;
}

std::string window_label(const Json& w) {
  return w.contains("name") ? w.at("name").get<std::string>() : "csv:" + w.at("csv").get<std::string>();
}

HilbertVector make_window(const Json& w, const SignalLattice& lattice) {
  if (w.contains("csv")) return load_window_csv(w.at("csv"), lattice);
  return builtin_window(w.at("name"), lattice);
}

FrameFamily make_frame(const ExperimentConfig& c, const QuadGrid& grid, const HilbertVector& window) {
  const std::string kind = c.geometry.at("kind");
  const std::string label = window_label(c.window);
  const WindowNormalization norm = parse_normalization(c.window.at("normalization"));
  if (kind == "finite_gabor") return make_finite_gabor(window, label, norm);
  if (kind == "plane") return make_plane_gabor(window, grid, label, norm);
  return make_affine_wavelet(window, grid, label, norm);
}

Axis axis_of(const Json& s) { return s.at("axis") == "first" ? Axis::First : Axis::Second; }

std::optional<SetSpec> make_set(const Json& s, const Geometry& g) {
  const std::string kind = s.at("kind");
  if (kind == "ball_union") {
    BallUnion b;
    for (const Json& p : s.at("centers")) b.centers.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    for (const Json& r : s.at("radii")) b.radii.push_back(r.get<double>());
    return SetSpec(b, g);
  }
  if (kind == "strip") return SetSpec(Strip{axis_of(s), s.at("center"), s.at("half_width")}, g);
  if (kind == "band") return SetSpec(Band{axis_of(s), s.at("lo"), s.at("hi")}, g);
  if (kind == "predicate") return SetSpec(Predicate{s.at("expression")}, g);
  return std::nullopt;
}

Symbol make_symbol(const Json& s, const QuadGrid& grid) {
  const std::string kind = s.at("kind");
  if (auto set = make_set(s, grid.geometry())) return indicator(grid, *set);
  if (kind == "constant") return Symbol::constant(grid, s.at("value"));
  if (kind == "random") {
    std::mt19937_64 rng(s.at("seed").get<std::uint64_t>());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(grid.size());
    for (double& x : v) x = u(rng);
    return Symbol(grid, std::move(v), "random(seed=" + std::to_string(s.at("seed").get<std::uint64_t>()) + ")");
  }
  const PhasePoint at{s.at("at").at(0).get<double>(), s.at("at").at(1).get<double>()};
  const auto j = grid.nearest_index(at);
  if (!j) throw InvalidArgument("symbol.at lies outside the grid");
  std::vector<double> v(grid.size(), 0.0);
  v[*j] = 1.0;
  return Symbol(grid, std::move(v), "point");
}

std::string decay_csv_two_column(const std::string& parameter, const std::vector<std::pair<double, double>>& rows) {
  std::string out = parameter + ",value\n";
  for (const auto& [x, y] : rows) out += report::format_double(x) + "," + report::format_double(y) + "\n";
  return out;
}

void add_schedules(ExperimentResult& r, const DecayReport& d) {
  r.tables.emplace_back("", report::to_csv(d));
  r.schedules.emplace_back(d.quantity, decay_csv_two_column(d.parameter, d.schedule));
  for (const Series& s : d.series) {
    std::vector<std::pair<double, double>> rows;
    for (std::size_t i = 0; i < s.values.size() && i < d.schedule.size(); ++i) rows.emplace_back(d.schedule[i].first, s.values[i]);
    r.schedules.emplace_back(s.name, decay_csv_two_column(d.parameter, rows));
  }
}

std::vector<GroupElement> invariant_elements(const FrameFamily& F, const std::vector<double>& shifts) {
  std::vector<GroupElement> out;
  for (double s : shifts) out.push_back(F.invariant_element(s));
  return out;
}

}  // namespace

const std::vector<OperationInfo>& operations() {
  static const std::vector<OperationInfo> ops = build_registry();
  return ops;
}

const OperationInfo& operation_info(const std::string& name) {
  for (const OperationInfo& op : operations()) {
    if (op.name == name) return op;
  }
  throw ConfigError("unknown operation \"" + name + "\"");
}

const std::vector<GeometryInfo>& geometries() {
  static const std::vector<GeometryInfo> g = {
      {"finite_gabor", "Z_N x Z_N with the finite Gabor frame (keys: N)"},
      {"plane", "time-frequency plane, truncated endpoint grid (keys: t_half, w_half, dt, dw)"},
      {"affine", "affine half-plane, log-uniform scales and cell-centred shifts "
                 "(keys: a_min, a_max, n_scales, b_half, n_shifts)"},
  };
  return g;
}

Json ExperimentConfig::canonical() const {
  nlohmann::json sorted = {
      {"geometry", nlohmann::json::parse(geometry.dump())},
      {"lattice", nlohmann::json::parse(lattice.dump())},
      {"window", nlohmann::json::parse(window.dump())},
      {"symbol", nlohmann::json::parse(symbol.dump())},
      {"operation", operation},
      {"parameters", nlohmann::json::parse(parameters.dump())},
      {"thresholds", nlohmann::json::parse(thresholds.dump())},
      {"output_dir", output_dir},
      {"seed", seed},
  };
  return Json::parse(sorted.dump());
}

std::string ExperimentConfig::hash() const { return report::hex64(report::fnv1a(canonical().dump())); }

ExperimentConfig parse_config(const Json& doc) {
  check_keys(doc, {"geometry", "lattice", "window", "symbol", "operation", "parameters", "thresholds", "output_dir", "seed"},
             "config");
  ExperimentConfig c;
  if (!doc.contains("operation")) fail("config needs an operation");
  c.operation = get_string(doc, "operation", "", "config");
  const OperationInfo& op = operation_info(c.operation);
  if (doc.contains("seed")) {
    const Json& s = doc.at("seed");
    if (!s.is_number_integer() || s.get<long long>() < 0) fail("config.seed must be a nonnegative integer");
    c.seed = s.get<std::uint64_t>();
  }
  c.output_dir = get_string(doc, "output_dir", "out", "config");
  c.geometry = normalize_geometry(doc.value("geometry", Json()));
  c.lattice = normalize_lattice(doc.value("lattice", Json()), c.geometry);
  c.window = normalize_window(doc.value("window", Json()), c.geometry);
  c.symbol = normalize_symbol(doc.value("symbol", Json()), c.seed);
  if (op.needs_symbol && c.symbol.is_null()) fail("operation " + c.operation + " needs a symbol");
  c.parameters = merge_defaults(op.parameters, doc.value("parameters", Json()), "parameters");
  c.thresholds = merge_defaults(op.thresholds, doc.value("thresholds", Json()), "thresholds");
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  const std::string ext = std::filesystem::path(path).extension().string();
  Json doc;
  if (ext == ".json") {
    try {
      doc = Json::parse(ss.str());
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(std::string("JSON parse error: ") + e.what());
    }
  } else if (ext == ".toml") {
    try {
      const toml::table t = toml::parse(ss.str(), path);
      doc = toml_to_json(t);
    } catch (const toml::parse_error& e) {
      throw ConfigError(std::string("TOML parse error: ") + std::string(e.description()));
    }
  } else {
    throw ConfigError("config must have a .json or .toml extension: " + path);
  }
  return parse_config(doc);
}

ExperimentResult run_experiment(const ExperimentConfig& c) {
  const Json& P = c.parameters;
  const Json& Th = c.thresholds;
  ExperimentResult out;
  Json result = Json::object();

  const QuadGrid grid = make_grid(c.geometry);
  const SignalLattice lattice = make_lattice(c, grid);
  const HilbertVector window = make_window(c.window, lattice);
  std::optional<Symbol> sigma;
  if (!c.symbol.is_null()) sigma = make_symbol(c.symbol, grid);

  Json provenance = {{"tool", "berezin-lab"},
                     {"version", kVersion},
                     {"config_hash", c.hash()},
                     {"config", c.canonical()},
                     {"grid", report::to_json(grid)},
                     {"seed", c.seed},
                     {"thresholds", Th}};
  if (sigma) provenance["symbol"] = {{"provenance", sigma->provenance()}, {"sup", report::number(sigma->sup_bound())}};

  // Operations that only need the sampled window.
  const std::string& name = c.operation;
  if (name == "admissibility_constant") {
    AdmissibilityOptions ao;
    ao.mean_tolerance = Th.at("mean_tolerance");
    HilbertVector psi = window;
    if (P.at("normalize").get<bool>()) psi = normalize_admissible(window, ao);
    result["plus"] = report::number(admissibility_constant(psi, 1, ao));
    result["minus"] = report::number(admissibility_constant(psi, -1, ao));
    result["normalized"] = P.at("normalize");
    provenance["window"] = {{"name", window_label(c.window)}, {"hash", report::hex64(vector_hash(window))}};
  } else if (name == "b1w_integral") {
    const DecayReport d = b1w_integral(window, numbers_of(P.at("A_schedule"), "parameters.A_schedule"), P.at("epsilon"));
    result = report::to_json(d);
    add_schedules(out, d);
  } else if (name == "b1w_slope") {
    result["slope"] = report::number(b1w_slope(window, P.at("a_lo"), P.at("a_hi"), P.at("nodes").get<int>()));
  } else if (name == "holder_modulus") {
    result["modulus"] = report::number(
        holder_modulus(window, P.at("alpha"), numbers_of(P.at("h_list"), "parameters.h_list")));
    result["sample_step"] = lattice.step;
  } else if (name == "moment_check") {
    const MomentResult m = moment_check(window, P.at("alpha"));
    result["mean"] = Json::array({report::number(m.mean.real()), report::number(m.mean.imag())});
    result["moment"] = report::number(m.moment);
    result["sample_step"] = lattice.step;
  } else if (name == "strip_counterexample") {
    const StripCounterexample s = strip_counterexample(P.at("phi_halfwidth"), P.at("f_halfwidth"), grid, P.at("center"));
    result["max_outside"] = report::number(s.max_outside);
    result["strip_halfwidth"] = report::number(s.strip_halfwidth);
    result["points_outside"] = s.points_outside;
    result["pass"] = s.max_outside < Th.at("zero").get<double>();
  } else if (name == "compactness_proxy") {
    if (!sigma || sigma->sets().empty()) throw InvalidArgument("compactness_proxy needs a set symbol");
    CompactnessOptions co;
    co.eps = Th.at("eps");
    co.delta = P.at("delta");
    co.lattice_margin = P.at("lattice_margin");
    co.cap = P.at("cap").get<Eigen::Index>();
    const std::vector<double> extents = numbers_of(P.at("extents"), "parameters.extents");
    const DecayReport d = compactness_proxy(sigma->sets().front(), window_label(c.window), extents, co);
    result = report::to_json(d);
    add_schedules(out, d);
  } else {
    const FrameFamily F = make_frame(c, grid, window);
    provenance["frame"] = report::to_json(F);
    if (name == "parseval_check") {
      const double r = frame_operator_residual(F, grid, P.at("trials").get<int>(), c.seed);
      result["residual"] = report::number(r);
      result["trials"] = P.at("trials");
      result["pass"] = r < Th.at("tolerance").get<double>();
    } else if (name == "spectrum") {
      std::optional<int> k;
      if (!P.at("k").is_null()) {
        if (!P.at("k").is_number_integer()) throw ConfigError("parameters.k must be an integer");
        k = P.at("k").get<int>();
      }
      const ToeplitzOperator T = assemble_toeplitz(*sigma, F, grid, P.at("cap").get<Eigen::Index>());
      const SpectrumReport s = spectrum(T, k);
      result = report::to_json(s);
      result["eps_rank"] = s.eps_rank(Th.at("eps"));
      out.tables.emplace_back("", report::to_csv(s));
    } else if (name == "trace_check") {
      const ToeplitzOperator T = assemble_toeplitz(*sigma, F, grid, P.at("cap").get<Eigen::Index>());
      const TraceCheck t = trace_identity_check(T, *sigma, F, grid);
      result["lhs"] = report::number(t.lhs);
      result["rhs"] = report::number(t.rhs);
      result["difference"] = report::number(std::fabs(t.lhs - t.rhs));
      result["pass"] = std::fabs(t.lhs - t.rhs) < Th.at("tolerance").get<double>();
    } else if (name == "berezin_transform") {
      const std::vector<PhasePoint> probes = default_probes(grid, P.at("stride").get<std::size_t>());
      const BerezinProfile p = berezin_transform(*sigma, F, grid, probes);
      result = report::to_json(p);
      out.tables.emplace_back("", report::to_csv(p));
    } else if (name == "thinness_report") {
      ThinnessOptions to;
      to.theta = Th.at("theta");
      to.margin = Th.at("margin");
      to.stride = P.at("stride").get<std::size_t>();
      to.steps = P.at("steps").get<int>();
      const DecayReport d = thinness_report(*sigma, F, grid, numbers_of(P.at("R_list"), "parameters.R_list"), to);
      result = report::to_json(d);
      add_schedules(out, d);
    } else if (name == "schur_condition") {
      const double s = P.at("weight_exponent");
      const Geometry g = grid.geometry();
      const PhasePoint e = grid.origin();
      const SchurResult r = schur_condition(
          F, grid, [&](const PhasePoint& x) { return std::pow(1.0 + distance(x, e, g), s); }, P.at("R"));
      result["M_estimate"] = report::number(r.M_estimate);
      result["M_min"] = report::number(r.M_min);
      result["tail_sup"] = report::number(r.tail_sup);
    } else if (name == "kernel_decay_profile") {
      KernelDecayOptions ko;
      ko.bin_width = P.at("bin_width");
      ko.threshold = Th.at("threshold");
      const DecayReport d = kernel_decay_profile(F, grid, std::nullopt, ko);
      result = report::to_json(d);
      out.tables.emplace_back("", report::to_csv(d));
    } else if (name == "conjugation_residual") {
      result["residual"] = report::number(conjugation_residual(*sigma, F, grid, F.invariant_element(P.at("shift")), P.at("interior_margin")));
    } else if (name == "ordering_residual") {
      const Symbol rho = translate_symbol(*sigma, F.invariant_element(P.at("rho_shift")), grid);
      const OrderingResult o = ordering_residual(*sigma, rho, F, grid);
      result["ordering"] = report::number(o.ordering);
      result["subadditivity"] = report::number(o.subadditivity);
    } else if (name == "sup_translates_select") {
      std::vector<double> shifts;
      if (P.at("shifts").is_null()) {
        for (int i = 1; i <= 8; ++i) shifts.push_back(i);
      } else {
        shifts = numbers_of(P.at("shifts"), "parameters.shifts");
      }
      const std::vector<GroupElement> candidates = invariant_elements(F, shifts);
      const std::vector<PhasePoint> probes = default_probes(grid, P.at("probe_stride").get<std::size_t>());
      SupOptions so;
      so.stages = P.at("stages").get<int>();
      so.budget_radius = get_number(P, "budget_radius", 1.0, "parameters");
      result = report::to_json(sup_translates_select(*sigma, F, grid, candidates, probes, so));
    } else if (name == "uncertainty_constant" || name == "l1_symbol_bound") {
      UncertaintyOptions uo;
      uo.trials = P.at("trials").get<int>();
      uo.seed = c.seed;
      uo.trial_margin = P.at("trial_margin");
      uo.parseval_tolerance = Th.at("parseval_tolerance");
      UncertaintyResult u;
      if (name == "l1_symbol_bound") {
        u = l1_symbol_bound(*sigma, F, grid, uo);
      } else {
        std::vector<HilbertVector> witnesses;
        if (!P.at("witness_box").is_null()) {
          const std::vector<double> box = numbers_of(P.at("witness_box"), "parameters.witness_box");
          if (box.size() != 2 || !(box[0] < box[1])) throw ConfigError("parameters.witness_box must be [lo, hi] with lo < hi");
          HilbertVector f(F.lattice());
          for (std::size_t i = 0; i < f.size(); ++i) {
            const double x = F.lattice().x(i);
            if (x >= box[0] - 1e-12 && x < box[1] - 1e-12) f[i] = 1.0;
          }
          if (!(f.norm() > 0.0)) throw InvalidArgument("witness_box holds no lattice samples");
          witnesses.push_back(f.scaled(1.0 / f.norm()));
        }
        u = uncertainty_constant(*sigma, F, grid, uo, witnesses);
      }
      result = report::to_json(u);
    } else if (name == "translate_gram") {
      std::vector<GroupElement> hs(static_cast<std::size_t>(P.at("count").get<int>()), F.invariant_element(P.at("step")));
      if (P.at("duplicate").get<bool>() && hs.size() >= 2) hs[1] = identity_element(grid.geometry());
      const TranslateGram tg = translate_gram(F, grid, F.window(), hs);
      result["min_eigenvalue"] = report::number(tg.min_eigenvalue);
      result["determinant"] = report::number(tg.determinant);
      result["max_truncated_fraction"] = report::number(tg.max_truncated_fraction);
    } else if (name == "export_matrix") {
      const ToeplitzOperator T = assemble_toeplitz(*sigma, F, grid, P.at("cap").get<Eigen::Index>());
      result["dimension"] = T.dimension();
      result["magic"] = report::hex64(kMatrixMagic);
      out.matrix = T.matrix;
    } else {
      throw ConfigError("operation " + name + " is not runnable");
    }
  }
  out.document = {{"provenance", provenance}, {"result", result}};
  return out;
}

namespace {

std::string stem(const ExperimentConfig& c) {
  return (std::filesystem::path(c.output_dir) / (c.operation + "-" + c.hash())).string();
}

}  // namespace

std::vector<std::string> write_run_outputs(const ExperimentConfig& c, const ExperimentResult& r) {
  std::vector<std::string> paths;
  const std::string base = stem(c);
  report::write_atomic(base + ".json", r.document.dump(2) + "\n");
  paths.push_back(base + ".json");
  for (const auto& [tag, body] : r.tables) {
    const std::string p = base + (tag.empty() ? "" : "-" + tag) + ".csv";
    report::write_atomic(p, body);
    paths.push_back(p);
  }
  if (r.matrix) {
    export_matrix(*r.matrix, base + ".bin");
    paths.push_back(base + ".bin");
  }
  return paths;
}

std::vector<std::string> write_emit_outputs(const ExperimentConfig& c, const ExperimentResult& r) {
  if (!operation_info(c.operation).schedule) throw ConfigError("emit needs a schedule operation, not " + c.operation);
  if (r.schedules.empty() || r.document.at("result").at("schedule").empty()) throw ConfigError("emit: the schedule is empty");
  std::vector<std::string> paths;
  const std::string base = stem(c);
  for (const auto& [name, body] : r.schedules) {
    std::string safe = name;
    for (char& ch : safe) {
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '.') ch = '_';
    }
    const std::string p = base + "-" + safe + ".csv";
    report::write_atomic(p, body);
    paths.push_back(p);
  }
  report::write_atomic(base + "-schedules.json", r.document.dump(2) + "\n");
  paths.push_back(base + "-schedules.json");
  return paths;
}

}  // namespace berezin
