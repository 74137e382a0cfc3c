// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include "berezin/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "berezin/errors.hpp"

namespace berezin::report {

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace {

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json point(const PhasePoint& p) { return Json::array({number(p.first), number(p.second)}); }

Json pairs(const std::vector<std::pair<double, double>>& v) {
  Json a = Json::array();
  for (const auto& [x, y] : v) a.push_back(Json::array({number(x), number(y)}));
  return a;
}

}  // namespace

Json to_json(const GridExtent& extent) {
  return std::visit(
      [](const auto& e) -> Json {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, FiniteExtent>) {
          return {{"kind", "finite_gabor"}, {"N", e.N}};
        } else if constexpr (std::is_same_v<E, PlaneExtent>) {
          return {{"kind", "plane"}, {"t_half", e.t_half}, {"w_half", e.w_half}, {"dt", e.dt}, {"dw", e.dw}};
        } else {
          return {{"kind", "affine"}, {"a_min", e.a_min}, {"a_max", e.a_max}, {"n_scales", e.n_scales},
                  {"b_half", e.b_half}, {"n_shifts", e.n_shifts}};
        }
      },
      extent);
}

Json to_json(const QuadGrid& grid) {
  return {{"geometry", grid.geometry().name()},
          {"extent", to_json(grid.extent())},
          {"points", grid.size()},
          {"fingerprint", hex64(grid.fingerprint())}};
}

Json to_json(const SignalLattice& lattice) {
  return {{"kind", lattice.kind == SignalLattice::Kind::Cyclic ? "cyclic" : "line"},
          {"n", lattice.n},
          {"step", lattice.step}};
}

Json to_json(const FrameFamily& F) {
  return {{"window", F.window_name()},
          {"window_hash", hex64(vector_hash(F.window()))},
          {"normalization", to_string(F.normalization())},
          {"pre_normalization_value", number(F.pre_normalization_value())},
          {"lattice", to_json(F.lattice())}};
}

Json to_json(const DecayReport& r) {
  Json j;
  j["quantity"] = r.quantity;
  j["parameter"] = r.parameter;
  j["schedule"] = pairs(r.schedule);
  Json series = Json::object();
  for (const Series& s : r.series) series[s.name] = numbers(s.values);
  j["series"] = series;
  j["verdict"] = to_string(r.verdict);
  j["rate"] = r.rate ? number(*r.rate) : Json(nullptr);
  Json th = Json::object();
  for (const auto& [k, v] : r.thresholds) th[k] = number(v);
  j["thresholds"] = th;
  Json sv = Json::object();
  for (const auto& [k, v] : r.sub_verdicts) sv[k] = v;
  j["sub_verdicts"] = sv;
  return j;
}

Json to_json(const BerezinProfile& p) {
  Json probes = Json::array();
  for (const PhasePoint& x : p.probes) probes.push_back(point(x));
  return {{"window", p.window_name},
          {"grid_fingerprint", hex64(p.grid_fingerprint)},
          {"probes", probes},
          {"values", numbers(p.values)},
          {"radial_envelope", pairs(p.radial_envelope)}};
}

Json to_json(const SpectrumReport& s) {
  return {{"kind", s.kind},
          {"full", s.full},
          {"converged", s.converged},
          {"trace", number(s.trace)},
          {"operator_norm", number(s.operator_norm)},
          {"values", numbers(s.values)}};
}

Json to_json(const UncertaintyResult& u) {
  Json j;
  j["c_estimate"] = number(u.c_estimate);
  j["top_sigma_eigenvalue"] = number(u.top_sigma_eigenvalue);
  j["verification"] = number(u.verification);
  j["witness_value"] = u.witness_value ? number(*u.witness_value) : Json(nullptr);
  j["frame_residual"] = number(u.frame_residual);
  j["frame_lower_bound"] = number(u.frame_lower_bound);
  j["frame_caveat"] = u.frame_caveat;
  j["trials"] = u.trials;
  j["seed"] = u.seed;
  j["converged"] = u.converged;
  if (u.l1_norm) j["l1_norm"] = number(*u.l1_norm);
  if (u.l1_bound) j["l1_bound"] = number(*u.l1_bound);
  return j;
}

Json to_json(const GroupElement& h) {
  Json j = {{"first", number(h.first)}, {"second", number(h.second)}};
  if (h.kind != GeometryKind::AffineHalfPlane) j["phase"] = Json::array({number(h.phase.real()), number(h.phase.imag())});
  return j;
}

Json to_json(const SupResult& s) {
  Json stages = Json::array();
  for (const SupStage& st : s.stages) {
    stages.push_back({{"k", st.k},
                      {"R", number(st.R)},
                      {"m", st.m},
                      {"bound", number(st.bound)},
                      {"threshold", number(st.threshold)},
                      {"rejected_by_budget", st.rejected_by_budget}});
  }
  Json products = Json::array();
  for (const GroupElement& h : s.products) products.push_back(to_json(h));
  return {{"selected", s.selected},
          {"stages", stages},
          {"products", products},
          {"rho_provenance", s.rho.provenance()},
          {"rho_sup", number(s.rho.sup_bound())}};
}

std::string to_csv(const DecayReport& r) {
  std::string out = r.parameter + ",value";
  for (const Series& s : r.series) out += "," + s.name;
  out += "\n";
  for (std::size_t i = 0; i < r.schedule.size(); ++i) {
    out += format_double(r.schedule[i].first) + "," + format_double(r.schedule[i].second);
    for (const Series& s : r.series) out += "," + (i < s.values.size() ? format_double(s.values[i]) : std::string());
    out += "\n";
  }
  return out;
}

std::string to_csv(const BerezinProfile& p) {
  std::string out = "r,envelope\n";
  for (const auto& [r, v] : p.radial_envelope) out += format_double(r) + "," + format_double(v) + "\n";
  return out;
}

std::string to_csv(const SpectrumReport& s) {
  std::string out = s.kind == "singular_values" ? "index,singular_value\n" : "index,eigenvalue\n";
  for (std::size_t i = 0; i < s.values.size(); ++i) out += std::to_string(i) + "," + format_double(s.values[i]) + "\n";
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
    if (ec) throw ResourceError("cannot create directory " + p.parent_path().string() + ": " + ec.message());
  }
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ResourceError("cannot open " + tmp + " for writing");
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os) throw ResourceError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, p, ec);
  if (ec) throw ResourceError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace berezin::report
