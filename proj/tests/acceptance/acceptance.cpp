// Copyright 2026 The berezin-lab Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance harness. Prints one PASS/FAIL line per criterion; exits 1 when
// any selected criterion fails.
//
//   acceptance [--criterion N]... [--out DIR]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "CLI11.hpp"

#include "berezin/analysis.hpp"
#include "berezin/berezin.hpp"
#include "berezin/experiment.hpp"
#include "berezin/operators.hpp"
#include "berezin/symbols.hpp"

using namespace berezin;
using report::Json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string g3(double v) { return fmt("%.3g", v); }

FrameFamily random_finite(int N, std::mt19937_64& rng) {
  return make_finite_gabor(random_unit_vector(SignalLattice::cyclic(N), rng));
}

Symbol random_symbol(const QuadGrid& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> s(g.size());
  for (double& v : s) v = u(rng);
  return Symbol(g, std::move(s), "random");
}

Outcome parseval_exactness() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int N : {2, 4, 8, 16, 64}) {
    const QuadGrid g = finite_gabor_grid(N);
    for (int w = 0; w < 20; ++w) {
      worst = std::max(worst, frame_operator_residual(random_finite(N, rng), g, 5, 1000 + w));
    }
  }
  return {worst < 1e-10, "max residual " + g3(worst) + " over N in {2,4,8,16,64}, 20 windows each"};
}

Outcome norm_bound() {
  std::mt19937_64 rng(102);
  const QuadGrid g = finite_gabor_grid(16);
  double worst = -1e300;
  for (int t = 0; t < 100; ++t) {
    const Symbol s = random_symbol(g, rng);
    const ToeplitzOperator T = assemble_toeplitz(s, random_finite(16, rng), g);
    worst = std::max(worst, spectrum(T, 1).operator_norm - s.sup_bound());
  }
  return {worst <= 1e-10, "max ||T|| - sup sigma = " + g3(worst) + " over 100 symbols, N=16"};
}

Outcome trace_identity() {
  std::mt19937_64 rng(102);
  const QuadGrid g = finite_gabor_grid(16);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Symbol s = random_symbol(g, rng);
    const FrameFamily F = random_finite(16, rng);
    const TraceCheck c = trace_identity_check(assemble_toeplitz(s, F, g), s, F, g);
    worst = std::max(worst, std::fabs(c.lhs - c.rhs));
  }
  double worst_set = 0.0;
  for (int t = 0; t < 20; ++t) {
    const FrameFamily F = random_finite(16, rng);
    std::uniform_int_distribution<int> u(0, 15);
    BallUnion b;
    for (int k = 0; k < 4; ++k) {
      b.centers.push_back({double(u(rng)), double(u(rng))});
      b.radii.push_back(1.0 + u(rng) % 3);
    }
    const Symbol E = indicator(g, SetSpec(b, g.geometry()));
    const double tr = assemble_toeplitz(E, F, g).matrix.trace().real();
    worst_set = std::max(worst_set, std::fabs(tr - l1_norm(E, g)));
  }
  return {worst < 1e-8 && worst_set < 1e-8,
          "max |tr T - sum| = " + g3(worst) + ", max |tr T_1E - mu(E)| = " + g3(worst_set)};
}

Outcome berezin_consistency() {
  std::mt19937_64 rng(104);
  const QuadGrid g = finite_gabor_grid(16);
  const FrameFamily F = random_finite(16, rng);
  const Symbol s = random_symbol(g, rng);
  std::vector<PhasePoint> probes;
  std::uniform_int_distribution<int> u(0, 15);
  for (int i = 0; i < 20; ++i) probes.push_back({double(u(rng)), double(u(rng))});
  const std::vector<double> kernel_sum = berezin_values(s, F, g, probes);
  const ToeplitzOperator T = assemble_toeplitz(s, F, g);
  double worst = 0.0;
  for (std::size_t y = 0; y < probes.size(); ++y) {
    const HilbertVector k = F.vector_at(probes[y]);
    Eigen::VectorXcd v(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) v[i] = k[i];
    worst = std::max(worst, std::fabs(v.dot(T.matrix * v).real() - kernel_sum[y]));
  }
  return {worst < 1e-8, "max |kernel sum - <T k_y, k_y>| = " + g3(worst) + " at 20 probes, N=16"};
}

Outcome covariance() {
  std::mt19937_64 rng(105);
  const QuadGrid g = finite_gabor_grid(8);
  double worst = 0.0;
  std::uniform_int_distribution<int> q(1, 7);
  for (int t = 0; t < 10; ++t) {
    const FrameFamily F = random_finite(8, rng);
    worst = std::max(worst, conjugation_residual(random_symbol(g, rng), F, g, F.invariant_element(q(rng))));
  }
  return {worst < 1e-8, "max conjugation residual " + g3(worst) + " over 10 (sigma, q-shift) pairs, N=8"};
}

// Criterion 6 goes through experiment configs so criterion 12 can compare
// the written files.
std::vector<Json> thin_configs(const std::string& out) {
  Json centers = Json::array(), radii = Json::array();
  for (int n = 1; n <= 10; ++n) {
    centers.push_back({n * n, 0});
    radii.push_back(1.0 / n);
  }
  const Json balls{{"kind", "ball_union"}, {"centers", centers}, {"radii", radii}};
  const Json strip{{"kind", "strip"}, {"axis", "second"}, {"center", 0}, {"half_width", 1}};
  std::vector<Json> cfgs;
  for (double T : {4.0, 8.0, 16.0}) {
    const Json geo{{"kind", "plane"}, {"t_half", T}, {"w_half", T}, {"dt", 0.25}, {"dw", 0.25}};
    const Json base{{"geometry", geo}, {"lattice", {{"margin", 2}}}, {"seed", 7}, {"output_dir", out}};
    Json u = base;
    u["window"] = "gaussian";
    u["symbol"] = balls;
    u["operation"] = "uncertainty_constant";
    cfgs.push_back(u);
    Json th = base;
    th["window"] = "gaussian";
    th["symbol"] = balls;
    th["operation"] = "thinness_report";
    cfgs.push_back(th);
    Json sc = base;
    sc["operation"] = "strip_counterexample";
    cfgs.push_back(sc);
    Json su = base;
    su["window"] = "box";
    su["symbol"] = strip;
    su["operation"] = "uncertainty_constant";
    su["parameters"] = {{"witness_box", {0, 1}}};
    cfgs.push_back(su);
  }
  const Json geo4{{"kind", "plane"}, {"t_half", 4}, {"w_half", 4}, {"dt", 0.25}, {"dw", 0.25}};
  cfgs.push_back(Json{{"geometry", geo4}, {"window", "gaussian"}, {"symbol", balls}, {"seed", 7},
                      {"operation", "compactness_proxy"}, {"output_dir", out}});
  cfgs.push_back(Json{{"geometry", geo4}, {"window", "box"}, {"symbol", strip}, {"seed", 7},
                      {"operation", "compactness_proxy"}, {"output_dir", out}});
  return cfgs;
}

struct ThinRun {
  std::vector<Json> documents;
  std::vector<std::string> paths;
};

ThinRun run_thin(const std::string& out) {
  ThinRun r;
  for (const Json& j : thin_configs(out)) {
    const ExperimentConfig c = parse_config(j);
    const ExperimentResult res = run_experiment(c);
    r.documents.push_back(res.document.at("result"));
    for (const std::string& p : write_run_outputs(c, res)) r.paths.push_back(p);
  }
  return r;
}

double num(const Json& v) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  }
  return v.get<double>();
}

std::string sub_verdict(const Json& d, const std::string& name) {
  const Json& s = d.at("sub_verdicts");
  return s.contains(name) ? s.at(name).get<std::string>() : "";
}

Outcome thin_discrimination(const ThinRun& run) {
  bool ok_c = true, ok_strip = true;
  std::string c_list, verdicts, strip_list;
  std::string final_verdict;
  for (int i = 0; i < 3; ++i) {
    const Json& u = run.documents[4 * i];
    const Json& th = run.documents[4 * i + 1];
    const Json& sc = run.documents[4 * i + 2];
    const Json& su = run.documents[4 * i + 3];
    const double c = num(u.at("c_estimate"));
    ok_c = ok_c && c >= 0.05;
    c_list += (i ? ", " : "") + fmt("%.4f", c);
    final_verdict = th.at("verdict");
    verdicts += (i ? ", " : "") + final_verdict;
    const double outside = num(sc.at("max_outside"));
    const double cs = num(su.at("c_estimate"));
    const double witness = num(su.at("witness_value"));
    ok_strip = ok_strip && outside < 1e-12 && cs < 1e-6;
    strip_list += (i ? "; " : "") + std::string("max_outside ") + g3(outside) + " c " + fmt("%.4f", cs) +
                  " witness " + g3(witness);
  }
  const Json& ball = run.documents[12];
  const Json& strip = run.documents[13];
  std::string ranks, strip_ranks;
  bool ok_rank = true;
  double prev = -1;
  for (const Json& p : ball.at("schedule")) {
    const double r = num(p.at(1));
    if (prev >= 0) ok_rank = ok_rank && r - prev <= 1.0;
    prev = r;
    ranks += (ranks.empty() ? "" : ", ") + fmt("%.0f", r);
  }
  for (const Json& p : strip.at("schedule")) strip_ranks += (strip_ranks.empty() ? "" : ", ") + fmt("%.0f", num(p.at(1)));
  const bool ok_thin = final_verdict == "decaying";
  std::ostringstream d;
  d << "(a) T=4,8,16: thinness " << verdicts << " (judged at T=16); eps_rank(0.1) " << ranks << " ("
    << sub_verdict(ball, "compactness") << "); c " << c_list << " (continuum bound e^-pi = "
    << fmt("%.4f", std::exp(-M_PI)) << ")\n      (b) strip: " << strip_list << "; eps_rank " << strip_ranks
    << " (" << sub_verdict(strip, "compactness") << ")";
  return {ok_thin && ok_rank && ok_c && ok_strip, d.str()};
}

Outcome admissibility() {
  const SignalLattice lat = SignalLattice::line_default();
  const HilbertVector hat = normalize_admissible(builtin_window("mexican_hat", lat));
  const double c = 0.5 * (admissibility_constant(hat, 1) + admissibility_constant(hat, -1));
  bool rejected = false;
  try {
    admissibility_constant(builtin_window("gaussian", lat), 1);
  } catch (const NotAdmissible&) {
    rejected = true;
  }
  return {std::fabs(c - 1.0) <= 1e-6 && rejected,
          "normalized mexican_hat constant " + fmt("%.9f", c) + "; gaussian " + (rejected ? "rejected" : "accepted")};
}

Outcome b1w_convergence() {
  const HilbertVector haar = builtin_window("haar", SignalLattice::line_default());
  const std::vector<double> A{4, 16, 64, 256, 1024};
  const DecayReport d = b1w_integral(haar, A, 0.5);
  const double inc = d.series.front().values.back();
  const double slope = b1w_slope(haar, 4, 256);
  return {inc < 1e-3 && slope <= -1.4, "increment A=2^8..2^10 " + fmt("%.4f", inc) + " (threshold 1e-3, expected " +
                                           "a^-3/2 tail 0.0625); slope " + fmt("%.3f", slope) + " (<= -1.4)"};
}

Outcome holder_moment() {
  const SignalLattice lat = SignalLattice::line_default();
  const double s = lat.step;
  const std::vector<double> h{1.0 / 16, 0.25, 1.0};
  const double box = holder_modulus(builtin_window("box", lat), 1.0, h);
  const double haar = holder_modulus(builtin_window("haar", lat), 1.0, h);
  const MomentResult m = moment_check(builtin_window("haar", lat), 1.0);
  const bool ok = std::fabs(box - 2) <= 2 * s && std::fabs(haar - 4) <= 4 * s && std::abs(m.mean) <= 1e-10 &&
                  std::fabs(m.moment - 0.5) <= s;
  return {ok, "C(box) " + fmt("%.6f", box) + ", C(haar) " + fmt("%.6f", haar) + ", haar mean " + g3(std::abs(m.mean)) +
                  ", moment " + fmt("%.6f", m.moment) + " (step " + g3(s) + ")"};
}

Outcome translate_independence() {
  const QuadGrid p = plane_grid(8, 8, 0.25, 0.25);
  const FrameFamily G = make_plane_gabor(builtin_window("gaussian", matched_lattice(p)), p, "gaussian");
  const TranslateGram tg = translate_gram(G, p, G.window(), std::vector<GroupElement>(5, G.invariant_element(0.5)));
  const TranslateGram dup =
      translate_gram(G, p, G.window(), std::vector<GroupElement>(5, identity_element(p.geometry())));
  return {tg.min_eigenvalue > 1e-6 && std::fabs(dup.determinant) < 1e-10,
          "lambda_min " + g3(tg.min_eigenvalue) + " (5 shifts of 0.5); duplicated det " + g3(dup.determinant)};
}

Outcome sup_algorithm() {
  const int N = 16;
  const QuadGrid g = finite_gabor_grid(N);
  const Geometry geo = g.geometry();
  const FrameFamily F = make_finite_gabor(builtin_window("gaussian", SignalLattice::cyclic(N)), "gaussian");
  const Symbol point = indicator(g, SetSpec(BallUnion{{{0, 0}}, {0.5}}, geo));
  std::vector<GroupElement> cand;
  for (int s = 1; s < N; ++s) cand.push_back(F.invariant_element(s));
  bool ok = true;
  std::string bounds;
  for (int K = 1; K <= 4; ++K) {
    SupOptions opt;
    opt.stages = K;
    opt.budget_radius = std::numeric_limits<double>::infinity();
    const SupResult r = sup_translates_select(point, F, g, cand, default_probes(g, 1), opt);
    for (const SupStage& st : r.stages) ok = ok && st.bound <= 3.0 * std::exp2(-st.k);
    std::vector<double> oracle(g.size(), 0.0);
    for (unsigned mask = 0; mask < (1u << K); ++mask) {
      GroupElement h = identity_element(geo);
      for (int k = 0; k < K; ++k) {
        if (mask & (1u << k)) h = compose(cand[r.selected[k]], h, geo);
      }
      const Symbol t = translate_symbol(point, h, g);
      for (std::size_t j = 0; j < g.size(); ++j) oracle[j] = std::max(oracle[j], t[j]);
    }
    for (std::size_t j = 0; j < g.size(); ++j) ok = ok && oracle[j] == r.rho[j];
    if (K == 4) {
      for (const SupStage& st : r.stages) bounds += (bounds.empty() ? "" : ", ") + g3(st.bound);
    }
  }
  return {ok, "K=1..4 power-set identity checked; K=4 stage bounds " + bounds};
}

std::map<std::string, std::string> snapshot(const std::vector<std::string>& paths) {
  std::map<std::string, std::string> out;
  for (const std::string& p : paths) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    out[p] = ss.str();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> selected;
  std::string out = "acceptance-out";
  app.add_option("--criterion", selected, "criterion number (repeatable)")->check(CLI::Range(1, 12));
  app.add_option("--out", out, "output directory for the criterion 6 and 12 runs");
  CLI11_PARSE(app, argc, argv);
  if (selected.empty()) {
    for (int i = 1; i <= 12; ++i) selected.push_back(i);
  }

  std::optional<ThinRun> thin;
  std::map<std::string, std::string> thin_bytes;
  auto ensure_thin = [&] {
    if (!thin) {
      thin = run_thin(out);
      thin_bytes = snapshot(thin->paths);
    }
  };

  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria{
      {1, {"Parseval exactness", parseval_exactness}},
      {2, {"norm bound", norm_bound}},
      {3, {"trace identity", trace_identity}},
      {4, {"Berezin consistency", berezin_consistency}},
      {5, {"covariance", covariance}},
      {6, {"thin vs non-thin", [&] {
             ensure_thin();
             return thin_discrimination(*thin);
           }}},
      {7, {"admissibility", admissibility}},
      {8, {"B1w convergence", b1w_convergence}},
      {9, {"Holder and moments", holder_moment}},
      {10, {"translate independence", translate_independence}},
      {11, {"translate-supremum selection", sup_algorithm}},
      {12, {"determinism", [&] {
              ensure_thin();
              const ThinRun again = run_thin(out);
              const auto bytes = snapshot(again.paths);
              const bool same = again.paths == thin->paths && bytes == thin_bytes;
              return Outcome{same, std::to_string(bytes.size()) + " files from the criterion 6 configs " +
                                       (same ? "byte-identical" : "differ") + " on rerun"};
            }}},
  };

  int failures = 0;
  for (int id : selected) {
    const auto& [name, fn] = criteria.at(id);
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %-4s %-28s %6.1f s  %s\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), secs,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
