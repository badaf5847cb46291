// SPDX-FileCopyrightText: 2026 The kdv5lab Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Scenario runners. Each reads a validated config document, calls the library
// checks, writes its CSV series and returns the diagnostic reports; run_scenario
// adds the reports and the manifest.

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kdv5/analysis/commutators.hpp"
#include "kdv5/analysis/conservation.hpp"
#include "kdv5/analysis/estimates.hpp"
#include "kdv5/analysis/modified_energy.hpp"
#include "kdv5/cli/config.hpp"
#include "kdv5/cli/output.hpp"
#include "kdv5/counterexample/experiments.hpp"
#include "kdv5/counterexample/scaling.hpp"

#ifndef KDV5_VERSION
#define KDV5_VERSION "unknown"
#endif

namespace kdv5::cli {

using Logger = std::function<void(const std::string&)>;

struct ScenarioContext {
  const json& doc;
  OutputSet& out;
  Logger log;
};

namespace detail {

inline TorusGrid grid_of(const json& doc) {
  return TorusGrid(doc.at("grid").at("length").get<double>(), doc.at("grid").at("points").get<std::size_t>());
}

inline SolverConfig solver_of(const json& doc) {
  const auto& s = doc.at("solver");
  SolverConfig c;
  c.dt = s.at("dt").get<double>();
  c.t_end = s.at("t_end").get<double>();
  c.record_every = s.value("record_every", 1);
  return c;
}

/// A exp(-(x/w)^2) cos(x/w): smooth, localized, with all harmonics present.
inline RealField profile_of(const json& doc, const TorusGrid& g) {
  const double a = doc.at("data").at("amplitude").get<double>();
  const double w = doc.at("data").at("width").get<double>();
  return RealField::from_function(g, [a, w](double x) { return a * std::exp(-(x / w) * (x / w)) * std::cos(x / w); });
}

inline CounterexampleParams counterexample_of(const json& doc) {
  const auto& c = doc.at("counterexample");
  CounterexampleParams cp;
  cp.lambda = c.at("lambdas").front().get<double>();
  cp.s = c.value("s", cp.s);
  cp.delta = c.value("delta", cp.delta);
  cp.Lambda_amp = c.value("Lambda", cp.Lambda_amp);
  cp.envelope_points = c.value("envelope_points", cp.envelope_points);
  return cp;
}

inline std::vector<double> lambdas_of(const json& doc) {
  return doc.at("counterexample").at("lambdas").get<std::vector<double>>();
}

/// t_end * i / n for i = 0..n.
inline std::vector<double> times_of(const json& doc) {
  const auto& c = doc.at("counterexample");
  const double T = c.at("t_end").get<double>();
  const int n = c.at("time_points").get<int>();
  std::vector<double> t;
  for (int i = 0; i <= n; ++i) t.push_back(T * i / n);
  return t;
}

inline std::uint64_t seed_of(const json& doc) { return doc.at("seed").get<std::uint64_t>(); }

inline std::string num_label(double v) { return std::isinf(v) ? "inf" : json(v).dump(); }

}  // namespace detail

/// Range checks that need the library's own validators (equation coefficients,
/// the admissible delta for a given s, lambda sweeps of at least two values).
/// Failures are reported as schema violations of the relevant field.
inline void check_semantics(const json& doc, const std::string& scenario) {
  auto guard = [](const std::string& field, auto&& fn) {
    try {
      fn();
    } catch (const SchemaError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw SchemaError(field, e.what());
    }
  };
  if (doc.contains("equation")) guard("equation", [&] { equation_of(doc).validate(); });
  if (doc.contains("grid")) guard("grid", [&] { detail::grid_of(doc); });
  const bool sweep = scenario == "illposed" || scenario == "approx-error" || scenario == "lowbounds";
  if (sweep) {
    guard("counterexample", [&] { detail::counterexample_of(doc).validate(); });
    if (detail::lambdas_of(doc).size() < 2) throw SchemaError("counterexample.lambdas", "need at least two values");
  }
  if (scenario == "lemma61" && detail::lambdas_of(doc).size() < 2)
    throw SchemaError("counterexample.lambdas", "need at least two values");
  if (scenario == "energy" && detail::grid_of(doc).points() < 32)
    throw SchemaError("grid.points", "need at least 32 points");
  if (scenario == "estimates" && doc.at("diagnostic").at("s").get<double>() <= 2.5)
    throw SchemaError("diagnostic.s", "the refined Strichartz check needs s > 5/2");
  if (scenario == "energy" && doc.at("diagnostic").at("s").get<double>() < 1.0)
    throw SchemaError("diagnostic.s", "must be >= 1");
}

inline std::vector<DiagnosticReport> run_solve(ScenarioContext& ctx) {
  const auto p = equation_of(ctx.doc);
  const double s = ctx.doc.at("diagnostic").at("s").get<double>();
  const std::vector<Probe<SpectralField>> probes{
      {"L2", [](const SpectralField& F) { return F.l2_norm(); }},
      {"Hs", [s](const SpectralField& F) { return sobolev_norm(F, Hs(s)); }},
      {"sup", [](const SpectralField& F) { return sup_norm(F); }}};
  const auto g = detail::grid_of(ctx.doc);
  const auto tr = solve(detail::profile_of(ctx.doc, g), p, detail::solver_of(ctx.doc), probes);
  CsvTable csv({"t", "L2", "Hs", "sup"});
  for (std::size_t i = 0; i < tr.size(); ++i) csv.add({tr.times[i], tr.at("L2")[i], tr.at("Hs")[i], tr.at("sup")[i]});
  ctx.out.write_csv("norms.csv", csv);
  DiagnosticReport rep;
  rep.name = "solve";
  rep.params = {{"s", s}, {"steps", tr.steps}};
  rep.values["L2_initial"] = tr.at("L2").front();
  rep.values["L2_final"] = tr.at("L2").back();
  rep.values["Hs_final"] = tr.at("Hs").back();
  rep.pass = !tr.aborted && std::isfinite(tr.at("Hs").back());
  if (tr.aborted) rep.flags.push_back(tr.message);
  rep.verdict = rep.pass ? "completed" : "aborted";
  return {rep};
}

inline std::vector<DiagnosticReport> run_conserve(ScenarioContext& ctx) {
  const auto g = detail::grid_of(ctx.doc);
  auto run = conservation_check(detail::profile_of(ctx.doc, g), equation_of(ctx.doc), detail::solver_of(ctx.doc),
                                ctx.doc.at("diagnostic").at("tolerance").get<double>());
  const auto& tr = run.trajectory;
  CsvTable csv({"t", "H0", "H1", "H2"});
  for (std::size_t i = 0; i < tr.size(); ++i) csv.add({tr.times[i], tr.at("H0")[i], tr.at("H1")[i], tr.at("H2")[i]});
  ctx.out.write_csv("hamiltonians.csv", csv);
  for (int i = 0; i < 3; ++i) {
    const std::string h = "H" + std::to_string(i);
    if (run.report.values.count("drift_" + h))
      ctx.log(h + " relative drift " + format_double(run.report.values.at("drift_" + h)));
  }
  return {run.report};
}

inline std::vector<DiagnosticReport> run_energy(ScenarioContext& ctx) {
  const auto& d = ctx.doc.at("diagnostic");
  auto run = modified_energy_check(equation_of(ctx.doc), d.at("s").get<double>(), detail::grid_of(ctx.doc),
                                   detail::solver_of(ctx.doc), d.at("samples").get<int>(), detail::seed_of(ctx.doc));
  CsvTable csv({"t", "E_s", "d3_sup", "E_s_refined", "d3_sup_refined"});
  const std::size_t n = std::min(run.coarse.size(), run.fine.size());
  for (std::size_t i = 0; i < n; ++i)
    csv.add({run.coarse.times[i], run.coarse.at("E_s")[i], run.coarse.at("d3_sup")[i], run.fine.at("E_s")[i],
             run.fine.at("d3_sup")[i]});
  ctx.out.write_csv("energy.csv", csv);
  ctx.log("a_s = " + format_double(run.report.values.at("a_s")));
  return {run.report};
}

inline std::vector<DiagnosticReport> run_illposed(ScenarioContext& ctx) {
  const auto p = equation_of(ctx.doc);
  const auto cp = detail::counterexample_of(ctx.doc);
  const auto times = detail::times_of(ctx.doc);
  const double dt = ctx.doc.at("counterexample").at("dt_max").get<double>();
  std::vector<SeparationCurve> curves;
  for (double lam : detail::lambdas_of(ctx.doc)) {
    ctx.log("separation at lambda = " + format_double(lam));
    curves.push_back(separation_curve(cp.with_lambda(lam), p, times, dt));
  }
  CsvTable sep({"lambda", "t", "sep_Hs", "envelope"}), init({"lambda", "initial_sep"}),
      norms({"lambda", "t", "L2_plus", "L2_minus"});
  for (const auto& c : curves) {
    init.add({c.lambda, c.initial_separation});
    for (std::size_t i = 0; i < c.times.size(); ++i) {
      sep.add({c.lambda, c.times[i], c.separation[i], c.envelope[i]});
      norms.add({c.lambda, c.times[i], c.l2_plus[i], c.l2_minus[i]});
    }
  }
  ctx.out.write_csv("separation.csv", sep);
  ctx.out.write_csv("initial_sep.csv", init);
  ctx.out.write_csv("norms.csv", norms);
  return {separation_report(curves, cp, p)};
}

inline std::vector<DiagnosticReport> run_approx_error(ScenarioContext& ctx) {
  const auto p = equation_of(ctx.doc);
  const auto cp = detail::counterexample_of(ctx.doc);
  const auto times = detail::times_of(ctx.doc);
  const auto lambdas = detail::lambdas_of(ctx.doc);
  const double dt = ctx.doc.at("counterexample").at("dt_max").get<double>();
  std::vector<ApproxErrorCurve> curves;
  for (double lam : lambdas) {
    ctx.log("distance to u_ap at lambda = " + format_double(lam));
    curves.push_back(approx_error_curve(cp.with_lambda(lam), p, times, dt));
  }
  CsvTable err({"lambda", "t", "error_Hs", "error_L2"});
  for (const auto& c : curves)
    for (std::size_t i = 0; i < c.times.size(); ++i) err.add({c.lambda, c.times[i], c.error_hs[i], c.error_l2[i]});
  ctx.out.write_csv("approx_error.csv", err);

  const double t_res = 0.5 * times.back();
  ctx.log("residual at t = " + format_double(t_res));
  auto res = residual_sweep(cp, p, lambdas, t_res);
  CsvTable rcsv({"lambda", "F1", "F2", "F3", "F4", "F5", "F6", "F_L2", "F_H1", "F_H2", "mismatch"});
  for (std::size_t i = 0; i < res.rows.size(); ++i) {
    const auto& r = res.rows[i];
    rcsv.add({lambdas[i], r.parts[0], r.parts[1], r.parts[2], r.parts[3], r.parts[4], r.parts[5], r.total,
              r.hs[0].second, r.hs[1].second, r.mismatch});
  }
  ctx.out.write_csv("residual.csv", rcsv);
  return {approx_error_report(curves, cp, p), res.report};
}

inline std::vector<DiagnosticReport> run_lowbounds(ScenarioContext& ctx) {
  const auto cp = detail::counterexample_of(ctx.doc);
  const int k_max = ctx.doc.at("diagnostic").at("k_max").get<int>();
  ctx.log("evolving the low part over " + std::to_string(detail::lambdas_of(ctx.doc).size()) + " lambdas");
  auto rep = lowbound_check(cp, equation_of(ctx.doc), k_max, detail::lambdas_of(ctx.doc),
                            ctx.doc.at("counterexample").at("t_end").get<double>());
  std::vector<std::string> header{"lambda"};
  for (int k = 0; k <= k_max; ++k) header.push_back("L2_k" + std::to_string(k));
  for (int k = 0; k <= k_max; ++k) header.push_back("Linf_k" + std::to_string(k));
  header.push_back("drift");
  CsvTable csv(header);
  for (const auto& s : rep.samples) {
    std::vector<double> row{s.at("lambda").get<double>()};
    for (double v : s.at("L2")) row.push_back(v);
    for (double v : s.at("Linf")) row.push_back(v);
    row.push_back(s.at("drift").get<double>());
    csv.add(std::move(row));
  }
  ctx.out.write_csv("lowbounds.csv", csv);
  return {rep};
}

inline std::vector<DiagnosticReport> run_lemma61(ScenarioContext& ctx) {
  const auto& c = ctx.doc.at("counterexample");
  auto rep = lemma61_report(c.at("s").get<double>(), c.at("delta").get<double>(), detail::lambdas_of(ctx.doc),
                            ctx.doc.at("diagnostic").at("tolerance").get<double>());
  const double ref = rep.values.at("reference");
  CsvTable csv({"lambda", "value", "value_alpha_pi_3", "reference", "relative_error"});
  for (const auto& s : rep.samples) {
    const double v = s.at("value").get<double>();
    csv.add({s.at("lambda").get<double>(), v, s.at("value_alpha_pi_3").get<double>(), ref, std::abs(v - ref) / ref});
  }
  ctx.out.write_csv("limit.csv", csv);
  ctx.log("extrapolated " + format_double(rep.values.at("estimate")) + " vs reference " + format_double(ref));
  return {rep};
}

inline std::vector<DiagnosticReport> run_scaling(ScenarioContext& ctx) {
  const auto g = detail::grid_of(ctx.doc);
  const auto cfg = detail::solver_of(ctx.doc);
  auto rep = scaling_check(detail::profile_of(ctx.doc, g), equation_of(ctx.doc), detail::lambdas_of(ctx.doc), cfg.t_end,
                           cfg.dt, ctx.doc.at("diagnostic").at("s").get<double>());
  CsvTable csv({"lambda", "flow_rel_diff", "l2_identity_error", "hs_identity_error"});
  for (const auto& s : rep.samples)
    csv.add({s.at("lambda").get<double>(), s.at("flow_rel_diff").get<double>(), s.at("l2_identity_error").get<double>(),
             s.at("hs_identity_error").get<double>()});
  ctx.out.write_csv("scaling.csv", csv);
  return {rep};
}

/// Commutator sweep, L2 balance law and the three dispersive ensembles. The
/// ensemble CSVs use the frequency centroid of each sample as lambda.
inline std::vector<DiagnosticReport> run_estimates(ScenarioContext& ctx) {
  const auto p = equation_of(ctx.doc);
  const double s = ctx.doc.at("diagnostic").at("s").get<double>();
  const int samples = ctx.doc.at("diagnostic").at("samples").get<int>();
  const std::uint64_t seed = detail::seed_of(ctx.doc);
  std::vector<DiagnosticReport> reports;

  ctx.log("commutator sweep");
  reports.push_back(commutator_sweep(3.0, 8, 512, derive_seed(seed, 0)));
  CsvTable comm({"lambda", "third_order", "second_order", "kato_ponce"});
  for (const auto& r : reports.back().samples)
    comm.add({r.at("n").get<double>(), r.at("third_order").get<double>(), r.at("second_order").get<double>(),
              r.at("kato_ponce").get<double>()});
  ctx.out.write_csv("commutators.csv", comm);

  reports.push_back(l2_identity_check(TorusGrid(2.0 * std::numbers::pi, 128), p, samples, derive_seed(seed, 1)));

  auto ensemble_csv = [&](const std::string& name, const DiagnosticReport& rep, std::vector<std::string> labels) {
    std::vector<std::string> header{"lambda"};
    for (auto& l : labels) header.push_back(std::move(l));
    CsvTable csv(header);
    for (const auto& r : rep.samples) {
      std::vector<double> row{r.at("centroid").get<double>()};
      if (r.contains("ratios"))
        for (double v : r.at("ratios")) row.push_back(v);
      else
        row.push_back(r.at("lhs").get<double>() / r.at("rhs").get<double>());
      csv.add(std::move(row));
    }
    ctx.out.write_csv(name, csv);
  };

  const std::vector<StrichartzTriple> triples{
      {0.6, 5.0, 10.0}, {0.5, 5.0, kInfinity}, {0.75, 4.0, kInfinity}, {0.0, kInfinity, 2.0}};
  auto cfg = strichartz_config();
  cfg.samples = samples;
  cfg.seed = derive_seed(seed, 2);
  ctx.log("Strichartz ensemble (" + std::to_string(samples) + " samples)");
  reports.push_back(strichartz_ensemble(triples, cfg, p.sign));
  std::vector<std::string> labels;
  for (const auto& t : triples)
    labels.push_back("ratio_a" + detail::num_label(t.alpha()) + "_q" + detail::num_label(t.q()) + "_r" +
                     detail::num_label(t.r()));
  ensemble_csv("strichartz.csv", reports.back(), labels);

  cfg = maximal_config();
  cfg.samples = samples;
  cfg.seed = derive_seed(seed, 3);
  ctx.log("maximal-function ensemble");
  reports.push_back(maximal_ensemble(default_diagnostics(cfg.grid), cfg, 0.1, p.sign));
  ensemble_csv("maximal.csv", reports.back(), {"ratio"});

  cfg = smoothing_config();
  cfg.samples = samples;
  cfg.seed = derive_seed(seed, 4);
  ctx.log("local smoothing ensemble");
  reports.push_back(smoothing_ensemble(p, s, default_diagnostics(cfg.grid), cfg));
  ensemble_csv("smoothing.csv", reports.back(), {"ratio", "ratio_phi_prime", "refined_ratio"});
  return reports;
}

inline const std::map<std::string, std::function<std::vector<DiagnosticReport>(ScenarioContext&)>>& runners() {
  static const std::map<std::string, std::function<std::vector<DiagnosticReport>(ScenarioContext&)>> r{
      {"solve", run_solve},         {"conserve", run_conserve},   {"energy", run_energy},
      {"illposed", run_illposed},   {"approx-error", run_approx_error}, {"lowbounds", run_lowbounds},
      {"lemma61", run_lemma61},     {"scaling", run_scaling},     {"estimates", run_estimates}};
  return r;
}

/// Fixed conventions recorded with every run.
inline json conventions() {
  return {{"h2_reading", kH2Reading},
          {"low_data_amplitude", "the low plateau carries the global Lambda: -Lambda omega lambda^-3"},
          {"seed_scheme", "per-ensemble seed = splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15)"},
          {"csv", "header row, first column t or lambda, %.17g, LF"}};
}

/// Run a validated scenario into `dir`. Runtime failures are recorded in the
/// manifest (status "failed") and rethrown.
inline json run_scenario(const std::string& scenario, const json& doc, const fs::path& dir, const Logger& log) {
  OutputSet out(dir);
  json manifest = {{"schema_version", 1},
                   {"tool", "kdv5lab"},
                   {"version", KDV5_VERSION},
                   {"scenario", scenario},
                   {"started_at", utc_timestamp()},
                   {"parameters", doc},
                   {"conventions", conventions()}};
  if (doc.contains("equation")) {
    const auto p = equation_of(doc);
    manifest["parameters"]["equation"]["resolved"] = {{"sign", p.sign}, {"c0", p.c0}, {"c1", p.c1}, {"c2", p.c2}};
  }
  auto finish = [&](const std::string& status) {
    manifest["finished_at"] = utc_timestamp();
    manifest["status"] = status;
    manifest["outputs"] = out.inventory();
    std::ofstream f(dir / "manifest.json", std::ios::binary | std::ios::trunc);
    f << manifest.dump(2) << "\n";
  };
  try {
    ScenarioContext ctx{doc, out, log};
    const auto reports = runners().at(scenario)(ctx);
    bool pass = true;
    manifest["reports"] = json::array();
    for (const auto& r : reports) {
      out.write_report(r);
      manifest["reports"].push_back({{"name", r.name}, {"pass", r.pass}, {"verdict", r.verdict}, {"flags", r.flags}});
      pass = pass && r.pass;
    }
    manifest["pass"] = pass;
    finish("ok");
  } catch (const std::exception& e) {
    manifest["pass"] = false;
    manifest["error"] = e.what();
    finish("failed");
    throw;
  }
  return manifest;
}

}  // namespace kdv5::cli
