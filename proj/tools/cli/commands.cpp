// Copyright 2026 The meanfield Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "meanfield/deterministic_flow.hpp"
#include "meanfield/error.hpp"
#include "meanfield/fokker_planck.hpp"
#include "meanfield/gaussian_closure.hpp"
#include "meanfield/mckean_vlasov.hpp"
#include "meanfield/particles.hpp"

namespace meanfield::cli {

namespace {

using nlohmann::ordered_json;

std::vector<OptionSpec> with_common(std::vector<OptionSpec> specs, const std::string& out_dir) {
  specs.push_back({"out_dir", out_dir, "relative output directory"});
  specs.push_back({"format", "csv", "tabular output format: csv or json"});
  specs.push_back({"threads", "0", "worker cap (0: MEANFIELD_THREADS or 1)"});
  return specs;
}

const std::string& table_format(const Settings& s) {
  const std::string& f = s.text("format");
  if (f != "csv" && f != "json") throw ValidationError("format must be csv or json");
  return f;
}

ordered_json complex_json(std::complex<double> z) { return {z.real(), z.imag()}; }

ordered_json cycle_json(const CycleRecord& c) {
  return {{"period", c.period},
          {"section_point", {{"x", c.section_point.x}, {"mu", c.section_point.mu}}},
          {"amplitude", c.amplitude},
          {"stable", c.stable},
          {"surrounds", {c.surrounds[0], c.surrounds[1], c.surrounds[2]}}};
}

ordered_json spectrum_json(const SpectrumReport& r) {
  ordered_json ev = ordered_json::array();
  for (const auto& z : r.eigenvalues) ev.push_back(complex_json(z));
  return {{"label", r.label},
          {"point", {{"m", r.point.m}, {"nu", r.point.nu}, {"V", r.point.V}}},
          {"eigenvalues", ev},
          {"max_real_part", r.max_real_part},
          {"stable", r.stable},
          {"max_residual", r.max_residual}};
}

ordered_json fit_json(const RateFit& f) {
  return {{"abscissae", f.abscissae}, {"ordinates", f.ordinates}, {"stderrs", f.stderrs},
          {"slope", f.slope},         {"intercept", f.intercept}, {"r_squared", f.r_squared}};
}

Table rate_table(const std::string& x_name, const RateFit& f) {
  Table t{{x_name, "error", "stderr"}, {}};
  for (std::size_t i = 0; i < f.abscissae.size(); ++i) {
    t.add({f.abscissae[i], f.ordinates[i], i < f.stderrs.size() ? f.stderrs[i] : 0.0});
  }
  return t;
}

Table particle_table(const Trajectory<ParticleSnapshot>& tr) {
  Table t{{"t", "m_N", "mu"}, {}};
  for (std::size_t i = 0; i < tr.size(); ++i) t.add({tr.times[i], tr.records[i].m, tr.records[i].mu});
  return t;
}

Table macro_table(const Trajectory<MacroState>& tr) {
  Table t{{"t", "x", "mu"}, {}};
  for (std::size_t i = 0; i < tr.size(); ++i) t.add({tr.times[i], tr.records[i].x, tr.records[i].mu});
  return t;
}

Table gauss_table(const GaussPath& path) {
  Table t{{"t", "m", "nu", "V", "z", "y"}, {}};
  for (std::size_t i = 0; i < path.size(); ++i) {
    const auto& r = path.records[i];
    t.add({path.times[i], r.m, r.nu, r.V, r.z, r.y});
  }
  return t;
}

Table density_table(const GridDensity& d) {
  Table t{{"x", "q"}, {}};
  for (std::size_t i = 0; i < d.q.size(); ++i) t.add({d.grid.center(i), d.q[i]});
  return t;
}

// One period of a cycle from its section point, with a step that divides
// the period exactly.
Trajectory<MacroState> cycle_orbit(const CycleRecord& c, double alpha, double theta, double dt) {
  const double steps = std::max(1.0, std::ceil(c.period / dt));
  IntegrateOptions opts;
  opts.stride = std::max<std::size_t>(1, static_cast<std::size_t>(steps) / 2000);
  return integrate(c.section_point, alpha, theta, c.period, c.period / steps, opts);
}

// particles ------------------------------------------------------------------

void run_particles(const Settings& s, OutputDir& out, std::ostream& os) {
  const ModelParams p = validate(model_params(s));
  const std::string& init = s.text("init");
  ParticleState state;
  if (init == "split") {
    state = split_state(p.n_particles, s.real("mu0"));
  } else if (init == "point") {
    state.x.assign(p.n_particles, s.real("x0"));
    state.mu = s.real("mu0");
  } else {
    throw ValidationError("init must be 'split' or 'point'");
  }
  ParticleRunOptions opts;
  opts.replica = s.unsigned_int("replica");
  opts.record_particles = s.flag("record_particles");
  const auto tr = simulate_particles(state, p, opts);
  const std::string& fmt = table_format(s);
  out.write_table("particles", particle_table(tr), fmt);
  if (opts.record_particles) {
    Table xs;
    xs.headers.push_back("t");
    for (std::size_t i = 0; i < p.n_particles; ++i) xs.headers.push_back("x_" + std::to_string(i));
    for (std::size_t i = 0; i < tr.size(); ++i) {
      std::vector<double> row{tr.times[i]};
      row.insert(row.end(), tr.records[i].x.begin(), tr.records[i].x.end());
      xs.add(std::move(row));
    }
    out.write_table("particles_x", xs, fmt);
  }
  double sup_m = 0.0;
  for (const auto& r : tr.records) sup_m = std::max(sup_m, std::abs(r.m));
  os << "particles: " << tr.size() << " snapshots, sup|m_N| = " << format_double(sup_m) << "\n";
}

// macro-ode ------------------------------------------------------------------

void run_macro_ode(const Settings& s, OutputDir& out, std::ostream& os) {
  IntegrateOptions opts;
  opts.stride = s.unsigned_int("record_stride");
  opts.backward = s.flag("backward");
  const auto tr = integrate({s.real("x0"), s.real("mu0")}, s.real("alpha"), s.real("theta"),
                            s.real("t_end"), s.real("dt"), opts);
  out.write_table("macro", macro_table(tr), table_format(s));
  const auto& last = tr.records.back();
  os << "macro-ode: final (x, mu) = (" << format_double(last.x) << ", " << format_double(last.mu)
     << ")\n";
}

// phase ----------------------------------------------------------------------

void run_phase(const Settings& s, OutputDir& out, std::ostream& os) {
  PhaseOptions opts;
  if (!s.text("theta1").empty()) opts.theta1 = s.real("theta1");
  opts.theta1_tol = s.real("theta1_tol");
  opts.cycle.dt = s.real("dt");
  const double alpha = s.real("alpha"), theta = s.real("theta");
  const PhaseReport rep = classify_phase(alpha, theta, opts);
  ordered_json cycles = ordered_json::array();
  for (const auto& c : rep.cycles) cycles.push_back(cycle_json(c));
  const ordered_json j{{"alpha", rep.alpha},
                       {"theta", rep.theta},
                       {"theta1", rep.theta1},
                       {"hopf", rep.hopf},
                       {"phase", std::string(to_string(rep.phase))},
                       {"cycles", cycles},
                       {"verified", rep.verified},
                       {"mismatches", rep.mismatches}};
  out.write_json("phase.json", j);
  for (std::size_t i = 0; i < rep.cycles.size(); ++i) {
    out.write_table("cycle_" + std::to_string(i), macro_table(cycle_orbit(rep.cycles[i], alpha, theta,
                                                                          opts.cycle.dt)),
                    table_format(s));
  }
  os << j.dump(2) << "\n";
  if (!rep.verified) {
    throw InconclusiveError("empirical attractors disagree with the classification");
  }
}

// gauss ----------------------------------------------------------------------

void run_gauss(const Settings& s, OutputDir& out, std::ostream& os) {
  const ModelParams p = validate(model_params(s));
  const auto path = simulate_gauss_path({s.real("m0"), s.real("nu0"), 0.0}, p,
                                        RngStream{p.seed, s.unsigned_int("replica"), 0});
  out.write_table("gauss", gauss_table(path), table_format(s));
  const auto& last = path.records.back();
  os << "gauss: final (m, nu, V) = (" << format_double(last.m) << ", " << format_double(last.nu)
     << ", " << format_double(last.V) << ")\n";
}

// spectrum -------------------------------------------------------------------

void run_spectrum(const Settings& s, OutputDir& out, std::ostream& os) {
  const double alpha = s.real("alpha"), theta = s.real("theta"), sigma = s.real("sigma");
  ordered_json arr = ordered_json::array();
  if (sigma > 0.0) {
    for (const auto& e : gauss_equilibria(alpha, theta, sigma)) {
      arr.push_back(spectrum_json(gauss_jacobian(e.point, alpha, theta, sigma, e.label)));
    }
  } else {
    // Only the wells survive the noiseless limit.
    for (const char* label : {"s1", "s2"}) {
      arr.push_back(spectrum_json(equilibrium_spectrum(label, alpha, theta, sigma)));
    }
  }
  out.write_json("spectrum.json", arr);
  os << arr.dump(2) << "\n";
}

// sigma-c --------------------------------------------------------------------

void run_sigma_c(const Settings& s, OutputDir& out, std::ostream& os) {
  SigmaCOptions opts;
  opts.label = s.text("label");
  opts.lo = s.real("lo");
  opts.hi = s.real("hi");
  opts.scan_points = s.unsigned_int("scan_points");
  const auto r = find_sigma_c(s.real("alpha"), s.real("theta"), opts);
  ordered_json j{{"alpha", s.real("alpha")},
                 {"theta", s.real("theta")},
                 {"label", opts.label},
                 {"excitable", r.excitable}};
  if (r.excitable) {
    j["sigma_c"] = r.sigma_c;
    j["crossing_eigenvalue"] = complex_json(r.crossing_eigenvalue);
  }
  j["max_real_lo"] = r.max_real_lo;
  j["max_real_hi"] = r.max_real_hi;
  out.write_json("sigma_c.json", j);
  os << j.dump(2) << "\n";
}

// fokker-planck --------------------------------------------------------------

void run_fokker_planck(const Settings& s, OutputDir& out, std::ostream& os) {
  ModelParams p = validate(model_params(s));
  const GridSpec grid{s.real("lo"), s.real("hi"), static_cast<std::size_t>(s.unsigned_int("n_cells"))};
  const auto stationary = stationary_density(p.sigma, grid);
  FpState init;
  const std::string& kind = s.text("init");
  if (kind == "normal") {
    init.density = normal_density(grid, s.real("init_mean"), s.real("init_sd"));
  } else if (kind == "stationary") {
    init.density = stationary.density;
  } else {
    throw ValidationError("init must be 'normal' or 'stationary'");
  }
  init.mu = s.real("mu0");
  FpOptions opts;
  opts.dump_times = s.reals("dump_times");
  const FpRun run = evolve(init, p, p.t_end, opts);
  const std::string& fmt = table_format(s);

  Table summary{{"t", "mass", "mu", "m1", "m2", "l1_to_qstar"}, {}};
  for (std::size_t i = 0; i < run.summaries.size(); ++i) {
    const auto& r = run.summaries.records[i];
    summary.add({run.summaries.times[i], r.mass, r.mu, r.m1, r.m2, r.l1_to_qstar});
  }
  out.write_table("fp_summary", summary, fmt);
  out.write_table("stationary", density_table(stationary.density), fmt);
  for (std::size_t i = 0; i < run.dumps.size(); ++i) {
    out.write_table("density_" + std::to_string(i), density_table(run.dumps[i].second), fmt);
  }
  const auto& last = run.summaries.records.back();
  ordered_json dumps = ordered_json::array();
  for (std::size_t i = 0; i < run.dumps.size(); ++i) {
    dumps.push_back({{"t", run.dumps[i].first}, {"file", "density_" + std::to_string(i)}});
  }
  const ordered_json j{{"t", run.summaries.times.back()},
                       {"mass", last.mass},
                       {"mu", last.mu},
                       {"m1", last.m1},
                       {"m2", last.m2},
                       {"L1_dist_to_qstar", last.l1_to_qstar},
                       {"z_star", stationary.z_star},
                       {"stationary_residual", stationary_residual(p.sigma, grid)},
                       {"tail_warning", stationary.warning},
                       {"dumps", dumps}};
  out.write_json("fp_report.json", j);
  os << j.dump(2) << "\n";
}

// rate experiments -----------------------------------------------------------

PicardOptions picard_options(const Settings& s) {
  PicardOptions o;
  o.n_iter = s.unsigned_int("picard_iter");
  o.n_samples = s.unsigned_int("ref_samples");
  o.tol = s.real("picard_tol");
  return o;
}

void report_fit(const std::string& stem, const std::string& x_name, const RateFit& fit,
                OutputDir& out, const Settings& s, std::ostream& os) {
  out.write_table(stem, rate_table(x_name, fit), table_format(s));
  const ordered_json j = fit_json(fit);
  out.write_json(stem + "_fit.json", j);
  os << j.dump(2) << "\n";
}

void run_chaos_rate(const Settings& s, OutputDir& out, std::ostream& os) {
  const ModelParams p = validate(model_params(s));
  ChaosOptions o;
  o.n_grid = s.counts("n_grid");
  o.n_replicas = s.unsigned_int("replicas");
  o.law = InitialLaw::normal(s.real("init_mean"), s.real("init_sd"));
  o.mu0 = s.real("mu0");
  o.reference = picard_options(s);
  o.min_r2 = s.real("min_r2");
  try {
    report_fit("chaos_rate", "N", chaos_rate_experiment(p, o).fit, out, s, os);
  } catch (const InconclusiveFitError& e) {
    report_fit("chaos_rate", "N", e.fit(), out, s, os);
    throw;
  }
}

void run_gauss_error(const Settings& s, OutputDir& out, std::ostream& os) {
  ModelParams p = model_params(s);
  GaussErrorOptions o;
  o.sigma_grid = s.reals("sigma_grid");
  o.n_samples = s.unsigned_int("n_samples");
  o.x0 = s.real("x0");
  o.mu0 = s.real("mu0");
  o.min_r2 = s.real("min_r2");
  o.picard_iter = s.unsigned_int("picard_iter");
  o.picard_tol = s.real("picard_tol");
  try {
    const auto res = gaussian_error_experiment(p, o);
    Table diag{{"sigma", "path_error", "field_error", "remainder_bound"}, {}};
    for (std::size_t i = 0; i < o.sigma_grid.size(); ++i) {
      diag.add({o.sigma_grid[i], res.path_error[i], res.field_error[i], res.remainder_bound[i]});
    }
    out.write_table("gauss_error_parts", diag, table_format(s));
    report_fit("gauss_error", "sigma", res.fit, out, s, os);
  } catch (const InconclusiveFitError& e) {
    report_fit("gauss_error", "sigma", e.fit(), out, s, os);
    throw;
  }
}

// reproduce-figures ------------------------------------------------------------

void run_reproduce_figures(const Settings& s, OutputDir& out, std::ostream& os) {
  const std::string& fmt = table_format(s);
  const double alpha = s.real("alpha");
  ModelParams base = model_params(s);

  // Figure 1: particle system below the Hopf threshold, small and large noise.
  ModelParams p1 = base;
  p1.theta = s.real("fig1_theta");
  p1.n_particles = s.unsigned_int("fig1_n_particles");
  p1.t_end = s.real("fig1_t_end");
  const ParticleState split = split_state(p1.n_particles, 0.0);
  p1.sigma = s.real("fig1_sigma_small");
  out.write_table("fig1_small_sigma", particle_table(simulate_particles(split, validate(p1))), fmt);
  p1.sigma = s.real("fig1_sigma_large");
  out.write_table("fig1_large_sigma", particle_table(simulate_particles(split, validate(p1))), fmt);

  // Figure 2: closure path above the Hopf threshold against the macro cycle.
  ModelParams p2 = base;
  p2.theta = s.real("fig2_theta");
  p2.sigma = s.real("fig2_sigma");
  p2.t_end = s.real("fig23_t_end");
  out.write_table("fig2_gauss",
                  gauss_table(simulate_gauss_path({0.5, 0.0, 0.0}, validate(p2), {p2.seed, 2, 0})),
                  fmt);
  const auto cycle = detect_limit_cycle({3.0, 0.0}, alpha, p2.theta);
  if (!cycle) throw InconclusiveError("no macroscopic cycle found for figure 2");
  out.write_table("fig2_cycle", macro_table(cycle_orbit(*cycle, alpha, p2.theta, base.dt)), fmt);

  // Figure 3: large noise, convergence to s5 versus persistent oscillation.
  ModelParams p3 = p2;
  p3.theta = s.real("fig3_theta");
  p3.sigma = s.real("fig3_sigma");
  validate(p3);
  out.write_table("fig3_calm", gauss_table(simulate_gauss_path({0.05, 0.0, 0.0}, p3, {p3.seed, 3, 0})),
                  fmt);
  out.write_table("fig3_oscillating",
                  gauss_table(simulate_gauss_path({2.0, 0.0, 0.0}, p3, {p3.seed, 4, 0})), fmt);
  os << "reproduce-figures: wrote " << out.outputs().size() << " files to " << out.path().string()
     << "\n";
}

std::vector<Command> build_commands() {
  std::vector<Command> c;
  c.push_back({"particles", "N-particle Euler-Maruyama run (t,m_N,mu)",
               with_common({{"alpha", "1", "field dissipation rate"},
                            {"theta", "2.9", "interaction strength"},
                            {"sigma", "0.05", "noise intensity"},
                            {"n_particles", "1000", "number of particles"},
                            {"dt", "0.001", "time step"},
                            {"t_end", "200", "final time"},
                            {"seed", "1", "RNG seed"},
                            {"replica", "0", "replica stream id"},
                            {"record_stride", "10", "steps between snapshots"},
                            {"init", "split", "split (half at +-1) or point"},
                            {"x0", "0", "initial position for init=point"},
                            {"mu0", "0", "initial field"},
                            {"record_particles", "false", "also write every position"}},
                           "out/particles"),
               run_particles});
  c.push_back({"macro-ode", "noiseless macroscopic trajectory (t,x,mu)",
               with_common({{"alpha", "1", ""},
                            {"theta", "3.5", ""},
                            {"x0", "3", ""},
                            {"mu0", "0", ""},
                            {"dt", "0.001", ""},
                            {"t_end", "50", ""},
                            {"record_stride", "10", ""},
                            {"backward", "false", "integrate the time-reversed field"}},
                           "out/macro-ode"),
               run_macro_ode});
  c.push_back({"phase", "phase classification with the homoclinic threshold",
               with_common({{"alpha", "1", ""},
                            {"theta", "3.5", ""},
                            {"theta1", "", "known homoclinic threshold (empty: compute)"},
                            {"theta1_tol", "0.001", "bisection tolerance"},
                            {"dt", "0.001", "RK4 step of the detectors"}},
                           "out/phase"),
               run_phase});
  c.push_back({"gauss", "Gaussian closure path (t,m,nu,V,z,y)",
               with_common({{"alpha", "1", ""},
                            {"theta", "3.5", ""},
                            {"sigma", "0.05", ""},
                            {"m0", "0.5", ""},
                            {"nu0", "0", ""},
                            {"dt", "0.001", ""},
                            {"t_end", "100", ""},
                            {"seed", "1", ""},
                            {"replica", "0", ""},
                            {"record_stride", "10", ""}},
                           "out/gauss"),
               run_gauss});
  c.push_back({"spectrum", "equilibria of the closure and their spectra",
               with_common({{"alpha", "1", ""}, {"theta", "3", ""}, {"sigma", "0", ""}},
                           "out/spectrum"),
               run_spectrum});
  c.push_back({"sigma-c", "noise level where the wells lose stability",
               with_common({{"alpha", "1", ""},
                            {"theta", "2.99", ""},
                            {"label", "s1", "s1 or s2"},
                            {"lo", "0.0001", ""},
                            {"hi", format_double(1.0 / std::sqrt(3.0) - 1e-4), ""},
                            {"scan_points", "64", ""}},
                           "out/sigma-c"),
               run_sigma_c});
  c.push_back({"fokker-planck", "nonlinear Fokker-Planck evolution and stationary checks",
               with_common({{"alpha", "1", ""},
                            {"theta", "1", ""},
                            {"sigma", "0.5", ""},
                            {"lo", "-4", ""},
                            {"hi", "4", ""},
                            {"n_cells", "400", ""},
                            {"dt", "0.00025", ""},
                            {"t_end", "50", ""},
                            {"record_stride", "400", ""},
                            {"init", "normal", "normal or stationary"},
                            {"init_mean", "0", ""},
                            {"init_sd", "0.3", ""},
                            {"mu0", "0", ""},
                            {"dump_times", "0,1,5,50", "times of density dumps"}},
                           "out/fokker-planck"),
               run_fokker_planck});
  c.push_back({"chaos-rate", "propagation-of-chaos rate fit (N,error,stderr)",
               with_common({{"alpha", "1", ""},
                            {"theta", "1", ""},
                            {"sigma", "0.3", ""},
                            {"dt", "0.005", ""},
                            {"t_end", "1", ""},
                            {"seed", "7", ""},
                            {"n_grid", "10,30,100,300,1000", ""},
                            {"replicas", "200", ""},
                            {"init_mean", "0.5", ""},
                            {"init_sd", "0.5", ""},
                            {"mu0", "0.2", ""},
                            {"ref_samples", "100000", "reference Picard samples"},
                            {"picard_iter", "30", ""},
                            {"picard_tol", "1e-10", ""},
                            {"min_r2", "0.9", ""}},
                           "out/chaos-rate"),
               run_chaos_rate});
  c.push_back({"gauss-error", "Gaussian approximation error fit (sigma,error,stderr)",
               with_common({{"alpha", "1", ""},
                            {"theta", "1", ""},
                            {"dt", "0.0005", ""},
                            {"t_end", "1", ""},
                            {"seed", "7", ""},
                            {"sigma_grid", "0.01,0.02,0.05,0.1", ""},
                            {"n_samples", "2000", ""},
                            {"x0", "0.5", ""},
                            {"mu0", "0.2", ""},
                            {"picard_iter", "30", ""},
                            {"picard_tol", "1e-12", ""},
                            {"min_r2", "0.9", ""}},
                           "out/gauss-error"),
               run_gauss_error});
  c.push_back({"reproduce-figures", "CSV inputs of the three figures",
               with_common({{"alpha", "1", ""},
                            {"dt", "0.001", ""},
                            {"seed", "1", ""},
                            {"record_stride", "100", ""},
                            {"fig1_theta", "2.9", ""},
                            {"fig1_n_particles", "1000", ""},
                            {"fig1_t_end", "200", ""},
                            {"fig1_sigma_small", "0.05", ""},
                            {"fig1_sigma_large", "0.8", ""},
                            {"fig2_theta", "3.5", ""},
                            {"fig2_sigma", "0.05", ""},
                            {"fig3_theta", "4", ""},
                            {"fig3_sigma", "3", ""},
                            {"fig23_t_end", "100", ""}},
                           "out/figures"),
               run_reproduce_figures});
  return c;
}

}  // namespace

const std::vector<Command>& commands() {
  static const std::vector<Command> all = build_commands();
  return all;
}

const Command* find_command(const std::string& name) {
  for (const auto& c : commands()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace meanfield::cli
