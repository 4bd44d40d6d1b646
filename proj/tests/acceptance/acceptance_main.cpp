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

// Prints one PASS/FAIL line per acceptance criterion; exits 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "meanfield/deterministic_flow.hpp"
#include "meanfield/fokker_planck.hpp"
#include "meanfield/gaussian_closure.hpp"
#include "meanfield/mckean_vlasov.hpp"
#include "meanfield/particles.hpp"

namespace mf = meanfield;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Report {
 public:
  explicit Report(std::ostringstream& os) : os_(os) {}
  // Records a sub-check; the criterion passes only if every check does.
  void check(bool ok, const std::string& what) {
    if (!ok) pass_ = false;
    os_ << (ok ? "" : "!") << what << "; ";
  }
  [[nodiscard]] bool pass() const { return pass_; }

 private:
  std::ostringstream& os_;
  bool pass_ = true;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Outcome spectrum_exactness() {
  std::ostringstream os;
  Report r(os);
  for (double alpha : {1.0, 2.0, 5.0}) {
    const auto rep = mf::equilibrium_spectrum("s1", alpha, alpha + 2.0, 0.0);
    const double w = std::sqrt(2.0 * alpha);
    const std::complex<double> want[3] = {{0.0, w}, {0.0, -w}, {-4.0, 0.0}};
    double err = 0.0;
    for (int k = 0; k < 3; ++k) err = std::max(err, std::abs(rep.eigenvalues[k] - want[k]));
    r.check(err < 1e-9, "alpha=" + fmt(alpha) + " max|err|=" + fmt(err));
  }
  return {r.pass(), os.str()};
}

Outcome excitability_slope() {
  std::ostringstream os;
  Report r(os);
  auto fd_slope = [](double alpha) {
    const std::vector<double> sigmas{0.0, 1e-2, std::sqrt(2e-4)};
    const auto track = mf::track_eigenvalues("s1", alpha, alpha + 2.0, sigmas);
    return (track[2][0].real() - track[1][0].real()) / 1e-4;
  };
  for (double alpha : {1.0, 2.0, 5.0, 9.0}) {
    const double fd = fd_slope(alpha);
    const double formula = mf::excitability_slope(alpha);
    const double rel = std::abs(fd - formula) / std::abs(formula);
    r.check(rel < 0.02, "alpha=" + fmt(alpha) + " fd=" + fmt(fd) + " formula=" + fmt(formula));
  }
  const double fd11 = fd_slope(11.0);
  const double f11 = mf::excitability_slope(11.0);
  r.check(f11 < 0.0 && fd11 < 0.0, "alpha=11 fd=" + fmt(fd11) + " formula=" + fmt(f11));
  return {r.pass(), os.str()};
}

Outcome hopf_threshold() {
  std::ostringstream os;
  Report r(os);
  double worst = 0.0;
  bool sign_ok = true;
  for (double alpha : {0.5, 1.0, 2.0, 4.0}) {
    for (double x : {-1.0, 1.0}) {
      for (double d : {-0.1, -1e-3, 0.0, 1e-3, 0.1}) {
        const double theta = alpha + 2.0 + d;
        const double tr = mf::jacobian2({x, 0.0}, alpha, theta).trace;
        worst = std::max(worst, std::abs(tr - (theta - alpha - 2.0)));
        if (d < 0.0 && !(tr < 0.0)) sign_ok = false;
        if (d > 0.0 && !(tr > 0.0)) sign_ok = false;
      }
    }
  }
  r.check(worst < 1e-14 && sign_ok, "trace=theta-alpha-2 max dev " + fmt(worst));
  const auto below = mf::detect_attractor({1.05, 0.0}, 1.0, 2.95);
  r.check(below.equilibrium && *below.equilibrium == 2, "theta=2.95 -> fixed point (1,0)");
  const auto above = mf::detect_attractor({1.05, 0.0}, 1.0, 3.05);
  r.check(above.cycle.has_value(),
          "theta=3.05 -> cycle" + (above.cycle ? " period " + fmt(above.cycle->period) : ""));
  return {r.pass(), os.str()};
}

Outcome homoclinic_threshold() {
  std::ostringstream os;
  Report r(os);
  mf::Theta1Options coarse;
  const double t1 = mf::find_theta1(1.0, 1e-3, coarse);
  mf::Theta1Options fine;
  fine.cycle.dt = 5e-4;
  const double t1_half = mf::find_theta1(1.0, 1e-3, fine);
  r.check(t1 > 0.0 && t1 < 3.0, "theta1=" + fmt(t1));
  r.check(std::abs(t1 - t1_half) < 2e-3, "dt/2 theta1=" + fmt(t1_half));

  bool all_fixed = true;
  for (const auto& init : mf::default_initial_grid()) {
    const auto v = mf::detect_attractor(init, 1.0, t1 - 0.1);
    if (v.cycle || !v.equilibrium || *v.equilibrium == 1) all_fixed = false;
  }
  r.check(all_fixed, "theta1-0.1: 25 grid points reach (+-1,0)");

  mf::PhaseOptions po;
  po.theta1 = t1;
  const auto rep = mf::classify_phase(1.0, t1 + 0.1, po);
  const bool outer = !rep.cycles.empty() && rep.cycles[0].stable &&
                     rep.cycles[0].surrounds_both_wells();
  int inner = 0;
  for (const auto& c : rep.cycles) {
    if (!c.stable && !c.surrounds_both_wells()) ++inner;
  }
  r.check(rep.phase == mf::Phase::kCoexistence && rep.verified, "theta1+0.1 verified coexistence");
  r.check(outer, "stable outer cycle around both wells");
  r.check(inner == 2, "unstable inner cycles found backward: " + std::to_string(inner));
  return {r.pass(), os.str()};
}

Outcome stationary_fp() {
  std::ostringstream os;
  Report r(os);
  const double r400 = mf::stationary_residual(1.0, {-4.0, 4.0, 400});
  const double r800 = mf::stationary_residual(1.0, {-4.0, 4.0, 800});
  const double ratio = r800 / r400;
  r.check(std::abs(ratio - 0.25) < 0.05, "residual ratio 800/400=" + fmt(ratio));

  const mf::GridSpec g;
  mf::FpState init{mf::normal_density(g, 0.0, 0.3), 0.0, 0.0};
  mf::ModelParams p;
  p.alpha = 1.0;
  p.theta = 1.0;
  p.sigma = 0.5;
  p.dt = 2.5e-4;
  p.t_end = 50.0;
  p.record_stride = 400;
  const auto run = mf::evolve(init, p, 50.0);
  double mu_max = 0.0;
  for (const auto& s : run.summaries.records) mu_max = std::max(mu_max, std::abs(s.mu));
  const double l1 = run.summaries.records.back().l1_to_qstar;
  r.check(mu_max <= 1e-12, "sup|mu|=" + fmt(mu_max));
  r.check(l1 < 1e-3, "L1(q(50), q*)=" + fmt(l1));
  return {r.pass(), os.str()};
}

Outcome chaos_rate() {
  std::ostringstream os;
  Report r(os);
  mf::ModelParams p;
  p.alpha = 1.0;
  p.theta = 1.0;
  p.sigma = 0.3;
  p.dt = 5e-3;
  p.t_end = 1.0;
  p.seed = 7;
  mf::ChaosOptions o;
  o.min_r2 = 0.0;  // judged below
  const auto res = mf::chaos_rate_experiment(p, o);
  r.check(std::abs(res.fit.slope + 0.5) <= 0.15, "slope=" + fmt(res.fit.slope));
  r.check(res.fit.r_squared >= 0.9, "r2=" + fmt(res.fit.r_squared));
  return {r.pass(), os.str()};
}

Outcome gaussian_rate() {
  std::ostringstream os;
  Report r(os);
  mf::ModelParams p;
  p.alpha = 1.0;
  p.theta = 1.0;
  p.dt = 5e-4;
  p.t_end = 1.0;
  p.seed = 7;
  mf::GaussErrorOptions o;
  o.min_r2 = 0.0;
  const auto res = mf::gaussian_error_experiment(p, o);
  r.check(std::abs(res.fit.slope - 2.0) <= 0.3, "slope=" + fmt(res.fit.slope));
  r.check(res.fit.r_squared >= 0.9, "r2=" + fmt(res.fit.r_squared));
  return {r.pass(), os.str()};
}

Outcome excitation_by_noise() {
  std::ostringstream os;
  Report r(os);
  mf::ModelParams p;
  p.alpha = 1.0;
  p.theta = 2.9;
  p.n_particles = 1000;
  p.dt = 1e-3;
  p.t_end = 200.0;
  p.seed = 1;
  p.record_stride = 1;
  const mf::ParticleState init = mf::split_state(1000, 0.0);

  p.sigma = 0.05;
  const auto quiet = mf::simulate_particles(init, p);
  double sup_m = 0.0;
  for (const auto& s : quiet.records) sup_m = std::max(sup_m, std::abs(s.m));
  r.check(sup_m < 1e-2, "sigma=0.05 sup|m|=" + fmt(sup_m));

  p.sigma = 0.8;
  const auto loud = mf::simulate_particles(init, p);
  // Half peak-to-peak of m over each of the last four windows of length 25.
  double weakest = 1e300;
  for (int w = 0; w < 4; ++w) {
    const double t0 = 100.0 + 25.0 * w, t1 = t0 + 25.0;
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < loud.size(); ++i) {
      if (loud.times[i] < t0 || loud.times[i] > t1) continue;
      lo = std::min(lo, loud.records[i].m);
      hi = std::max(hi, loud.records[i].m);
    }
    weakest = std::min(weakest, 0.5 * (hi - lo));
  }
  r.check(weakest > 0.5, "sigma=0.8 min windowed amplitude=" + fmt(weakest));
  return {r.pass(), os.str()};
}

Outcome s5_threshold() {
  std::ostringstream os;
  Report r(os);
  const double alpha = 1.0, theta = 4.0;
  double crossing = -1.0;
  double prev_s = 2.0;
  double prev_v = mf::equilibrium_spectrum("s5", alpha, theta, prev_s).max_real_part;
  for (int i = 1; i <= 2000; ++i) {
    const double s = 2.0 + 1e-3 * i;
    const double v = mf::equilibrium_spectrum("s5", alpha, theta, s).max_real_part;
    if (prev_v > 0.0 && v <= 0.0) {
      crossing = prev_s + (s - prev_s) * prev_v / (prev_v - v);
      break;
    }
    prev_s = s;
    prev_v = v;
  }
  const double closed = mf::s5_stability_threshold(alpha, theta);
  const double rel = std::abs(crossing - closed) / closed;
  r.check(rel < 0.01, "scan crossing=" + fmt(crossing) + " closed form=" + fmt(closed));

  mf::ModelParams p;
  p.alpha = alpha;
  p.theta = theta;
  p.sigma = 3.0;
  p.dt = 1e-3;
  p.t_end = 200.0;
  p.record_stride = 100;
  const auto s5 = mf::equilibrium_point("s5", 3.0);
  const auto calm = mf::simulate_gauss_path({0.05, 0.0, 0.0}, p, {9, 0, 0});
  const auto& end = calm.records.back();
  const double dist = std::abs(end.m) + std::abs(end.nu) + std::abs(end.V - s5.V);
  r.check(dist < 1e-6, "m(0)=0.05 distance to s5=" + fmt(dist));
  const auto wild = mf::simulate_gauss_path({2.0, 0.0, 0.0}, p, {9, 1, 0});
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = wild.size() / 2; i < wild.size(); ++i) {
    lo = std::min(lo, wild.records[i].m);
    hi = std::max(hi, wild.records[i].m);
  }
  r.check(hi - lo > 1.0, "m(0)=2 late range of m=" + fmt(hi - lo));
  return {r.pass(), os.str()};
}

Outcome moment_consistency() {
  std::ostringstream os;
  Report r(os);
  std::vector<mf::MomentDefects> d;
  for (double dt : {1e-3, 5e-4, 2.5e-4}) {
    mf::ModelParams p;
    p.alpha = 1.0;
    p.theta = 2.5;
    p.sigma = 0.3;
    p.dt = dt;
    p.t_end = 10.0;
    p.record_stride = 1;
    d.push_back(mf::moment_residual(mf::simulate_gauss_path({0.5, 0.0, 0.0}, p, {3, 0, 0})));
  }
  for (std::size_t i = 1; i < d.size(); ++i) {
    const double q1 = d[i].k1 / d[i - 1].k1;
    const double q2 = d[i].k2 / d[i - 1].k2;
    r.check(std::abs(q1 - 0.5) <= 0.1 && std::abs(q2 - 0.5) <= 0.1,
            "halving ratios k1=" + fmt(q1) + " k2=" + fmt(q2));
  }
  return {r.pass(), os.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"spectrum exactness", spectrum_exactness},
      {"excitability slope", excitability_slope},
      {"Hopf threshold", hopf_threshold},
      {"homoclinic threshold", homoclinic_threshold},
      {"stationary Fokker-Planck", stationary_fp},
      {"propagation of chaos rate", chaos_rate},
      {"Gaussian approximation rate", gaussian_rate},
      {"excitation by noise", excitation_by_noise},
      {"s5 threshold", s5_threshold},
      {"moment-closure consistency", moment_consistency},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.pass) ++failed;
    std::printf("%s criterion %zu (%s): %s[%.1fs]\n", out.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), out.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
