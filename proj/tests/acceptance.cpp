// Copyright 2026 The catsize Authors
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

// Acceptance criteria, one PASS/FAIL line each.
// Usage: acceptance PATH_TO_CATSIZE_CLI

#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "catsize/measures.hpp"
#include "catsize/network.hpp"
#include "catsize/simulate.hpp"

namespace {

using catsize::CatStateSpec;
using catsize::Complex;
using catsize::StateFamily;
using catsize::detail::shortest;

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Report {
 public:
  void line(int id, const std::string& title, const std::function<Outcome()>& body) {
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed_;
    std::printf("%s %2d %s | %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  int failed() const { return failed_; }

 private:
  int failed_ = 0;
};

CatStateSpec omega(int n, Complex a) { return {StateFamily::kOmega, n, a, {}}; }

double ratio_of(const catsize::MeasureResult& r, const std::string& generator) {
  return std::get<std::map<std::string, double>>(r.diagnostics.at("ratio_by_generator")).at(generator);
}

double var_of(const catsize::MeasureResult& r, const std::string& generator) {
  return std::get<std::map<std::string, double>>(r.diagnostics.at("variance_per_mode_by_generator"))
      .at(generator);
}

std::string run_capture(const std::string& cmd, int& rc) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    rc = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  rc = pclose(p);
  return out;
}

std::string without_timing(const std::string& s) {
  static const std::regex timing(R"("timing_ms": [0-9]+)");
  return std::regex_replace(s, timing, "\"timing_ms\": 0");
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "catsize";
  Report rep;

  rep.line(1, "n_eff closed form equals brute-force oracle scan (50 draws)", [] {
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> ua(0.3, 3.0), uu(0.0, 1.0);
    std::uniform_int_distribution<int> un(2, 30);
    int mismatches = 0;
    for (int t = 0; t < 50; ++t) {
      const double a = ua(rng);
      const int n = un(rng);
      const auto iv = catsize::delta_validity_interval(n, a);
      const double delta = iv.lo + (iv.hi - iv.lo) * uu(rng);
      if (catsize::oracle_n_eff(delta, a) != catsize::n_eff_integer(delta, a)) ++mismatches;
    }
    return Outcome{mismatches == 0, "mismatches=" + std::to_string(mismatches)};
  });

  rep.line(2, "pure-state trace norm equals 2 sqrt(1 - e^{-4|a|^2}) within 1e-10", [] {
    double worst = 0.0;
    for (double a : {0.5, 1.0, 2.0}) {
      const int c = catsize::cutoff_for_tail(a, 1e-24) + 8;
      const auto p = catsize::coherent_vector(a, c, 1e-14).normalized();
      const auto m = catsize::coherent_vector(-a, c, 1e-14).normalized();
      const double tn = catsize::trace_norm(catsize::density(p) - catsize::density(m));
      worst = std::max(worst, std::abs(tn - 2.0 * std::sqrt(-std::expm1(-4.0 * a * a))));
    }
    return Outcome{worst <= 1e-10, "max_abs_error=" + shortest(worst)};
  });

  rep.line(3, "splitting network and cat splitting fidelity >= 1 - 1e-8", [] {
    double worst = 1.0;
    for (int m : {2, 3, 4}) {
      for (double a : {0.5, 1.0, 1.5}) worst = std::min(worst, catsize::check_splitting_network(m, a).fidelity);
    }
    const double cat = catsize::check_cat_splitting(3, 0.8).fidelity;
    return Outcome{worst >= 1.0 - 1e-8 && cat >= 1.0 - 1e-8,
                   "min_network_fidelity=" + shortest(worst) + " cat_fidelity=" + shortest(cat)};
  });

  rep.line(4, "photon-number projection of |2a>^N is Poisson(N|a|^2) (N=2, a=1, d<=12)", [] {
    const auto r = catsize::marquardt_size(omega(2, 1.0), true, 12);
    const double err = r.number("pmf_max_abs_error");
    const double mean_err = r.number("pmf_mean_error");
    return Outcome{err <= 1e-10 && mean_err <= 1e-8,
                   "pmf_max_abs_error=" + shortest(err) + " pmf_mean=" + shortest(r.number("pmf_mean")) +
                       " expected_mean=" + shortest(r.value)};
  });

  rep.line(5, "RQFI ratios reproduce the bounded and quadrature bounds; N=1 is 1; O(N) scaling", [] {
    const auto bounded = catsize::GeneratorFamily::of({catsize::GeneratorKind::kBoundedLocal});
    const auto quad = catsize::GeneratorFamily::of(
        {catsize::GeneratorKind::kQuadrature, catsize::GeneratorKind::kNumber});
    double bounded_err = 0.0, quad_eq_err = 0.0, quad_shortfall = 0.0, oracle_err = 0.0;
    for (int n : {1, 2, 3, 4, 10}) {
      for (double a : {0.5, 1.0, 1.5}) {
        catsize::RqfiOptions opt;
        opt.oracle_check = n <= 2;
        const auto rb = catsize::rqfi_size(omega(n, a), bounded, opt);
        bounded_err = std::max(bounded_err,
                               std::abs(ratio_of(rb, "pseudo-sigma-z") - catsize::rqfi_bound_bounded(n, a)));
        const auto rq = catsize::rqfi_size(omega(n, a), quad, opt);
        const double rhs = catsize::rqfi_bound_quadrature(n, a);
        quad_shortfall = std::max(quad_shortfall, rhs - rq.value);
        if (n == 1) quad_eq_err = std::max(quad_eq_err, std::abs(var_of(rq, "quadrature[0/16]") - rhs));
        if (n <= 2) {
          oracle_err = std::max({oracle_err, rb.number("oracle_variance_rel_error"),
                                 rq.number("oracle_variance_rel_error")});
        }
      }
    }
    const double one = catsize::rqfi_size(omega(1, 1.5), bounded).value;
    const double scale = catsize::rqfi_size(omega(4, 1.5), bounded).value /
                         catsize::rqfi_size(omega(2, 1.5), bounded).value;
    const bool ok = bounded_err <= 1e-9 && quad_eq_err <= 1e-9 && quad_shortfall <= 1e-9 &&
                    oracle_err <= 1e-9 && std::abs(one - 1.0) <= 1e-9 && std::abs(scale - 2.0) <= 0.1;
    return Outcome{ok, "bounded_max_abs_error=" + shortest(bounded_err) +
                           " quadrature_N1_abs_error=" + shortest(quad_eq_err) +
                           " quadrature_max_shortfall=" + shortest(std::max(0.0, quad_shortfall)) +
                           " oracle_rel_error=" + shortest(oracle_err) + " N1_value=" + shortest(one) +
                           " ratio_4_over_2=" + shortest(scale)};
  });

  rep.line(6, "distillation tanh sum rule, Monte Carlo mean and first-success law", [] {
    double sum_err = 0.0;
    for (int n = 1; n <= 50; ++n) {
      for (double x : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
        double s = 0.0;
        for (int m = 1; m <= n; ++m) s += catsize::distill_pm(m, n, std::sqrt(x));
        sum_err = std::max(sum_err, std::abs(s - std::tanh(n * x)));
      }
    }
    const long trials = 100000;
    const auto s = catsize::simulate_distillation(5, 0.8, trials, 1, 0);
    const double expected = catsize::distill_expected_n(5, 0.8);
    const double z_mean = std::abs(s.n.mean - expected) / s.n.std_error;
    double z_first = 0.0;
    for (int m = 1; m <= 3; ++m) {
      const double p = catsize::distill_pm(m, 5, 0.8);
      const double f = static_cast<double>(s.first_e1[m - 1]) / trials;
      z_first = std::max(z_first, std::abs(f - p) / std::sqrt(p * (1.0 - p) / trials));
    }
    return Outcome{sum_err <= 1e-12 && z_mean <= 3.0 && z_first <= 3.0,
                   "tanh_max_abs_error=" + shortest(sum_err) + " mean=" + shortest(s.n.mean) +
                       " expected=" + shortest(expected) + " z_mean=" + shortest(z_mean) +
                       " max_z_first_success=" + shortest(z_first)};
  });

  rep.line(7, "mode loss: Monte Carlo vs e^{-2N lambda|a|^2}/(2+2e^{-2N|a|^2}); GHZ reference", [] {
    const auto s = catsize::simulate_mode_loss(6, 1.0, 0.25, 100000, 1, 0);
    const double printed = catsize::mode_loss_offdiag(6, 0.25, 1.0);
    const double ghz = catsize::ghz_mode_loss_offdiag(6, 0.25);
    const double z_omega = std::abs(s.omega.mean - printed) / s.omega.std_error;
    const double z_ghz = std::abs(s.ghz.mean - ghz) / s.ghz.std_error;
    return Outcome{z_omega <= 3.0 && z_ghz <= 3.0,
                   "mc_mean=" + shortest(s.omega.mean) + " expected=" + shortest(printed) +
                       " z=" + shortest(z_omega) + " binomial_average=" +
                       shortest(catsize::mode_loss_offdiag_exact(6, 0.25, 1.0)) +
                       " ghz_z=" + shortest(z_ghz)};
  });

  rep.line(8, "collapse: xi+- even split, cat-vs-mixed always cat, cat-vs-branch final |a> frequency", [] {
    using catsize::CollapseProblem;
    const long trials = 200000;
    double z_xi = 0.0, min_fid = 1.0;
    for (double x : {2.0, 4.0}) {
      const auto b = catsize::simulate_branch_collapse(std::sqrt(x), trials, 1,
                                                       CollapseProblem::kBranchVsBranch, 0);
      z_xi = std::max(z_xi, std::abs(b.stats.mean - 0.5) / std::sqrt(0.25 / trials));
      min_fid = std::min(min_fid, b.min_fidelity_matched);
    }
    const auto m = catsize::simulate_branch_collapse(std::sqrt(2.0), trials, 1,
                                                     CollapseProblem::kCatVsMixed, 0);
    const auto c = catsize::simulate_branch_collapse(std::sqrt(10.0), trials, 1,
                                                     CollapseProblem::kCatVsBranch, 0);
    const double target = 0.5 + 0.5 / std::numbers::sqrt2;
    const double z_cvb = std::abs(c.stats.mean - target) / std::sqrt(target * (1.0 - target) / trials);
    const bool ok = z_xi <= 3.0 && min_fid >= 0.99 && m.stats.mean == 1.0 && z_cvb <= 3.0;
    return Outcome{ok, "xi_max_z=" + shortest(z_xi) + " min_branch_fidelity=" + shortest(min_fid) +
                           " cat_vs_mixed_cat_fraction=" + shortest(m.stats.mean) +
                           " final_alpha_frequency=" + shortest(c.stats.mean) + " target=" +
                           shortest(target) + " z=" + shortest(z_cvb) + " cat_outcome_frequency=" +
                           shortest(c.first_outcome_frequency)};
  });

  rep.line(9, "HCS2 Wigner closed form vs displaced-parity oracle; origin peak dominant", [] {
    double worst15 = 0.0, worst3 = 0.0;
    {
      const auto v = catsize::fock_state(CatStateSpec{StateFamily::kHcs, 2, 1.5, {}}, 40);
      std::mt19937_64 rng(99);
      std::uniform_real_distribution<double> u(-3.0, 3.0);
      for (int t = 0; t < 200; ++t) {
        const std::array<Complex, 2> g{Complex(u(rng), u(rng)), Complex(u(rng), u(rng))};
        worst15 = std::max(worst15, std::abs(catsize::wigner_hcs2_closed(g[0], g[1], 1.5) -
                                             catsize::wigner_numeric(v, g)));
      }
    }
    {
      const auto v = catsize::fock_state(CatStateSpec{StateFamily::kHcs, 2, 3.0, {}}, 60);
      const std::array<std::array<Complex, 2>, 8> spots = {{{Complex(0.0), Complex(0.0)},
                                                           {Complex(3.0), Complex(3.0)},
                                                           {Complex(-3.0), Complex(3.0)},
                                                           {Complex(3.0), Complex(0.0)},
                                                           {Complex(0.0, 0.2), Complex(3.0)},
                                                           {Complex(1.0, -0.5), Complex(0.0)},
                                                           {Complex(0.0, 0.26), Complex(0.0, -0.26)},
                                                           {Complex(0.0), Complex(-3.0)}}};
      for (const auto& s : spots) {
        worst3 = std::max(worst3, std::abs(catsize::wigner_hcs2_closed(s[0], s[1], 3.0) -
                                           catsize::wigner_numeric(v, s)));
      }
    }
    const auto grid = catsize::wigner_hcs2_slice(3.0, 0.0, -5.0, 5.0, 201, 0);
    const auto f = catsize::extract_features(grid);
    const bool origin = !f.peaks.empty() && std::abs(f.peaks.front().location[0]) < 1e-9 &&
                        catsize::wigner_hcs2_closed(0.0, 0.0, 3.0) >
                            std::abs(catsize::wigner_hcs2_closed(3.0, 0.0, 3.0));
    return Outcome{worst15 <= 1e-6 && worst3 <= 1e-6 && origin,
                   "max_abs_error_a1.5=" + shortest(worst15) + " max_abs_error_a3=" + shortest(worst3) +
                       " origin_peak_dominant=" + (origin ? "true" : "false")};
  });

  rep.line(10, "empirical Wigner: fringe wavelength, peak separations, squared-separation scaling", [] {
    // Even cat, a = 2, [-4, 4]^2 with step 0.05.
    const CatStateSpec cat{StateFamily::kEvenCat, 1, 2.0, {}};
    const auto grid = catsize::wigner_grid(cat, {0.0},
                                           {catsize::mode_axis(0, 1, false, -4.0, 4.0, 161),
                                            catsize::mode_axis(0, 1, true, -4.0, 4.0, 161)},
                                           0);
    const auto f = catsize::extract_features(grid);
    const double lambda_err = std::abs(f.fringe_wavelength.value_or(0.0) / (std::numbers::pi / 4.0) - 1.0);
    const double sep_err = std::abs(f.peak_separation - 4.0);
    const auto om = catsize::wigner_empirical_size(omega(2, 1.0));
    const double om_err = std::abs(om.number("peak_separation") - 2.0 * std::numbers::sqrt2);
    const double om_step = om.number("grid_step");
    double worst_track = 0.0;
    for (int n : {1, 2}) {
      for (double a : {1.0, std::numbers::sqrt2}) {
        const double s2 = catsize::wigner_empirical_size(omega(n, a)).value;
        worst_track = std::max(worst_track, std::abs(s2 / (4.0 * n * a * a) - 1.0));
      }
    }
    const bool ok = lambda_err <= 0.05 && sep_err <= 0.05 + 1e-12 && om_err <= om_step && worst_track <= 0.05;
    return Outcome{ok, "wavelength_rel_error=" + shortest(lambda_err) + " cat_separation_error=" +
                           shortest(sep_err) + " omega_separation_error=" + shortest(om_err) +
                           " omega_step=" + shortest(om_step) + " scaling_max_rel_error=" +
                           shortest(worst_track)};
  });

  rep.line(11, "C~ of Omega(N, a) equals C~ of the single-mode cat at sqrt(N) a (20 draws)", [] {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> un(1, 40);
    std::uniform_real_distribution<double> ua(0.1, 3.0), ud(1e-6, 0.45), ut(0.0, 2.0 * std::numbers::pi);
    double worst_ulps = 0.0;
    for (int t = 0; t < 20; ++t) {
      const int n = un(rng);
      const Complex a = std::polar(ua(rng), ut(rng));
      const double d = ud(rng);
      const double joint = catsize::branch_dist_size_real(omega(n, a), d).value;
      const double single =
          catsize::branch_dist_size_real(CatStateSpec{StateFamily::kEvenCat, 1, std::sqrt(double(n)) * a, {}}, d)
              .value;
      worst_ulps = std::max(worst_ulps, std::abs(joint - single) / (std::abs(joint) * 0x1.0p-52));
    }
    // Rounding in sqrt(N) a then |.|^2 is the only difference; allow 4 ulp.
    return Outcome{worst_ulps <= 4.0, "max_difference_ulps=" + shortest(worst_ulps)};
  });

  rep.line(12, "simulate and verify envelopes are byte-identical across runs (timing excluded)", [&] {
    const std::vector<std::string> commands = {
        "simulate distill --modes 5 --alpha 0.8 --trials 20000 --seed 7",
        "simulate mode-loss --modes 6 --alpha 1 --lambda 0.25 --trials 20000 --seed 7",
        "simulate collapse --alpha 3.1622 --problem cat-vs-branch --trials 20000 --seed 7",
        "simulate collapse --alpha 1.4142 --problem branch-vs-branch --trials 20000 --seed 7",
        "simulate collapse --alpha 1.4142 --problem cat-vs-mixed --trials 20000 --seed 7",
        "verify --suite fast --seed 3"};
    int differing = 0, errors = 0;
    for (const auto& c : commands) {
      int rc1 = 0, rc2 = 0;
      const std::string a = without_timing(run_capture(cli + " " + c + " --threads 1", rc1));
      const std::string b = without_timing(run_capture(cli + " " + c + " --threads 4", rc2));
      const std::string b2 = without_timing(run_capture(cli + " " + c + " --threads 1", rc2));
      if (rc1 != 0 || rc2 != 0 || a.empty()) ++errors;
      // The echoed command differs only in the --threads value.
      const std::string a_norm = std::regex_replace(a, std::regex("--threads [0-9]+"), "");
      const std::string b_norm = std::regex_replace(b, std::regex("--threads [0-9]+"), "");
      if (a != b2 || a_norm != b_norm) ++differing;
    }
    return Outcome{differing == 0 && errors == 0,
                   "commands=" + std::to_string(commands.size()) + " differing=" + std::to_string(differing) +
                       " run_errors=" + std::to_string(errors)};
  });

  std::printf("%d of 12 criteria failed\n", rep.failed());
  return rep.failed() == 0 ? 0 : 1;
}
