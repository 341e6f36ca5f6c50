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

/**
 * @file
 * Cross-validation battery: closed forms against the truncated Fock-space
 * oracle, the splitting network, POVM invariants and seeded Monte Carlo
 * estimators against their exact expectations.
 *
 * Every check compares one observed number with an expected number under an
 * absolute tolerance, so a check passes iff |observed - expected| <= tolerance.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "catsize/measures.hpp"
#include "catsize/network.hpp"
#include "catsize/rng.hpp"
#include "catsize/simulate.hpp"

namespace catsize {

enum class CheckStatus { kPass, kFail, kSkipped };

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kSkipped: return "skipped";
  }
  return "?";
}

struct Check {
  std::string name;
  CheckStatus status = CheckStatus::kFail;
  double observed = std::numeric_limits<double>::quiet_NaN();
  double expected = 0.0;
  double tolerance = 0.0;
  std::string note;  ///< error text when the check could not be evaluated
};

inline Check make_check(std::string name, double observed, double expected, double tolerance) {
  const bool ok = std::isfinite(observed) && std::abs(observed - expected) <= tolerance;
  return {std::move(name), ok ? CheckStatus::kPass : CheckStatus::kFail, observed, expected,
          tolerance, {}};
}

enum class Suite { kFast, kFull };

struct VerifyOptions {
  Suite suite = Suite::kFast;
  std::uint64_t seed = 0;
  int threads = 0;
};

namespace detail {

inline std::string fmt(double v) { return shortest(v); }

/// Runs `body`, turning library errors into a failed (or skipped, for
/// sizing limits) check named `name`.
inline void guarded(std::vector<Check>& out, const std::string& name,
                    const std::function<void(std::vector<Check>&)>& body) {
  try {
    body(out);
  } catch (const SizingError& e) {
    out.push_back({name, CheckStatus::kSkipped, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0,
                   e.what()});
  } catch (const Error& e) {
    out.push_back({name, CheckStatus::kFail, std::numeric_limits<double>::quiet_NaN(), 0.0, 0.0,
                   e.what()});
  }
}

}  // namespace detail

inline std::vector<Check> run_verify(const VerifyOptions& opt) {
  const bool full = opt.suite == Suite::kFull;
  std::vector<Check> out;
  using detail::fmt;

  // Pure-state trace norm against the two-level closed form.
  for (double a : {0.5, 1.0, 2.0}) {
    const std::string name = "trace-norm-identity/alpha=" + fmt(a);
    detail::guarded(out, name, [&](std::vector<Check>& o) {
      const int c = cutoff_for_tail(a, 1e-24) + 8;
      const auto p = coherent_vector(a, c, 1e-14).normalized();
      const auto m = coherent_vector(-a, c, 1e-14).normalized();
      o.push_back(make_check(name, trace_norm(density(p) - density(m)),
                             2.0 * std::sqrt(-std::expm1(-4.0 * a * a)), 1e-10));
    });
  }

  // Integer n_eff closed form against a brute-force oracle scan.
  {
    const int draws = full ? 50 : 10;
    const std::string name = "n-eff-closed-vs-oracle/draws=" + std::to_string(draws);
    detail::guarded(out, name, [&](std::vector<Check>& o) {
      long mismatches = 0;
      for (int t = 0; t < draws; ++t) {
        TrajectoryRng rng(opt.seed, static_cast<std::uint64_t>(t));
        const double a = 0.3 + 2.7 * rng.uniform();
        const auto iv = delta_validity_interval(12, a);
        const double delta = iv.lo + (iv.hi - iv.lo) * rng.uniform();
        if (oracle_n_eff(delta, a) != n_eff_integer(delta, a)) ++mismatches;
      }
      o.push_back(make_check(name, static_cast<double>(mismatches), 0.0, 0.0));
    });
  }

  // Beamsplitter chain and cat splitting.
  for (int m : {2, 3, 4}) {
    for (double a : {0.5, 1.0, 1.5}) {
      const std::string name = "splitting-network/M=" + std::to_string(m) + ",alpha=" + fmt(a);
      detail::guarded(out, name, [&](std::vector<Check>& o) {
        o.push_back(make_check(name, check_splitting_network(m, a).fidelity, 1.0, 1e-8));
      });
    }
  }
  detail::guarded(out, "cat-splitting/N=3,alpha=0.8", [&](std::vector<Check>& o) {
    o.push_back(make_check("cat-splitting/N=3,alpha=0.8", check_cat_splitting(3, 0.8).fidelity,
                           1.0, 1e-8));
  });

  // Distillation POVM and the first-success law.
  for (double a : {0.5, 1.0, 2.0}) {
    const std::string name = "distillation-povm/alpha=" + fmt(a);
    detail::guarded(out, name, [&](std::vector<Check>& o) {
      const auto p = build_distillation_povm(a);
      o.push_back(make_check(name + "/completeness", p.completeness_error(), 0.0, 1e-12));
      o.push_back(make_check(name + "/rank-one-complement", p.complement_min_eigenvalue(), 0.0,
                             1e-12));
    });
  }
  detail::guarded(out, "distillation-tanh-sum", [&](std::vector<Check>& o) {
    double worst = 0.0;
    for (int n = 1; n <= 50; ++n) {
      for (double x : {0.05, 0.5, 1.0, 3.0, 10.0}) {
        double sum = 0.0;
        for (int m = 1; m <= n; ++m) sum += distill_pm(m, n, std::sqrt(x));
        worst = std::max(worst, std::abs(sum - std::tanh(n * x)));
      }
    }
    o.push_back(make_check("distillation-tanh-sum", worst, 0.0, 1e-12));
  });
  detail::guarded(out, "distillation-sequences-vs-fock", [&](std::vector<Check>& o) {
    const Complex a = 0.6;
    const int c = 20;
    const auto p = build_distillation_povm(a);
    const Vector b1 = coherent_vector(a, c, 1e-14).normalized().amplitudes();
    Vector b2 = coherent_vector(-a, c, 1e-14).normalized().amplitudes();
    b2 = (b2 - b1.dot(b2) * b1).normalized();
    Matrix basis(c + 1, 2);
    basis << b1, b2;
    const Matrix lift[2] = {basis * p.E2 * basis.adjoint(), basis * p.E1 * basis.adjoint()};
    double worst = 0.0;
    for (int n = 1; n <= (full ? 3 : 2); ++n) {
      const auto omega = fock_state(CatStateSpec{StateFamily::kOmega, n, a, {}}, c);
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<bool> seq(n);
        FockVector v = omega;
        for (int i = 0; i < n; ++i) {
          seq[i] = (mask >> i) & 1u;
          v = apply_local(lift[seq[i] ? 1 : 0], {i}, v);
        }
        const double oracle = v.amplitudes().squaredNorm() / omega.amplitudes().squaredNorm();
        worst = std::max(worst, std::abs(oracle - distillation_sequence_probability(n, a, seq)));
      }
    }
    o.push_back(make_check("distillation-sequences-vs-fock", worst, 0.0, 1e-10));
  });

  // Monte Carlo estimators against exact expectations (3 standard errors).
  const long trials = full ? 100000 : 20000;
  detail::guarded(out, "distillation-monte-carlo-mean", [&](std::vector<Check>& o) {
    const auto s = simulate_distillation(5, 0.8, trials, opt.seed, opt.threads);
    o.push_back(make_check("distillation-monte-carlo-mean", s.n.mean, distill_expected_n(5, 0.8),
                           3.0 * s.n.std_error));
  });
  detail::guarded(out, "mode-loss-monte-carlo", [&](std::vector<Check>& o) {
    const auto s = simulate_mode_loss(6, 1.0, 0.25, trials, opt.seed, opt.threads);
    o.push_back(make_check("mode-loss-monte-carlo/binomial-average", s.omega.mean,
                           mode_loss_offdiag_exact(6, 0.25, 1.0), 3.0 * s.omega.std_error));
    o.push_back(make_check("mode-loss-monte-carlo/ghz-reference", s.ghz.mean,
                           ghz_mode_loss_offdiag(6, 0.25), 3.0 * s.ghz.std_error));
  });
  detail::guarded(out, "collapse", [&](std::vector<Check>& o) {
    const auto bvb = simulate_branch_collapse(std::sqrt(2.0), trials, opt.seed,
                                              CollapseProblem::kBranchVsBranch, opt.threads);
    o.push_back(make_check("collapse/branch-vs-branch/xi-plus", bvb.stats.mean, 0.5,
                           3.0 * std::sqrt(0.25 / trials)));
    o.push_back(make_check("collapse/branch-vs-branch/min-fidelity",
                           std::min(bvb.min_fidelity_matched, 0.99), 0.99, 0.0));
    const auto cvm = simulate_branch_collapse(1.0, trials, opt.seed, CollapseProblem::kCatVsMixed,
                                              opt.threads);
    o.push_back(make_check("collapse/cat-vs-mixed/cat", cvm.stats.mean, 1.0, 0.0));
    const auto cvb = simulate_branch_collapse(std::sqrt(10.0), trials, opt.seed,
                                              CollapseProblem::kCatVsBranch, opt.threads);
    const double helstrom = 0.5 + 0.5 / std::numbers::sqrt2;
    o.push_back(make_check("collapse/cat-vs-branch/cat-outcome", cvb.first_outcome_frequency,
                           helstrom, 3.0 * std::sqrt(helstrom * (1.0 - helstrom) / trials)));
    const double pa = cvb.exact.at("final_alpha");
    o.push_back(make_check("collapse/cat-vs-branch/final-alpha-born", cvb.stats.mean, pa,
                           3.0 * std::sqrt(pa * (1.0 - pa) / trials)));
  });

  // Relative Fisher information: Gram reduction against the joint oracle.
  {
    const auto all = GeneratorFamily::of({GeneratorKind::kBoundedLocal, GeneratorKind::kQuadrature,
                                          GeneratorKind::kNumber, GeneratorKind::kSpinSandwich});
    for (auto fam : {StateFamily::kOmega, StateFamily::kHcs}) {
      for (int n : {1, 2}) {
        const std::string name = std::string("rqfi-gram-vs-oracle/") + to_string(fam) +
                                 ",N=" + std::to_string(n);
        detail::guarded(out, name, [&](std::vector<Check>& o) {
          const auto r = rqfi_size(CatStateSpec{fam, n, 1.0, {}}, all);
          o.push_back(make_check(name, r.number("oracle_variance_rel_error"), 0.0, 1e-9));
        });
      }
    }
    for (int n : {1, 2, 4}) {
      const std::string name = "rqfi-bounded-bound/N=" + std::to_string(n) + ",alpha=1.5";
      detail::guarded(out, name, [&](std::vector<Check>& o) {
        const auto r = rqfi_size(CatStateSpec{StateFamily::kOmega, n, 1.5, {}},
                                 GeneratorFamily::of({GeneratorKind::kBoundedLocal}));
        const auto& ratios = std::get<std::map<std::string, double>>(
            r.diagnostics.at("ratio_by_generator"));
        o.push_back(make_check(name, ratios.at("pseudo-sigma-z"), rqfi_bound_bounded(n, 1.5), 1e-9));
      });
    }
  }

  // Photon-number projection of a coherent product is Poisson.
  detail::guarded(out, "photon-number-pmf-poisson/N=2,alpha=1", [&](std::vector<Check>& o) {
    const auto pmf = product_photon_pmf(1.0, 2);
    double worst = 0.0;
    for (long d = 0; d <= 12; ++d) worst = std::max(worst, std::abs(pmf.pmf[d] - marquardt_pd(d, 2, 1.0)));
    o.push_back(make_check("photon-number-pmf-poisson/N=2,alpha=1", worst, 0.0, 1e-10));
  });

  // Wigner closed forms against the displaced-parity oracle.
  detail::guarded(out, "wigner-cat-closed-vs-oracle", [&](std::vector<Check>& o) {
    double worst = 0.0;
    for (const CatStateSpec& spec : {CatStateSpec{StateFamily::kEvenCat, 1, 2.0, {}},
                                     CatStateSpec{StateFamily::kOddCat, 1, 1.2, {}},
                                     CatStateSpec{StateFamily::kOmega, 2, 1.0, {}}}) {
      const auto v = fock_state(spec, cutoff_for_tail(2.0, 1e-16) + 8);
      for (int t = 0; t < 20; ++t) {
        TrajectoryRng rng(opt.seed ^ 0x5157u, static_cast<std::uint64_t>(t));
        std::vector<Complex> g(spec.modes);
        for (auto& z : g) z = Complex(5.0 * rng.uniform() - 2.5, 5.0 * rng.uniform() - 2.5);
        worst = std::max(worst, std::abs(wigner_cat_closed(spec, g) - wigner_numeric(v, g)));
      }
    }
    o.push_back(make_check("wigner-cat-closed-vs-oracle", worst, 0.0, 1e-8));
  });
  {
    const int points = full ? 200 : 20;
    const std::string name = "wigner-hcs2-closed-vs-oracle/alpha=1.5,points=" + std::to_string(points);
    detail::guarded(out, name, [&](std::vector<Check>& o) {
      const auto v = fock_state(CatStateSpec{StateFamily::kHcs, 2, 1.5, {}}, 40);
      double worst = 0.0;
      for (int t = 0; t < points; ++t) {
        TrajectoryRng rng(opt.seed ^ 0x4c52u, static_cast<std::uint64_t>(t));
        std::array<Complex, 2> g;
        for (auto& z : g) z = Complex(5.0 * rng.uniform() - 2.5, 5.0 * rng.uniform() - 2.5);
        worst = std::max(worst, std::abs(wigner_hcs2_closed(g[0], g[1], 1.5) - wigner_numeric(v, g)));
      }
      o.push_back(make_check(name, worst, 0.0, 1e-6));
    });
  }
  if (full) {
    const std::string name = "wigner-hcs2-closed-vs-oracle/alpha=3,spots";
    detail::guarded(out, name, [&](std::vector<Check>& o) {
      const auto v = fock_state(CatStateSpec{StateFamily::kHcs, 2, 3.0, {}}, 60);
      const std::array<std::array<Complex, 2>, 6> spots = {{{Complex(0.0), Complex(0.0)},
                                                           {Complex(3.0), Complex(3.0)},
                                                           {Complex(-3.0), Complex(3.0)},
                                                           {Complex(0.0, 0.2), Complex(3.0)},
                                                           {Complex(1.0, -0.5), Complex(0.0)},
                                                           {Complex(0.0), Complex(-3.0)}}};
      double worst = 0.0;
      for (const auto& s : spots) {
        worst = std::max(worst, std::abs(wigner_hcs2_closed(s[0], s[1], 3.0) - wigner_numeric(v, s)));
      }
      o.push_back(make_check(name, worst, 0.0, 1e-6));
    });
  }

  // Vacuum-mode invariance of the real-valued branch-distinguishability size.
  detail::guarded(out, "branch-dist-real-vacuum-invariance", [&](std::vector<Check>& o) {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      TrajectoryRng rng(opt.seed ^ 0x1a7u, static_cast<std::uint64_t>(t));
      const int n = 1 + static_cast<int>(rng.uniform() * 12);
      const double a = 0.2 + 2.0 * rng.uniform();
      const double delta = 1e-4 + 0.3 * rng.uniform();
      const double joint =
          branch_dist_size_real(CatStateSpec{StateFamily::kOmega, n, a, {}}, delta).value;
      const double single = branch_dist_size_real(
          CatStateSpec{StateFamily::kEvenCat, 1, std::sqrt(static_cast<double>(n)) * a, {}}, delta)
                                .value;
      worst = std::max(worst, std::abs(joint - single) / single);
    }
    o.push_back(make_check("branch-dist-real-vacuum-invariance", worst, 0.0, 1e-15));
  });
  return out;
}

}  // namespace catsize
