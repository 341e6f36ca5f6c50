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
 * Monte Carlo trajectories for sequential distillation, random mode loss
 * and two-outcome collapse measurements on cat states.
 *
 * States are kept in the two-dimensional span of |a> and |-a> per mode, so
 * every Born probability is exact and the joint space is never built.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "catsize/closed_forms.hpp"
#include "catsize/errors.hpp"
#include "catsize/fock.hpp"
#include "catsize/parallel.hpp"
#include "catsize/rng.hpp"

namespace catsize {

using Vector2 = Eigen::Vector2cd;
using Matrix2 = Eigen::Matrix2cd;

struct TrajectoryStats {
  long trials = 0;
  std::vector<std::pair<std::string, long>> histogram;  ///< outcome -> count, in outcome order
  double mean = 0.0;
  double variance = 0.0;   ///< unbiased sample variance of the per-trajectory value
  double std_error = 0.0;  ///< sqrt(variance / trials)
  std::uint64_t seed = 0;
  std::string seed_scheme = kSeedScheme;

  long count(const std::string& key) const {
    for (const auto& [k, c] : histogram) {
      if (k == key) return c;
    }
    return 0;
  }
};

namespace detail {

inline void require_trials(long trials) {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
}

/// Mean and unbiased variance with compensated summation in index order.
inline void summarize(TrajectoryStats& s, const std::vector<double>& values) {
  const auto kahan = [](const std::vector<double>& v, auto&& f) {
    double sum = 0.0, c = 0.0;
    for (double x : v) {
      const double y = f(x) - c;
      const double t = sum + y;
      c = (t - sum) - y;
      sum = t;
    }
    return sum;
  };
  const double n = static_cast<double>(values.size());
  s.trials = static_cast<long>(values.size());
  s.mean = kahan(values, [](double x) { return x; }) / n;
  const double m = s.mean;
  s.variance = values.size() > 1
                   ? kahan(values, [m](double x) { return (x - m) * (x - m); }) / (n - 1.0)
                   : 0.0;
  s.std_error = std::sqrt(s.variance / n);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Distillation POVM

/// Two-outcome measurement on span{|a>, |-a>} in the orthonormal frame
/// e1 = |a>, e2 = (|-a> - g|a>)/s with g = <a|-a> = e^{-2|a|^2}, s = sqrt(1-g^2).
struct DistillationPovm {
  Complex alpha;
  double g = 0.0;
  double s = 0.0;
  double k = 0.0;
  Vector2 e1, e2;
  Vector2 branch_plus;   ///< |a>
  Vector2 branch_minus;  ///< |-a>
  Vector2 phi_minus;     ///< orthogonal to |-a>
  Vector2 chi;           ///< E2^dag E2 = |chi><chi|
  Matrix2 E1, E2;

  double completeness_error() const {
    return (E1.adjoint() * E1 + E2.adjoint() * E2 - Matrix2::Identity()).cwiseAbs().maxCoeff();
  }

  /// Smaller eigenvalue of E2^dag E2 (zero for a rank-one complement).
  double complement_min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix2> es(E2.adjoint() * E2, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }

  double e1_probability(const Vector2& v) const { return (E1 * v).squaredNorm(); }
};

inline DistillationPovm build_distillation_povm(Complex alpha) {
  if (std::norm(alpha) == 0.0) throw DomainError("distillation POVM needs alpha != 0");
  DistillationPovm p;
  p.alpha = alpha;
  p.g = std::exp(-2.0 * std::norm(alpha));
  p.s = std::sqrt(-std::expm1(-4.0 * std::norm(alpha)));
  p.e1 = Vector2(1.0, 0.0);
  p.e2 = Vector2(0.0, 1.0);
  p.branch_plus = p.e1;
  p.branch_minus = Vector2(p.g, p.s);
  p.phi_minus = Vector2(p.s, -p.g);
  const Matrix2 shape = p.e1 * p.e2.adjoint() + p.e2 * p.phi_minus.adjoint();
  // Largest k keeping I - E1^dag E1 positive: the top eigenvalue of
  // k^2 shape^dag shape must equal 1, which also makes the complement rank one.
  Eigen::SelfAdjointEigenSolver<Matrix2> es(shape.adjoint() * shape);
  p.k = 1.0 / std::sqrt(es.eigenvalues()(1));
  p.E1 = p.k * shape;
  const Matrix2 complement = Matrix2::Identity() - p.E1.adjoint() * p.E1;
  // The complement is rank one; taking E2 = |chi><chi|/|chi| directly avoids
  // the sqrt of a rounding-level eigenvalue.
  Eigen::SelfAdjointEigenSolver<Matrix2> ec(complement);
  p.chi = std::sqrt(std::max(0.0, ec.eigenvalues()(1))) * ec.eigenvectors().col(1);
  p.E2 = p.chi * p.chi.adjoint() / p.chi.norm();
  return p;
}

// ---------------------------------------------------------------------------
// Two-branch sequential measurement

/// c_a |U> + c_b |V> with |U>, |V> unit product vectors. Unmeasured modes
/// hold |a> and |-a>; measured modes hold the normalised post-measurement
/// factors, whose overlaps are folded into `measured_overlap`.
struct TwoBranchTrajectory {
  Complex ca, cb;
  Complex measured_overlap{1.0};
  int unmeasured = 0;
  double g = 0.0;

  static TwoBranchTrajectory omega(int modes, Complex alpha) {
    const double c = omega_norm(modes, alpha);
    return {c, c, Complex(1.0), modes, std::exp(-2.0 * std::norm(alpha))};
  }

  Complex overlap() const { return measured_overlap * std::pow(g, unmeasured); }

  double norm2() const {
    return std::norm(ca) + std::norm(cb) + 2.0 * (std::conj(ca) * cb * overlap()).real();
  }

  /// Probability of `effect` on the next unmeasured mode.
  double probability(const DistillationPovm& p, const Matrix2& effect) const {
    const Vector2 u = effect * p.branch_plus, v = effect * p.branch_minus;
    const Complex rest = measured_overlap * std::pow(g, unmeasured - 1);
    return std::norm(ca) * u.squaredNorm() + std::norm(cb) * v.squaredNorm() +
           2.0 * (std::conj(ca) * cb * rest * u.dot(v)).real();
  }

  /// Applies `effect` to the next unmeasured mode and renormalises.
  void apply(const DistillationPovm& p, const Matrix2& effect, double prob) {
    if (unmeasured < 1) throw InvalidArgument("every mode has been measured");
    const Vector2 u = effect * p.branch_plus, v = effect * p.branch_minus;
    const double nu = u.norm(), nv = v.norm();
    const double scale = 1.0 / std::sqrt(prob);
    ca *= nu * scale;
    cb *= nv * scale;
    measured_overlap *= (nu > 0.0 && nv > 0.0) ? u.dot(v) / (nu * nv) : Complex(0.0);
    --unmeasured;
  }
};

struct DistillationStats {
  TrajectoryStats n;  ///< n(N) = number of E1 outcomes; "no_e1" holds the n = 0 trajectories
  std::vector<long> first_e1;  ///< first_e1[m-1]: trajectories whose first E1 was at mode m
  long no_e1 = 0;
  double max_norm_deviation = 0.0;
};

/// Exact probability of one outcome sequence (true = E1) on |Omega>.
inline double distillation_sequence_probability(int modes, Complex alpha,
                                                const std::vector<bool>& outcomes) {
  if (static_cast<int>(outcomes.size()) != modes) throw InvalidArgument("one outcome per mode");
  const auto p = build_distillation_povm(alpha);
  auto t = TwoBranchTrajectory::omega(modes, alpha);
  double total = 1.0;
  for (bool e1 : outcomes) {
    const Matrix2& eff = e1 ? p.E1 : p.E2;
    const double q = t.probability(p, eff);
    total *= q;
    if (q <= 0.0) return 0.0;
    t.apply(p, eff, q);
  }
  return total;
}

inline DistillationStats simulate_distillation(int modes, Complex alpha, long trials,
                                               std::uint64_t seed, int threads = 0) {
  detail::require_trials(trials);
  if (modes < 1) throw InvalidArgument("modes must be >= 1");
  const auto povm = build_distillation_povm(alpha);
  std::vector<double> n_val(trials);
  std::vector<int> first(trials);
  std::vector<double> dev(trials);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
    TrajectoryRng rng(seed, i);
    auto t = TwoBranchTrajectory::omega(modes, alpha);
    int count = 0, first_m = 0;
    double worst = 0.0;
    for (int m = 1; m <= modes; ++m) {
      const double p1 = std::clamp(t.probability(povm, povm.E1), 0.0, 1.0);
      const bool e1 = rng.uniform() < p1;
      t.apply(povm, e1 ? povm.E1 : povm.E2, e1 ? p1 : 1.0 - p1);
      worst = std::max(worst, std::abs(t.norm2() - 1.0));
      if (e1) {
        ++count;
        if (first_m == 0) first_m = m;
      }
    }
    n_val[i] = count;
    first[i] = first_m;
    dev[i] = worst;
  });
  DistillationStats out;
  out.first_e1.assign(modes, 0);
  std::vector<long> hist(modes + 1, 0);
  for (long i = 0; i < trials; ++i) {
    hist[static_cast<int>(n_val[i])]++;
    if (first[i] > 0) out.first_e1[first[i] - 1]++;
    out.max_norm_deviation = std::max(out.max_norm_deviation, dev[i]);
  }
  out.no_e1 = hist[0];
  out.n.histogram.emplace_back("no_e1", hist[0]);
  for (int k = 1; k <= modes; ++k) out.n.histogram.emplace_back(std::to_string(k), hist[k]);
  detail::summarize(out.n, n_val);
  out.n.seed = seed;
  return out;
}

// ---------------------------------------------------------------------------
// Mode loss

struct ModeLossStats {
  TrajectoryStats omega;  ///< surviving off-diagonal amplitude of |Omega>; histogram over lost modes
  TrajectoryStats ghz;    ///< GHZ reference on the same loss draws
};

inline ModeLossStats simulate_mode_loss(int modes, Complex alpha, double lambda, long trials,
                                        std::uint64_t seed, int threads = 0) {
  detail::require_trials(trials);
  detail::require_lambda(lambda);
  if (modes < 1) throw InvalidArgument("modes must be >= 1");
  const double w = omega_norm(modes, alpha) * omega_norm(modes, alpha);
  const double x = std::norm(alpha);
  std::vector<int> lost(trials);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
    TrajectoryRng rng(seed, i);
    int k = 0;
    for (int m = 0; m < modes; ++m) k += rng.bernoulli(lambda) ? 1 : 0;
    lost[i] = k;
  });
  std::vector<double> om(trials), gh(trials);
  std::vector<long> hist(modes + 1, 0);
  for (long i = 0; i < trials; ++i) {
    om[i] = std::exp(-2.0 * lost[i] * x) * w;
    gh[i] = lost[i] == 0 ? 0.5 : 0.0;
    hist[lost[i]]++;
  }
  ModeLossStats out;
  for (int k = 0; k <= modes; ++k) out.omega.histogram.emplace_back(std::to_string(k), hist[k]);
  out.ghz.histogram = {{"intact", hist[0]}, {"lost", trials - hist[0]}};
  detail::summarize(out.omega, om);
  detail::summarize(out.ghz, gh);
  out.omega.seed = out.ghz.seed = seed;
  return out;
}

// ---------------------------------------------------------------------------
// Collapse under two-outcome discrimination

enum class CollapseProblem { kBranchVsBranch, kCatVsMixed, kCatVsBranch };

inline const char* to_string(CollapseProblem p) {
  switch (p) {
    case CollapseProblem::kBranchVsBranch: return "branch-vs-branch";
    case CollapseProblem::kCatVsMixed: return "cat-vs-mixed";
    case CollapseProblem::kCatVsBranch: return "cat-vs-branch";
  }
  return "?";
}

/// Helstrom projectors {P, I - P} for rho vs sigma, P onto the positive part.
struct HelstromPair {
  Matrix2 first;
  Matrix2 second;
};

inline HelstromPair helstrom_2d(const Matrix2& rho, const Matrix2& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix2> es(rho - sigma);
  Matrix2 p = Matrix2::Zero();
  for (int i = 0; i < 2; ++i) {
    if (es.eigenvalues()(i) > 0.0) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  }
  return {p, Matrix2::Identity() - p};
}

/// |a>, |-a> and the cat in the kitten frame {psi_+, psi_-}.
struct KittenFrame {
  Vector2 plus, minus, cat, xi_plus, xi_minus;
};

inline KittenFrame kitten_frame(Complex alpha) {
  const double ap = a_plus(alpha) / 2.0, am = a_minus(alpha) / 2.0;
  const double r = 1.0 / std::numbers::sqrt2;
  return {Vector2(ap, am), Vector2(ap, -am), Vector2(1.0, 0.0), Vector2(r, r), Vector2(r, -r)};
}

struct CollapseStats {
  CollapseProblem problem = CollapseProblem::kBranchVsBranch;
  /// Mean of an indicator: xi_+ outcome (branch-vs-branch), cat outcome
  /// (cat-vs-mixed) or final |a> (cat-vs-branch).
  TrajectoryStats stats;
  std::string indicator;
  double first_outcome_frequency = 0.0;   ///< xi_+ or cat outcome
  double mean_fidelity_matched = 0.0;     ///< post-state fidelity with the branch the outcome names
  double min_fidelity_matched = 1.0;
  double max_norm_deviation = 0.0;
  std::map<std::string, double> exact;    ///< Born probabilities of each outcome
};

/// Applies the Helstrom measurement of the chosen problem to the even cat;
/// cat-vs-branch is followed by a projective measurement in the symmetric
/// orthonormalisation {xi_+, xi_-} of {|a>, |-a>}.
inline CollapseStats simulate_branch_collapse(Complex alpha, long trials, std::uint64_t seed,
                                              CollapseProblem problem, int threads = 0) {
  detail::require_trials(trials);
  if (std::norm(alpha) == 0.0) throw DomainError("collapse analysis needs alpha != 0");
  const KittenFrame f = kitten_frame(alpha);
  const Matrix2 rho_cat = f.cat * f.cat.adjoint();
  const Matrix2 rho_a = f.plus * f.plus.adjoint() / f.plus.squaredNorm();
  const Matrix2 rho_m = f.minus * f.minus.adjoint() / f.minus.squaredNorm();
  HelstromPair h;
  std::string first_label, second_label;
  switch (problem) {
    case CollapseProblem::kBranchVsBranch:
      h = helstrom_2d(rho_a, rho_m);
      first_label = "xi+", second_label = "xi-";
      break;
    case CollapseProblem::kCatVsMixed:
      h = helstrom_2d(rho_cat, 0.5 * (rho_a + rho_m));
      first_label = "cat", second_label = "mixed";
      break;
    case CollapseProblem::kCatVsBranch:
      h = helstrom_2d(rho_cat, rho_a);
      first_label = "cat", second_label = "branch";
      break;
  }
  const Vector2 pa = f.plus / f.plus.norm(), pm = f.minus / f.minus.norm();
  const Vector2 post[2] = {h.first * f.cat, h.second * f.cat};
  const double prob[2] = {post[0].squaredNorm(), post[1].squaredNorm()};
  Vector2 unit[2];
  double fid_a[2], fid_m[2], final_a[2];
  for (int o = 0; o < 2; ++o) {
    unit[o] = prob[o] > 0.0 ? Vector2(post[o] / std::sqrt(prob[o])) : Vector2::Zero();
    fid_a[o] = std::norm(pa.dot(unit[o]));
    fid_m[o] = std::norm(pm.dot(unit[o]));
    final_a[o] = std::norm(f.xi_plus.dot(unit[o]));
  }

  std::vector<int> first(trials), second(trials);
  parallel_for(static_cast<std::size_t>(trials), threads, [&](std::size_t i) {
    TrajectoryRng rng(seed, i);
    const int o = rng.uniform() < prob[0] ? 0 : 1;
    first[i] = o;
    second[i] = problem == CollapseProblem::kCatVsBranch ? (rng.uniform() < final_a[o] ? 0 : 1) : 0;
  });

  CollapseStats out;
  out.problem = problem;
  std::vector<double> ind(trials);
  long c[2][2] = {{0, 0}, {0, 0}};
  double fsum = 0.0;
  for (long i = 0; i < trials; ++i) {
    const int o = first[i];
    c[o][second[i]]++;
    double matched = 0.0;
    switch (problem) {
      case CollapseProblem::kBranchVsBranch:
        ind[i] = o == 0 ? 1.0 : 0.0;
        matched = o == 0 ? fid_a[0] : fid_m[1];
        break;
      case CollapseProblem::kCatVsMixed:
        ind[i] = o == 0 ? 1.0 : 0.0;
        matched = std::max(fid_a[o], fid_m[o]);
        break;
      case CollapseProblem::kCatVsBranch:
        ind[i] = second[i] == 0 ? 1.0 : 0.0;
        matched = second[i] == 0 ? fid_a[o] : fid_m[o];
        break;
    }
    fsum += matched;
    out.min_fidelity_matched = std::min(out.min_fidelity_matched, matched);
  }
  out.mean_fidelity_matched = fsum / static_cast<double>(trials);
  out.first_outcome_frequency = static_cast<double>(c[0][0] + c[0][1]) / trials;
  if (problem == CollapseProblem::kCatVsBranch) {
    out.indicator = "final_alpha";
    out.stats.histogram = {{first_label + "/alpha", c[0][0]},
                           {first_label + "/-alpha", c[0][1]},
                           {second_label + "/alpha", c[1][0]},
                           {second_label + "/-alpha", c[1][1]}};
    out.exact["final_alpha"] = prob[0] * final_a[0] + prob[1] * final_a[1];
    out.exact["final_alpha_given_" + first_label] = final_a[0];
    out.exact["final_alpha_given_" + second_label] = final_a[1];
  } else {
    out.indicator = first_label;
    out.stats.histogram = {{first_label, c[0][0]}, {second_label, c[1][0]}};
  }
  out.exact[first_label] = prob[0];
  out.exact[second_label] = prob[1];
  out.max_norm_deviation = std::abs(prob[0] + prob[1] - 1.0);
  detail::summarize(out.stats, ind);
  out.stats.seed = seed;
  return out;
}

}  // namespace catsize
