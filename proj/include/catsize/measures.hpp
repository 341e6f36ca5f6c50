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
 * Cat-size measures with uniform results.
 *
 * Each measure returns a MeasureResult carrying the value, the inputs, how it
 * was obtained and a map of diagnostics. Fisher-information sizes are
 * evaluated per generator over a finite family and are therefore lower
 * bounds.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Eigenvalues>

#include "catsize/closed_forms.hpp"
#include "catsize/errors.hpp"
#include "catsize/fock.hpp"
#include "catsize/phase_space.hpp"
#include "catsize/two_branch.hpp"

namespace catsize {

enum class Measure {
  kBranchDistInt,
  kBranchDistReal,
  kRqfi,
  kMarquardt,
  kDistillation,
  kModeLoss,
  kWignerEmpirical,
};

inline const char* to_string(Measure m) {
  switch (m) {
    case Measure::kBranchDistInt: return "branch-dist";
    case Measure::kBranchDistReal: return "branch-dist-real";
    case Measure::kRqfi: return "rqfi";
    case Measure::kMarquardt: return "marquardt";
    case Measure::kDistillation: return "distill";
    case Measure::kModeLoss: return "mode-loss";
    case Measure::kWignerEmpirical: return "wigner-empirical";
  }
  return "?";
}

enum class Method { kClosedForm, kOracle, kHybrid, kLowerBound };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::kClosedForm: return "closed-form";
    case Method::kOracle: return "oracle";
    case Method::kHybrid: return "hybrid";
    case Method::kLowerBound: return "lower-bound";
  }
  return "?";
}

using DiagnosticValue = std::variant<bool, long, double, std::string, std::vector<double>,
                                     std::map<std::string, double>>;
using Diagnostics = std::map<std::string, DiagnosticValue>;

struct MeasureResult {
  Measure measure = Measure::kBranchDistInt;
  double value = 0.0;
  MeasureParams params;
  CatStateSpec state;
  Method method = Method::kClosedForm;
  Diagnostics diagnostics;

  double number(const std::string& key) const { return std::get<double>(diagnostics.at(key)); }
};

namespace detail {

inline void require_family(const CatStateSpec& spec, std::initializer_list<StateFamily> allowed,
                           const char* measure) {
  spec.validate();
  for (StateFamily f : allowed) {
    if (spec.family == f) return;
  }
  throw InvalidArgument(std::string(measure) + " is not defined for state " +
                        to_string(spec.family));
}

/// |a><a| - |b><b| in span{a, b} given <a|b>, in the orthonormal frame
/// a = (1, 0), b = (o, s).
inline Matrix pure_pair_frame(Complex o, bool first) {
  const double s = std::sqrt(std::max(0.0, 1.0 - std::norm(o)));
  Eigen::Vector2cd v = first ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(o, s);
  return v * v.adjoint();
}

inline double pure_difference_trace_norm(Complex o) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(pure_pair_frame(o, true) - pure_pair_frame(o, false),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

/// Helstrom error for two unit pure states with overlap o, written so that
/// |o|^2 far below one ulp of 1 keeps full relative precision.
inline double pure_pair_error(Complex o) {
  const double q = std::min(1.0, std::norm(o));
  return q / (2.0 * (1.0 + std::sqrt(1.0 - q)));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Branch distinguishability

struct BranchSuccessOracle {
  double success = 0.5;
  double error = 0.5;  ///< 1 - success, evaluated without cancellation
  std::string route;  ///< "dense-trace-norm" or "rank-2-support"
};

/// Helstrom success for |a>^n vs |-a>^n from truncated Fock vectors. Small
/// joint spaces use the dense trace norm of the density difference; larger
/// ones diagonalise the difference on its two-dimensional support using the
/// numeric single-mode overlap.
inline BranchSuccessOracle oracle_branch_success(int n, Complex alpha, int cutoff = 0) {
  if (n < 0) throw InvalidArgument("number of measured modes must be non-negative");
  if (n == 0) return {0.5, 0.5, "trivial"};
  if (cutoff == 0) cutoff = bracket_cutoff(alpha);
  const FockVector p = coherent_vector(alpha, cutoff, 1e-12);
  const FockVector m = coherent_vector(-alpha, cutoff, 1e-12);
  if (joint_dim_fits(cutoff, n, 1024)) {
    std::vector<FockVector> ps(n, p), ms(n, m);
    const FockVector jp = tensor(std::span<const FockVector>(ps));
    const FockVector jm = tensor(std::span<const FockVector>(ms));
    const FockOperator rp = density(jp), rm = density(jm);
    const double tn = trace_norm(rp - rm);
    const Complex o = jp.inner(jm) / (jp.norm() * jm.norm());
    return {0.5 + tn / 4.0, detail::pure_pair_error(o), "dense-trace-norm"};
  }
  const Complex o = detail::cpow(p.inner(m) / (p.norm() * m.norm()), n);
  return {0.5 + detail::pure_difference_trace_norm(o) / 4.0, detail::pure_pair_error(o),
          "rank-2-support"};
}

/// Smallest n whose oracle error is at most delta (brute-force scan).
inline long oracle_n_eff(double delta, Complex alpha, long n_max = 100000) {
  detail::require_delta(delta);
  detail::require_nonzero(alpha);
  const int cutoff = bracket_cutoff(alpha);
  for (long n = 1; n <= n_max; ++n) {
    if (oracle_branch_success(static_cast<int>(n), alpha, cutoff).error <= delta) return n;
  }
  throw DomainError("no n <= n_max reaches the requested success probability");
}

/// C_delta = N / n_eff for |Omega>, with an oracle cross-check of n_eff.
inline MeasureResult branch_dist_size(const CatStateSpec& spec, double delta) {
  detail::require_family(spec, {StateFamily::kOmega}, "branch-dist");
  const CatSizeC c = cat_size_c(delta, spec.modes, spec.alpha);
  MeasureResult r;
  r.measure = Measure::kBranchDistInt;
  r.value = c.value;
  r.params.delta = delta;
  r.state = spec;
  r.method = Method::kHybrid;
  r.diagnostics["n_eff"] = c.n_eff;
  r.diagnostics["n_eff_real"] = n_eff_real(delta, spec.alpha);
  r.diagnostics["approximate_value"] = c.approximate;
  r.diagnostics["validity_interval"] = std::vector<double>{c.interval.lo, c.interval.hi};
  const int cutoff = bracket_cutoff(spec.alpha);
  const auto at = oracle_branch_success(static_cast<int>(c.n_eff), spec.alpha, cutoff);
  const auto below = oracle_branch_success(static_cast<int>(c.n_eff) - 1, spec.alpha, cutoff);
  r.diagnostics["oracle_success_at_n_eff"] = at.success;
  r.diagnostics["oracle_success_below_n_eff"] = below.success;
  r.diagnostics["oracle_route"] = at.route;
  r.diagnostics["oracle_error_at_n_eff"] = at.error;
  r.diagnostics["oracle_consistent"] = at.error <= delta && below.error > delta;
  return r;
}

/// C~_delta = -4 N|a|^2 / log(4 delta - 4 delta^2). Single-mode cats count
/// as one mode carrying the whole amplitude.
inline MeasureResult branch_dist_size_real(const CatStateSpec& spec, double delta) {
  detail::require_family(spec, {StateFamily::kOmega, StateFamily::kEvenCat, StateFamily::kOddCat},
                         "branch-dist-real");
  detail::require_delta(delta);
  detail::require_nonzero(spec.alpha);
  if (spec.family != StateFamily::kOmega && spec.modes != 1) {
    throw InvalidArgument("single-mode cats take modes = 1");
  }
  const double total = spec.modes * std::norm(spec.alpha);
  MeasureResult r;
  r.measure = Measure::kBranchDistReal;
  r.value = -4.0 * total / detail::log_chance_gap(delta);
  r.params.delta = delta;
  r.state = spec;
  r.method = Method::kClosedForm;
  r.diagnostics["n_eff_real"] = n_eff_real(delta, spec.alpha);
  r.diagnostics["total_intensity"] = total;
  return r;
}

// ---------------------------------------------------------------------------
// Relative quantum Fisher information

/// One single-mode operator O; the generator is sum_i O_i.
struct GeneratorMember {
  std::string name;
  GeneratorKind kind;
  Matrix op;
};

/// A finite set of local generators: the union of the listed kinds.
/// Quadrature phases are arg(alpha) + k pi / phases, so the set co-rotates
/// with the amplitude.
struct GeneratorFamily {
  std::vector<GeneratorKind> kinds;
  int quadrature_phases = 16;

  static GeneratorFamily of(std::initializer_list<GeneratorKind> k) { return {k, 16}; }

  bool contains(GeneratorKind k) const {
    return std::find(kinds.begin(), kinds.end(), k) != kinds.end();
  }

  std::string name() const {
    std::string s;
    for (GeneratorKind k : kinds) s += (s.empty() ? "" : "+") + std::string(to_string(k));
    return s;
  }

  std::vector<GeneratorMember> members(Complex alpha, int cutoff) const {
    detail::require_nonzero(alpha);
    std::vector<GeneratorMember> out;
    const auto ops = mode_ops(cutoff);
    const auto kit = kittens(alpha, cutoff);
    const Vector& kp = kit[0];
    const Vector& km = kit[1];
    const Matrix sz = kp * kp.adjoint() - km * km.adjoint();
    const Matrix sx = kp * km.adjoint() + km * kp.adjoint();
    const Complex i(0.0, 1.0);
    const Matrix sy = -i * (kp * km.adjoint()) + i * (km * kp.adjoint());
    for (GeneratorKind k : kinds) {
      switch (k) {
        case GeneratorKind::kBoundedLocal: {
          const Vector p = coherent_vector(alpha, cutoff, 1e-12).amplitudes();
          const Vector m = coherent_vector(-alpha, cutoff, 1e-12).amplitudes();
          const double scale = std::sqrt(-std::expm1(-4.0 * std::norm(alpha)));
          out.push_back({"pseudo-sigma-z", k, (p * p.adjoint() - m * m.adjoint()) / scale});
          out.push_back({"kitten-sigma-z", k, sz});
          out.push_back({"kitten-sigma-y", k, sy});
          break;
        }
        case GeneratorKind::kQuadrature:
          for (int j = 0; j < quadrature_phases; ++j) {
            const double phi = std::arg(alpha) + std::numbers::pi * j / quadrature_phases;
            out.push_back({"quadrature[" + std::to_string(j) + "/" +
                               std::to_string(quadrature_phases) + "]",
                           k, ops.quadrature(phi).matrix()});
          }
          break;
        case GeneratorKind::kNumber:
          out.push_back({"number", k, ops.number.matrix()});
          break;
        case GeneratorKind::kSpinSandwich: {
          const Matrix a = ops.annihilation.matrix();
          out.push_back({"a-dag-sigma-z-a", k, a.adjoint() * sz * a});
          out.push_back({"a-dag-sigma-x-a", k, a.adjoint() * sx * a});
          break;
        }
      }
    }
    for (const auto& m : out) {
      if (m.kind != GeneratorKind::kBoundedLocal) continue;
      Eigen::SelfAdjointEigenSolver<Matrix> es(m.op, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().cwiseAbs().maxCoeff() > 1.0 + 1e-9) {
        throw Error("bounded generator " + m.name + " exceeds unit operator norm");
      }
    }
    return out;
  }
};

struct RqfiOptions {
  /// Recompute every variance on the joint Fock space when it fits.
  bool oracle_check = true;
  std::size_t oracle_max_dim = 1u << 13;
};

/// Relative Fisher-information size of OMEGA or HCS over a generator family.
///
/// For each member A the superposition's Var(A)/N is divided by the branch
/// average of Var(A)/N; bounded members use the product-state supremum 1.
/// The value is the largest such ratio.
inline MeasureResult rqfi_size(const CatStateSpec& spec, const GeneratorFamily& family,
                               const RqfiOptions& opt = {}) {
  detail::require_family(spec, {StateFamily::kOmega, StateFamily::kHcs}, "rqfi");
  detail::require_nonzero(spec.alpha);
  if (family.kinds.empty()) throw InvalidArgument("empty generator family");
  const TwoBranchState s = two_branch(spec);
  const auto members = family.members(spec.alpha, s.cutoff);
  const double n = spec.modes;

  std::optional<FockVector> joint;
  if (opt.oracle_check && joint_dim_fits(s.cutoff, spec.modes, opt.oracle_max_dim)) {
    joint = fock_state(spec, s.cutoff);
  }

  MeasureResult r;
  r.measure = Measure::kRqfi;
  r.state = spec;
  r.method = Method::kLowerBound;
  std::map<std::string, double> ratios, normalized;
  double best = -1.0, sup_psi = 0.0, sup_branch[2] = {0.0, 0.0};
  double oracle_err = 0.0;
  std::string best_name;
  GeneratorKind best_kind = family.kinds.front();
  for (const auto& m : members) {
    const double var = local_sum_moments(s, m.op).variance;
    const double b0 = product_variance(s.branches[0], m.op, spec.modes) / n;
    const double b1 = product_variance(s.branches[1], m.op, spec.modes) / n;
    const bool bounded = m.kind == GeneratorKind::kBoundedLocal;
    const double denom = bounded ? 1.0 : 0.5 * (b0 + b1);
    sup_psi = std::max(sup_psi, var / n);
    sup_branch[0] = std::max(sup_branch[0], bounded ? 1.0 : b0);
    sup_branch[1] = std::max(sup_branch[1], bounded ? 1.0 : b1);
    normalized[m.name] = var / n;
    if (joint) {
      FockVector av(joint->cutoff(), joint->modes(), Vector::Zero(joint->amplitudes().size()));
      for (int i = 0; i < spec.modes; ++i) av = av + apply_local(m.op, {i}, *joint);
      const double mean = joint->inner(av).real();
      const double oracle_var = av.amplitudes().squaredNorm() - mean * mean;
      oracle_err = std::max(oracle_err, std::abs(oracle_var - var) / std::max(1.0, var));
    }
    if (denom <= 1e-300) continue;  // generator leaves both branches invariant
    const double ratio = (var / n) / denom;
    ratios[m.name] = ratio;
    if (ratio > best) {
      best = ratio;
      best_name = m.name;
      best_kind = m.kind;
    }
  }
  if (best < 0.0) throw DomainError("no family member moves the branches");
  r.value = best;
  r.params.generator_family = best_kind;
  r.diagnostics["family"] = family.name();
  r.diagnostics["achieving_generator"] = best_name;
  r.diagnostics["ratio_by_generator"] = ratios;
  r.diagnostics["variance_per_mode_by_generator"] = normalized;
  r.diagnostics["branch_max_0"] = sup_branch[0];
  r.diagnostics["branch_max_1"] = sup_branch[1];
  r.diagnostics["max_over_max_ratio"] = sup_psi / (0.5 * (sup_branch[0] + sup_branch[1]));
  r.diagnostics["cutoff"] = static_cast<long>(s.cutoff);
  if (joint) r.diagnostics["oracle_variance_rel_error"] = oracle_err;
  return r;
}

inline std::vector<MeasureResult> rqfi_sweep(CatStateSpec spec, const GeneratorFamily& family,
                                             std::span<const int> modes_list,
                                             const RqfiOptions& opt = {}) {
  std::vector<MeasureResult> out;
  for (int n : modes_list) {
    spec.modes = n;
    out.push_back(rqfi_size(spec, family, opt));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Marquardt size

struct PhotonNumberPmf {
  std::vector<double> pmf;  ///< weight of each total photon number
  double mean = 0.0;
  double captured = 0.0;  ///< total weight kept by the truncation
};

/// Total-photon-number distribution of the product |beta>^N.
inline PhotonNumberPmf product_photon_pmf(Complex beta, int modes, int cutoff = 0) {
  if (cutoff == 0) cutoff = cutoff_for_tail(std::abs(beta), 1e-17) + 4;
  if (!joint_dim_fits(cutoff, modes, kMaxJointDim)) {
    throw SizingError("joint space (cutoff " + std::to_string(cutoff) + ", " +
                      std::to_string(modes) + " modes) exceeds the oracle limit");
  }
  const FockVector one = coherent_vector(beta, cutoff, 1e-12);
  std::vector<FockVector> parts(modes, one);
  const FockVector joint = tensor(std::span<const FockVector>(parts));
  PhotonNumberPmf out;
  out.pmf.assign(static_cast<std::size_t>(modes) * cutoff + 1, 0.0);
  const std::size_t d = static_cast<std::size_t>(cutoff) + 1;
  for (Eigen::Index i = 0; i < joint.amplitudes().size(); ++i) {
    std::size_t rest = static_cast<std::size_t>(i), total = 0;
    for (int m = 0; m < modes; ++m) {
      total += rest % d;
      rest /= d;
    }
    out.pmf[total] += std::norm(joint.amplitudes()(i));
  }
  for (std::size_t k = 0; k < out.pmf.size(); ++k) {
    out.mean += static_cast<double>(k) * out.pmf[k];
    out.captured += out.pmf[k];
  }
  return out;
}

/// s = N|a|^2. With numeric_check the total-photon-number pmf of the
/// displaced branch |2a>^N is projected on the oracle and compared with the
/// Poisson(s) weights for d <= max_d.
inline MeasureResult marquardt_size(const CatStateSpec& spec, bool numeric_check, int max_d = 12) {
  detail::require_family(spec, {StateFamily::kOmega}, "marquardt");
  MeasureResult r;
  r.measure = Measure::kMarquardt;
  r.state = spec;
  r.value = marquardt_s(spec.modes, spec.alpha);
  r.method = numeric_check ? Method::kHybrid : Method::kClosedForm;
  r.diagnostics["mapping"] = std::string(
      "D(-a) on every mode maps |2a>^N to |a>^N; the recursive subspaces are carried along, "
      "so the |2a>^N amplitudes on H_d equal the |a>^N amplitudes on D H_d");
  if (!numeric_check) return r;
  const auto projected = product_photon_pmf(2.0 * spec.alpha, spec.modes);
  double err = 0.0;
  std::vector<double> head;
  for (int d = 0; d <= max_d; ++d) {
    const double observed = d < static_cast<int>(projected.pmf.size()) ? projected.pmf[d] : 0.0;
    head.push_back(observed);
    err = std::max(err, std::abs(observed - marquardt_pd(d, spec.modes, spec.alpha)));
  }
  r.diagnostics["projected_pmf"] = head;
  r.diagnostics["pmf_max_abs_error"] = err;
  r.diagnostics["pmf_mean"] = projected.mean;
  r.diagnostics["pmf_mean_error"] = std::abs(projected.mean - r.value);
  r.diagnostics["pmf_matches_poisson"] = err <= 1e-10 && std::abs(projected.mean - r.value) <= 1e-8;
  return r;
}

// ---------------------------------------------------------------------------
// Distillation and mode loss

inline MeasureResult distillation_size(const CatStateSpec& spec) {
  detail::require_family(spec, {StateFamily::kOmega}, "distill");
  MeasureResult r;
  r.measure = Measure::kDistillation;
  r.state = spec;
  r.value = distill_expected_n(spec.modes, spec.alpha);
  r.method = Method::kClosedForm;
  if (std::norm(spec.alpha) > 0.0) {
    std::vector<double> pm;
    for (int m = 1; m <= std::min(spec.modes, 64); ++m) pm.push_back(distill_pm(m, spec.modes, spec.alpha));
    r.diagnostics["first_e1_probability"] = pm;
  }
  r.diagnostics["no_e1_probability"] =
      1.0 - std::tanh(spec.modes * std::norm(spec.alpha));
  return r;
}

inline MeasureResult mode_loss_size(const CatStateSpec& spec, double lambda) {
  detail::require_family(spec, {StateFamily::kOmega}, "mode-loss");
  detail::require_lambda(lambda);
  MeasureResult r;
  r.measure = Measure::kModeLoss;
  r.state = spec;
  r.params.lambda = lambda;
  r.value = equivalent_ghz_size(spec.modes, spec.alpha);
  r.method = Method::kClosedForm;
  r.diagnostics["omega_offdiag"] = mode_loss_offdiag(spec.modes, lambda, spec.alpha);
  r.diagnostics["omega_offdiag_binomial"] = mode_loss_offdiag_exact(spec.modes, lambda, spec.alpha);
  r.diagnostics["omega_offdiag_single_exponent"] =
      mode_loss_offdiag_single_exponent(spec.modes, lambda, spec.alpha);
  r.diagnostics["ghz_offdiag"] = ghz_mode_loss_offdiag(spec.modes, lambda);
  return r;
}

// ---------------------------------------------------------------------------
// Empirical Wigner size

struct WignerEmpiricalOptions {
  double margin = 3.0;   ///< window half-width beyond the lobes
  int min_steps = 161;
  int threads = 0;
};

/// Plane through the two lobes of OMEGA (the common re/im diagonal) or of a
/// single-mode cat, rotated so the lobes lie on the first axis.
inline WignerGrid wigner_lobe_plane(const CatStateSpec& spec, const WignerEmpiricalOptions& opt = {}) {
  detail::require_family(spec, {StateFamily::kOmega, StateFamily::kEvenCat}, "wigner-empirical");
  detail::require_nonzero(spec.alpha);
  const double reach = std::sqrt(static_cast<double>(spec.modes)) * std::abs(spec.alpha);
  const double half = reach + opt.margin;
  // Eleven samples per fringe wavelength pi / (2 reach).
  const double step = std::numbers::pi / (2.0 * reach) / 11.0;
  const int steps = std::max(opt.min_steps, static_cast<int>(std::ceil(2.0 * half / step)) + 1);
  const double phase = std::arg(spec.alpha);
  std::vector<GridAxis> axes;
  if (spec.modes == 1) {
    axes = {mode_axis(0, 1, false, -half, half, steps, phase),
            mode_axis(0, 1, true, -half, half, steps, phase)};
  } else {
    axes = {diagonal_axis(spec.modes, false, -half, half, steps, phase),
            diagonal_axis(spec.modes, true, -half, half, steps, phase)};
  }
  return wigner_grid(spec, std::vector<Complex>(spec.modes, 0.0), std::move(axes), opt.threads);
}

/// Squared distance between the two Wigner lobes of OMEGA or an even cat.
inline MeasureResult wigner_empirical_size(const CatStateSpec& spec,
                                           const WignerEmpiricalOptions& opt = {}) {
  const WignerGrid grid = wigner_lobe_plane(spec, opt);
  const PhaseSpaceFeatures f = extract_features(grid);
  if (f.peak_separation <= 0.0) throw DomainError("no pair of Wigner lobes found on the grid");
  MeasureResult r;
  r.measure = Measure::kWignerEmpirical;
  r.state = spec;
  r.value = f.peak_separation * f.peak_separation;
  r.method = Method::kHybrid;
  const double a = std::abs(spec.alpha);
  const double root_n = std::sqrt(static_cast<double>(spec.modes));
  r.diagnostics["peak_separation"] = f.peak_separation;
  r.diagnostics["expected_peak_separation"] = 2.0 * root_n * a;
  if (f.fringe_wavelength) r.diagnostics["fringe_wavelength"] = *f.fringe_wavelength;
  r.diagnostics["fringe_axis"] = f.fringe_axis;
  r.diagnostics["expected_fringe_wavelength_single_mode"] = std::numbers::pi / (2.0 * a);
  r.diagnostics["expected_fringe_wavelength_plane"] = std::numbers::pi / (2.0 * root_n * a);
  r.diagnostics["grid_step"] = grid.axes.front().step();
  r.diagnostics["lobe_fit_used"] = f.lobe_fit_used;
  r.diagnostics["lobe_fit_residual"] = f.lobe_fit_residual;
  return r;
}

}  // namespace catsize
