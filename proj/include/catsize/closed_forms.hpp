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
 * Analytic expressions for coherent-state cat sizes. Everything here is a
 * pure function of (N, alpha, ...). Amplitudes are complex but only |alpha|^2
 * enters the sizes. Factors like e^{+-N|alpha|^2} are handled through
 * expm1/log1p or in log space so that N|alpha|^2 ~ 50..700 stays finite.
 */

#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "catsize/errors.hpp"

namespace catsize {

enum class StateFamily {
  kOmega,            ///< (|a>^N + |-a>^N) / sqrt(2 + 2e^{-2N|a|^2})
  kOmegaPrime,       ///< (|sqrt(N) a> + |-sqrt(N) a>) (x) |0>^{N-1}
  kHcs,              ///< hierarchical cat: even kittens^N + odd kittens^N
  kEvenCat,
  kOddCat,
  kProductCoherent,  ///< |a>^N
  kGhzDistilled,     ///< (|a>^N + |e2>^N) / sqrt(2)
};

inline const char* to_string(StateFamily f) {
  switch (f) {
    case StateFamily::kOmega: return "omega";
    case StateFamily::kOmegaPrime: return "omega-prime";
    case StateFamily::kHcs: return "hcs";
    case StateFamily::kEvenCat: return "even-cat";
    case StateFamily::kOddCat: return "odd-cat";
    case StateFamily::kProductCoherent: return "product-coherent";
    case StateFamily::kGhzDistilled: return "ghz-distilled";
  }
  return "?";
}

/// Kitten normalisations A_+- = sqrt(2 +- 2 e^{-2|a|^2}).
inline double a_plus(std::complex<double> alpha) {
  return std::sqrt(2.0 + 2.0 * std::exp(-2.0 * std::norm(alpha)));
}

inline double a_minus(std::complex<double> alpha) {
  const double x = std::norm(alpha);
  if (x == 0.0) throw DomainError("odd-kitten normalisation A_- vanishes at alpha = 0");
  return std::sqrt(-2.0 * std::expm1(-2.0 * x));
}

inline std::pair<double, double> hcs_norms(std::complex<double> alpha) {
  return {a_plus(alpha), a_minus(alpha)};
}

struct CatStateSpec {
  StateFamily family = StateFamily::kOmega;
  int modes = 1;
  std::complex<double> alpha{0.0, 0.0};
  std::optional<std::complex<double>> aux;  ///< auxiliary coherent mode (beta)

  double intensity() const { return std::norm(alpha); }

  void validate() const {
    if (modes < 1) throw InvalidArgument("state needs at least one mode");
    if ((family == StateFamily::kOddCat || family == StateFamily::kHcs) &&
        std::norm(alpha) == 0.0) {
      throw DomainError(std::string(to_string(family)) + " requires alpha != 0");
    }
  }
};

enum class GeneratorKind { kBoundedLocal, kQuadrature, kNumber, kSpinSandwich };

inline const char* to_string(GeneratorKind g) {
  switch (g) {
    case GeneratorKind::kBoundedLocal: return "bounded";
    case GeneratorKind::kQuadrature: return "quadrature";
    case GeneratorKind::kNumber: return "number";
    case GeneratorKind::kSpinSandwich: return "spin-sandwich";
  }
  return "?";
}

struct MeasureParams {
  std::optional<double> delta;   ///< discrimination precision, (0, 1/2)
  std::optional<double> lambda;  ///< per-mode loss probability, [0, 1]
  std::optional<GeneratorKind> generator_family;
  std::optional<double> phi;

  void validate() const {
    if (delta && !(*delta > 0.0 && *delta < 0.5)) {
      throw DomainError("delta must lie in (0, 1/2)");
    }
    if (lambda && !(*lambda >= 0.0 && *lambda <= 1.0)) {
      throw DomainError("lambda must lie in [0, 1]");
    }
  }
};

/// <a|b> = exp(-|a|^2/2 - |b|^2/2 + conj(a) b)
inline std::complex<double> overlap(std::complex<double> a, std::complex<double> b) {
  return std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
}

inline double omega_norm(int n_modes, std::complex<double> alpha) {
  const double g = std::exp(-2.0 * n_modes * std::norm(alpha));
  return 1.0 / std::sqrt(2.0 + 2.0 * g);
}

/// 1/2 + 1/2 sqrt(1 - e^{-4 n |a|^2}): best success probability for telling
/// |a>^n from |-a>^n, with n allowed to be real.
inline double helstrom_success_n_modes(double n, std::complex<double> alpha) {
  if (n < 0.0) throw DomainError("number of measured modes must be >= 0");
  return 0.5 + 0.5 * std::sqrt(-std::expm1(-4.0 * n * std::norm(alpha)));
}

namespace detail {

inline void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("delta must lie in (0, 1/2)");
}

inline void require_nonzero(std::complex<double> alpha) {
  if (std::norm(alpha) == 0.0) throw DomainError("alpha must be nonzero");
}

/// 1/2 - 1/2 sqrt(1 - e) written without cancellation.
inline double half_minus_half_sqrt(double e) {
  return 0.5 * e / (1.0 + std::sqrt(1.0 - e));
}

/// log(4 delta - 4 delta^2) = log(4 delta (1 - delta)).
inline double log_chance_gap(double delta) {
  return std::log(4.0 * delta) + std::log1p(-delta);
}

}  // namespace detail

/// Exact real solution n of helstrom_success_n_modes(n, alpha) = 1 - delta.
inline double n_eff_real(double delta, std::complex<double> alpha) {
  detail::require_delta(delta);
  detail::require_nonzero(alpha);
  return detail::log_chance_gap(delta) / (-4.0 * std::norm(alpha));
}

/// ceil of n_eff_real. Values within 1e-9 (relative) of an integer snap to
/// it, so the interval endpoints map to exactly 1 and N.
inline long n_eff_integer(double delta, std::complex<double> alpha) {
  const double r = n_eff_real(delta, alpha);
  const double nearest = std::round(r);
  if (std::abs(r - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return std::max(1L, static_cast<long>(nearest));
  }
  return std::max(1L, static_cast<long>(std::ceil(r)));
}

struct DeltaInterval {
  double lo;
  double hi;
  bool contains(double delta) const {
    const double slack = 1e-12 * std::max(1.0, hi);
    return delta >= lo - slack && delta <= hi + slack;
  }
};

inline DeltaInterval delta_validity_interval(int n_modes, std::complex<double> alpha) {
  detail::require_nonzero(alpha);
  if (n_modes < 1) throw InvalidArgument("modes must be >= 1");
  const double x = std::norm(alpha);
  return {detail::half_minus_half_sqrt(std::exp(-4.0 * n_modes * x)),
          detail::half_minus_half_sqrt(std::exp(-4.0 * x))};
}

inline std::string describe(const DeltaInterval& iv) {
  std::ostringstream os;
  os.precision(6);
  os << "[" << iv.lo << ", " << iv.hi << "]";
  return os.str();
}

struct CatSizeC {
  long n_eff;
  double value;        ///< N / n_eff
  double approximate;  ///< -4 N |a|^2 / log(4 delta - 4 delta^2)
  DeltaInterval interval;
};

inline CatSizeC cat_size_c(double delta, int n_modes, std::complex<double> alpha) {
  detail::require_delta(delta);
  const auto iv = delta_validity_interval(n_modes, alpha);
  if (!iv.contains(delta)) {
    std::ostringstream os;
    os << "delta = " << delta << " outside the validity interval " << describe(iv)
       << " for N = " << n_modes;
    throw DomainError(os.str());
  }
  const long n = std::min<long>(n_eff_integer(delta, alpha), n_modes);
  return {n, static_cast<double>(n_modes) / static_cast<double>(n),
          -4.0 * n_modes * std::norm(alpha) / detail::log_chance_gap(delta), iv};
}

/// Poisson weight of total photon number d in |2a>^N, mean s = N|a|^2.
inline double marquardt_pd(long d, int n_modes, std::complex<double> alpha) {
  if (d < 0) throw DomainError("photon number d must be >= 0");
  const double s = n_modes * std::norm(alpha);
  if (s == 0.0) return d == 0 ? 1.0 : 0.0;
  return std::exp(-s + static_cast<double>(d) * std::log(s) - std::lgamma(d + 1.0));
}

inline double marquardt_s(int n_modes, std::complex<double> alpha) {
  return n_modes * std::norm(alpha);
}

/// Relative-QFI lower bound from the pseudo-sigma_z generator.
inline double rqfi_bound_bounded(int n_modes, std::complex<double> alpha) {
  const double x = std::norm(alpha);
  const double big = std::exp(-2.0 * n_modes * x);
  const double g2 = std::exp(-4.0 * x);
  return (n_modes * (-std::expm1(-4.0 * x)) + big + g2) / (1.0 + big);
}

inline double rqfi_bound_quadrature(int n_modes, std::complex<double> alpha) {
  const double x = std::norm(alpha);
  const double s = n_modes * x;
  return s * std::tanh(s) + x + 1.0 / (2.0 * n_modes);
}

/// The "at most" variance of sum_i x^(phi)_i in |Omega> as printed.
inline double quadrature_variance_omega_bound(int n_modes, std::complex<double> alpha) {
  const double x = std::norm(alpha);
  const double s = n_modes * x;
  return n_modes * s * std::tanh(s) + s + 0.5;
}

/// Exact variance of sum_i x^(phi)_i in |Omega> when phi is aligned with
/// arg(alpha): N/2 + 2 N^2 |a|^2 / (1 + e^{-2N|a|^2}).
inline double quadrature_variance_omega_exact(int n_modes, std::complex<double> alpha) {
  const double x = std::norm(alpha);
  return 0.5 * n_modes +
         2.0 * n_modes * n_modes * x / (1.0 + std::exp(-2.0 * n_modes * x));
}

/// Probability that the first E1 outcome of the distillation POVM happens
/// at mode m (1-based).
inline double distill_pm(int m, int n_modes, std::complex<double> alpha) {
  if (m < 1 || m > n_modes) throw DomainError("m must lie in [1, N]");
  const double x = std::norm(alpha);
  if (x == 0.0) return 0.0;
  const double log_sinh = x + std::log(-std::expm1(-2.0 * x)) - std::log(2.0);
  const double log_cosh = n_modes * x + std::log1p(std::exp(-2.0 * n_modes * x)) - std::log(2.0);
  return std::exp((n_modes - 2.0 * m + 1.0) * x + log_sinh - log_cosh);
}

inline double distill_expected_n(int n_modes, std::complex<double> alpha) {
  const double x = std::norm(alpha);
  return n_modes * (-std::expm1(-2.0 * x)) / (1.0 + std::exp(-2.0 * n_modes * x));
}

/// The distribution of n(N) exactly as printed. It does not normalise
/// (e.g. N = 2, |a| = 1 sums to ~2.94) and is kept only for reference;
/// the simulator is the trusted distribution.
inline double distill_pn_as_printed(int n, int n_modes, std::complex<double> alpha) {
  if (n < 0 || n > n_modes) throw DomainError("n must lie in [0, N]");
  const double x = std::norm(alpha);
  if (x == 0.0) return 0.0;
  const double log_binom =
      std::lgamma(n_modes + 1.0) - std::lgamma(n + 1.0) - std::lgamma(n_modes - n + 1.0);
  const double log_e2 = 2.0 * x + std::log(-std::expm1(-2.0 * x));  // log(e^{2x} - 1)
  const double log_sinh = x + std::log(-std::expm1(-2.0 * x)) - std::log(2.0);
  const double log_cosh = n_modes * x + std::log1p(std::exp(-2.0 * n_modes * x)) - std::log(2.0);
  return std::exp(log_binom - (n_modes - 1.0) * x + log_e2 + log_sinh - log_cosh);
}

inline constexpr bool kDistillPnAsPrintedIsNormalized = false;

namespace detail {
inline void require_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("lambda must lie in [0, 1]");
}
}  // namespace detail

/// e^{-2 N lambda |a|^2} / (2 + 2 e^{-2N|a|^2}): off-diagonal weight after
/// losing the expected number N lambda of modes.
inline double mode_loss_offdiag(int n_modes, double lambda, std::complex<double> alpha) {
  detail::require_lambda(lambda);
  const double x = std::norm(alpha);
  return std::exp(-2.0 * n_modes * lambda * x) / (2.0 + 2.0 * std::exp(-2.0 * n_modes * x));
}

/// The single-exponent rewrite, which puts lambda inside the log term.
/// Disagrees with mode_loss_offdiag unless lambda = 1.
inline double mode_loss_offdiag_single_exponent(int n_modes, double lambda,
                                                std::complex<double> alpha) {
  detail::require_lambda(lambda);
  const double e = -2.0 * n_modes * lambda * std::norm(alpha);
  return 0.5 * std::exp(e - std::log1p(std::exp(e)));
}

/// Binomial average of e^{-2k|a|^2} (2 + 2e^{-2N|a|^2})^{-1} over the number
/// k of lost modes: (1 - lambda + lambda e^{-2|a|^2})^N / (2 + 2e^{-2N|a|^2}).
inline double mode_loss_offdiag_exact(int n_modes, double lambda, std::complex<double> alpha) {
  detail::require_lambda(lambda);
  const double x = std::norm(alpha);
  const double base = 1.0 + lambda * std::expm1(-2.0 * x);
  return std::pow(base, n_modes) / (2.0 + 2.0 * std::exp(-2.0 * n_modes * x));
}

inline double ghz_mode_loss_offdiag(int n_modes, double lambda) {
  detail::require_lambda(lambda);
  return 0.5 * std::pow(1.0 - lambda, n_modes);
}

/// M = 2 N |a|^2
inline double equivalent_ghz_size(int n_modes, std::complex<double> alpha) {
  return 2.0 * n_modes * std::norm(alpha);
}

/// Trace of the particle-defined one-body density matrix,
/// <Omega| sum_i n_i |Omega> = N|a|^2 tanh(N|a|^2).
inline double rdm_particle_trace(int n_modes, std::complex<double> alpha) {
  const double s = n_modes * std::norm(alpha);
  return s * std::tanh(s);
}

/// Trace of the mode-defined 1-RDM.
inline constexpr double rdm_mode_trace() { return 1.0; }

}  // namespace catsize
