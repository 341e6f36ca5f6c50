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
 * Wigner functions W = (2/pi)^m <D(g) P D(-g)> in closed form and through
 * the Fock oracle, grids over planes in C^N, and feature extraction.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include "catsize/closed_forms.hpp"
#include "catsize/fock.hpp"
#include "catsize/parallel.hpp"

namespace catsize {

inline constexpr const char* kWignerConvention =
    "W = (2/pi)^m <D(gamma) P_tot D(-gamma)>, m modes";

// ---------------------------------------------------------------------------
// Closed forms

/// sum_k c_k |beta_k>, each beta_k a vector of per-mode amplitudes.
struct CoherentComponent {
  Complex coeff;
  std::vector<Complex> amplitudes;
};
using CoherentSuperposition = std::vector<CoherentComponent>;

/// Expansion of a named state into multimode coherent components.
inline CoherentSuperposition coherent_components(const CatStateSpec& spec) {
  spec.validate();
  const int n = spec.modes;
  const Complex a = spec.alpha;
  auto uniform = [n](Complex v) { return std::vector<Complex>(n, v); };
  switch (spec.family) {
    case StateFamily::kOmega:
      return {{1.0, uniform(a)}, {1.0, uniform(-a)}};
    case StateFamily::kEvenCat:
    case StateFamily::kOddCat: {
      if (n != 1) throw InvalidArgument("single-mode cats take modes = 1");
      const double s = spec.family == StateFamily::kEvenCat ? 1.0 : -1.0;
      return {{1.0, {a}}, {s, {-a}}};
    }
    case StateFamily::kProductCoherent:
      return {{1.0, uniform(a)}};
    case StateFamily::kOmegaPrime: {
      std::vector<Complex> p(n, 0.0), m(n, 0.0);
      p[0] = std::sqrt(static_cast<double>(n)) * a;
      m[0] = -p[0];
      return {{1.0, p}, {1.0, m}};
    }
    case StateFamily::kHcs: {
      if (n > 16) throw SizingError("HCS expansion limited to 16 modes");
      const double ap2 = std::pow(a_plus(a), 2.0 * n);
      const double am2 = std::pow(a_minus(a), 2.0 * n);
      CoherentSuperposition out;
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<Complex> amps(n);
        int minus = 0;
        for (int i = 0; i < n; ++i) {
          const bool neg = (mask >> (n - 1 - i)) & 1u;
          amps[i] = neg ? -a : a;
          minus += neg;
        }
        const double odd_sign = (minus % 2 == 0) ? 1.0 : -1.0;
        out.push_back({1.0 / std::sqrt(ap2) + odd_sign / std::sqrt(am2), std::move(amps)});
      }
      return out;
    }
    default:
      throw InvalidArgument(std::string("no coherent expansion for ") + to_string(spec.family));
  }
}

/// W of a finite coherent superposition at gamma (one entry per mode).
inline double wigner_superposition(const CoherentSuperposition& psi,
                                   std::span<const Complex> gamma) {
  if (psi.empty()) throw InvalidArgument("empty superposition");
  const std::size_t m = psi.front().amplitudes.size();
  if (gamma.size() != m) throw InvalidArgument("gamma needs one entry per mode");
  Complex num(0.0), den(0.0);
  for (const auto& l : psi) {
    for (const auto& k : psi) {
      Complex log_kernel(0.0), log_overlap(0.0);
      for (std::size_t i = 0; i < m; ++i) {
        const Complex bl = l.amplitudes[i], bk = k.amplitudes[i], g = gamma[i];
        const Complex u = bl - g, v = g - bk;
        log_kernel += Complex(0.0, (g * std::conj(bl)).imag() - (g * std::conj(bk)).imag()) -
                      0.5 * std::norm(u) - 0.5 * std::norm(v) + std::conj(u) * v;
        log_overlap += -0.5 * std::norm(bl) - 0.5 * std::norm(bk) + std::conj(bl) * bk;
      }
      const Complex c = std::conj(l.coeff) * k.coeff;
      num += c * std::exp(log_kernel);
      den += c * std::exp(log_overlap);
    }
  }
  return std::pow(2.0 / std::numbers::pi, static_cast<double>(m)) * num.real() / den.real();
}

inline double wigner_cat_closed(const CatStateSpec& spec, std::span<const Complex> gamma) {
  return wigner_superposition(coherent_components(spec), gamma);
}

inline double wigner_cat_closed(const CatStateSpec& spec, std::initializer_list<Complex> gamma) {
  return wigner_cat_closed(spec, std::span<const Complex>(gamma.begin(), gamma.size()));
}

namespace detail {

/// Per-mode pieces of the two-mode hierarchical cat for real alpha > 0.
struct KittenTerms {
  double lobes;       ///< e^{-2|g-a|^2} + e^{-2|g+a|^2}
  double lobe_diff;   ///< e^{-2|g-a|^2} - e^{-2|g+a|^2}
  double centre;      ///< e^{-2|g|^2}
  double phase;       ///< 4 a Im g
};

inline KittenTerms kitten_terms(Complex g, double a) {
  const double p = std::exp(-2.0 * std::norm(g - a));
  const double m = std::exp(-2.0 * std::norm(g + a));
  return {p + m, p - m, std::exp(-2.0 * std::norm(g)), 4.0 * a * g.imag()};
}

}  // namespace detail

/// W of HCS_2(alpha) term by term: the two diagonal kitten products plus
/// the even/odd cross term. Complex alpha is handled by rotating gamma.
inline double wigner_hcs2_closed(Complex gamma1, Complex gamma2, Complex alpha) {
  const double a = std::abs(alpha);
  if (a == 0.0) throw DomainError("HCS requires alpha != 0");
  const Complex rot = std::polar(1.0, -std::arg(alpha));
  const auto t1 = detail::kitten_terms(gamma1 * rot, a);
  const auto t2 = detail::kitten_terms(gamma2 * rot, a);
  const double g = std::exp(-2.0 * a * a);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  double diag = 0.0;
  for (double eps : {1.0, -1.0}) {
    const double w1 = t1.lobes + 2.0 * eps * t1.centre * std::cos(t1.phase);
    const double w2 = t2.lobes + 2.0 * eps * t2.centre * std::cos(t2.phase);
    diag += w1 * w2 / std::pow(2.0 + 2.0 * eps * g, 2);
  }
  diag *= 2.0 / pi2;
  const double cross = (t1.lobe_diff * t2.lobe_diff -
                        4.0 * t1.centre * t2.centre * std::sin(t1.phase) * std::sin(t2.phase)) /
                       (pi2 * (-std::expm1(-4.0 * a * a)));
  return diag + cross;
}

/// The two-mode hierarchical-cat expression exactly as printed, for
/// reference only: its fringe phase, cross prefactor and one sine argument
/// disagree with the displaced-parity definition.
inline double wigner_hcs2_as_printed(Complex gamma1, Complex gamma2, double alpha) {
  if (alpha == 0.0) throw DomainError("HCS requires alpha != 0");
  const double a = alpha;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double e1 = std::exp(-2.0 * std::norm(gamma1));
  const double e2 = std::exp(-2.0 * std::norm(gamma2));
  const double c1 = std::cos(2.0 * a * gamma1.imag());
  const double c2 = std::cos(2.0 * a * gamma2.imag());
  auto g = [](Complex z) { return std::exp(-2.0 * std::norm(z)); };
  double total = 0.0;
  for (double eps : {1.0, -1.0}) {
    double inner = 2.0 * eps * e2 * c2 * (g(a - gamma1) + g(a + gamma1)) +
                   2.0 * eps * e1 * c1 * (g(a - gamma2) + g(a + gamma2)) + 4.0 * e1 * e2 * c2 * c1;
    for (double k : {1.0, -1.0}) {
      for (double t : {1.0, -1.0}) inner += g(a + k * gamma1) * g(a + t * gamma2);
    }
    total += inner / std::pow(2.0 + 2.0 * eps * std::exp(-2.0 * a * a), 2);
  }
  total *= 2.0 / pi2;
  const double s = std::sin(2.0 * a * gamma1.imag());
  const double bracket = g(a - gamma1) * g(a - gamma2) + g(a + gamma1) * g(a + gamma2) -
                         g(a + gamma1) * g(a - gamma2) - g(a - gamma1) * g(a + gamma2) -
                         4.0 * e1 * e2 * s * s;
  total += 2.0 / pi2 / (2.0 * std::pow(-std::expm1(-4.0 * a * a), 2)) * bracket;
  return total;
}

// ---------------------------------------------------------------------------
// Fock oracle

namespace detail {

/// Copy of `state` in a larger per-mode cutoff (zero amplitudes above).
inline FockVector pad_cutoff(const FockVector& state, int cutoff) {
  if (cutoff == state.cutoff()) return state;
  const int modes = state.modes();
  const std::size_t d_old = static_cast<std::size_t>(state.cutoff()) + 1;
  const std::size_t d_new = static_cast<std::size_t>(cutoff) + 1;
  Vector out = Vector::Zero(static_cast<Eigen::Index>(joint_dim(cutoff, modes)));
  const auto& in = state.amplitudes();
  for (Eigen::Index idx = 0; idx < in.size(); ++idx) {
    std::size_t rem = static_cast<std::size_t>(idx), target = 0, scale = 1;
    for (int m = 0; m < modes; ++m) {
      target += (rem % d_old) * scale;
      rem /= d_old;
      scale *= d_new;
    }
    out(static_cast<Eigen::Index>(target)) = in(idx);
  }
  return FockVector(cutoff, modes, std::move(out), state.truncation());
}

/// Displaced state (x)_i D(-gamma_i) |psi>. The state is first padded to a
/// cutoff that holds the displaced state, so that the projected exact
/// displacement loses nothing; if that space is too large the call fails.
inline FockVector displace_back(const FockVector& state, std::span<const Complex> gamma) {
  if (static_cast<int>(gamma.size()) != state.modes()) {
    throw InvalidArgument("gamma needs one entry per mode");
  }
  const int d = state.cutoff() + 1;
  // Largest photon number carrying non-negligible weight, over all modes.
  int n_top = 0;
  {
    const auto& amps = state.amplitudes();
    const double norm2 = amps.squaredNorm();
    for (Eigen::Index idx = 0; idx < amps.size(); ++idx) {
      if (std::norm(amps(idx)) <= 1e-32 * norm2) continue;
      Eigen::Index rem = idx;
      for (int m = 0; m < state.modes(); ++m) {
        n_top = std::max(n_top, static_cast<int>(rem % d));
        rem /= d;
      }
    }
  }
  double shift = 0.0;
  for (Complex g : gamma) shift = std::max(shift, std::abs(g));
  const double reach = std::sqrt(static_cast<double>(n_top)) + shift;
  const int needed = std::max(state.cutoff(), cutoff_for_tail(reach, 1e-20) + 8);
  std::size_t dim = 0;
  try {
    dim = joint_dim(needed, state.modes());
  } catch (const SizingError&) {
    dim = kMaxJointDim + 1;
  }
  if (dim > kMaxJointDim) {
    throw TruncationError("displacement by |gamma| = " + std::to_string(shift) +
                              " needs cutoff " + std::to_string(needed) +
                              ", beyond the joint-space limit",
                          poisson_tail(reach * reach, state.cutoff()));
  }
  FockVector out = pad_cutoff(state, needed);
  for (int m = 0; m < state.modes(); ++m) {
    if (gamma[m] == Complex(0.0)) continue;
    out = apply_local(displacement_matrix(-gamma[m], needed), {m}, out);
  }
  return out;
}

inline double parity_sign(Eigen::Index idx, int d, int modes) {
  long total = 0;
  for (int m = 0; m < modes; ++m) {
    total += idx % d;
    idx /= d;
  }
  return (total % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace detail

struct NumericWigner {
  double value;
  double imag_residue;
};

/// Displaced-parity Wigner value of a pure state in the Fock oracle.
inline NumericWigner wigner_numeric_detail(const FockVector& state, std::span<const Complex> gamma) {
  const FockVector shifted = detail::displace_back(state, gamma);
  const auto& v = shifted.amplitudes();
  const int d = shifted.cutoff() + 1;
  Complex acc(0.0);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    acc += std::conj(v(i)) * detail::parity_sign(i, d, state.modes()) * v(i);
  }
  const double scale = std::pow(2.0 / std::numbers::pi, state.modes()) / v.squaredNorm();
  return {scale * acc.real(), scale * std::abs(acc.imag())};
}

inline double wigner_numeric(const FockVector& state, std::span<const Complex> gamma) {
  return wigner_numeric_detail(state, gamma).value;
}

inline double wigner_numeric(const FockVector& state, std::initializer_list<Complex> gamma) {
  return wigner_numeric(state, std::span<const Complex>(gamma.begin(), gamma.size()));
}

/// Displaced-parity Wigner value of a density operator. The displacement
/// maps the cutoff-c space into a padded one, so nothing is truncated.
inline double wigner_numeric(const FockOperator& rho, std::span<const Complex> gamma) {
  const int modes = rho.modes();
  if (static_cast<int>(gamma.size()) != modes) throw InvalidArgument("gamma needs one entry per mode");
  double shift = 0.0;
  for (Complex g : gamma) shift = std::max(shift, std::abs(g));
  const int c = rho.cutoff();
  const int padded = std::max(c, cutoff_for_tail(std::sqrt(static_cast<double>(c)) + shift, 1e-20) + 8);
  if (joint_dim(padded, modes) > kMaxDenseOperatorDim) {
    throw TruncationError("padded displacement of a density operator is too large", 0.0);
  }
  Matrix u = Matrix::Identity(1, 1);
  for (int m = 0; m < modes; ++m) {
    u = detail::kron(u, Matrix(displacement_matrix(-gamma[m], padded).leftCols(c + 1)));
  }
  const Matrix shifted = u * rho.matrix() * u.adjoint();
  const int d = padded + 1;
  Complex acc(0.0);
  for (Eigen::Index i = 0; i < shifted.rows(); ++i) {
    acc += detail::parity_sign(i, d, modes) * shifted(i, i);
  }
  return std::pow(2.0 / std::numbers::pi, modes) * acc.real() / rho.matrix().trace().real();
}

/// Fock vector of a coherent superposition (unnormalised input, normalised output).
inline FockVector fock_state(const CoherentSuperposition& psi, int cutoff) {
  const int modes = static_cast<int>(psi.front().amplitudes.size());
  Vector acc = Vector::Zero(static_cast<Eigen::Index>(joint_dim(cutoff, modes)));
  for (const auto& c : psi) {
    std::vector<FockVector> parts;
    for (Complex b : c.amplitudes) parts.push_back(coherent_vector(b, cutoff, 1e-10));
    acc += c.coeff * tensor(std::span<const FockVector>(parts)).amplitudes();
  }
  return FockVector(cutoff, modes, acc / acc.norm());
}

inline FockVector fock_state(const CatStateSpec& spec, int cutoff) {
  return fock_state(coherent_components(spec), cutoff);
}

// ---------------------------------------------------------------------------
// Fringe suppression under partial trace

/// Factor multiplying the interference term of the reduced Wigner function
/// of OMEGA after tracing out n modes: the surviving branch coherence
/// e^{-2 n |a|^2}.
inline double partial_trace_fringe_suppression(int n_modes, int n_traced, Complex alpha) {
  if (n_traced < 0 || n_traced >= n_modes) {
    throw DomainError("traced modes must satisfy 0 <= n < N");
  }
  return std::exp(-2.0 * n_traced * std::norm(alpha));
}

/// The alternative factor e^{-n|a|^2/2} quoted alongside the mode-loss analysis.
inline double fringe_suppression_as_printed(int n_traced, Complex alpha) {
  return std::exp(-0.5 * n_traced * std::norm(alpha));
}

struct FringeSuppressionCheck {
  double measured;            ///< from the reduced-state Wigner oracle
  double closed_form;         ///< e^{-2 n |a|^2}
  double printed_candidate;   ///< e^{-n |a|^2 / 2}
  double measured_exponent;   ///< -log(measured) / (n |a|^2)
};

/// Traces mode 1 of a two-mode OMEGA in the oracle and reads the
/// interference amplitude of the reduced Wigner function at the origin.
inline FringeSuppressionCheck measure_fringe_suppression(Complex alpha, int cutoff = 0) {
  const double x = std::norm(alpha);
  if (x == 0.0) throw DomainError("fringe suppression needs alpha != 0");
  if (cutoff == 0) cutoff = cutoff_for_tail(std::abs(alpha), 1e-14);
  const auto omega = fock_state(CatStateSpec{StateFamily::kOmega, 2, alpha, {}}, cutoff);
  const auto reduced = partial_trace(density(omega), {0});
  const Complex origin[] = {Complex(0.0)};
  const double w0 = wigner_numeric(reduced, origin);
  // W_red(0) = norm^2 (2/pi) [2 e^{-2|a|^2} + 2 s], norm^2 = 1/(2 + 2e^{-4|a|^2}).
  const double norm2 = std::pow(omega_norm(2, alpha), 2);
  const double s = (w0 * std::numbers::pi / 2.0 / norm2 - 2.0 * std::exp(-2.0 * x)) / 2.0;
  return {s, partial_trace_fringe_suppression(2, 1, alpha), fringe_suppression_as_printed(1, alpha),
          -std::log(s) / x};
}

// ---------------------------------------------------------------------------
// Grids

/// One grid axis: the line origin + t * direction, t in [min, max].
struct GridAxis {
  std::string label;
  std::vector<Complex> direction;  ///< unit vector in C^N
  double min = 0.0;
  double max = 0.0;
  int steps = 1;

  double step() const { return steps > 1 ? (max - min) / (steps - 1) : 0.0; }
  double at(int i) const { return steps > 1 ? min + (max - min) * i / (steps - 1) : min; }
};

/// Values of W on a (possibly rotated) plane or box through C^N.
/// `values` is row-major with the last axis varying fastest.
struct WignerGrid {
  int modes = 1;
  std::vector<Complex> origin;        ///< fixed coordinates of every mode
  std::vector<GridAxis> axes;
  std::vector<double> values;
  /// Coherent amplitudes of the state, used only to bound fringe frequencies.
  std::vector<std::vector<Complex>> branch_amplitudes;
  std::string convention = kWignerConvention;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= static_cast<std::size_t>(a.steps);
    return n;
  }

  std::vector<int> indices(std::size_t flat) const {
    std::vector<int> idx(axes.size());
    for (int j = static_cast<int>(axes.size()) - 1; j >= 0; --j) {
      idx[j] = static_cast<int>(flat % axes[j].steps);
      flat /= axes[j].steps;
    }
    return idx;
  }

  std::vector<double> coords(std::size_t flat) const {
    const auto idx = indices(flat);
    std::vector<double> t(axes.size());
    for (std::size_t j = 0; j < axes.size(); ++j) t[j] = axes[j].at(idx[j]);
    return t;
  }

  std::vector<Complex> point_at(std::span<const double> t) const {
    std::vector<Complex> g = origin;
    for (std::size_t j = 0; j < axes.size(); ++j) {
      for (int m = 0; m < modes; ++m) g[m] += t[j] * axes[j].direction[m];
    }
    return g;
  }

  std::vector<Complex> point(std::size_t flat) const {
    const auto t = coords(flat);
    return point_at(t);
  }
};

/// Axis along Re (or Im) of one mode, rotated by `phase`.
inline GridAxis mode_axis(int mode, int modes, bool imaginary, double min, double max, int steps,
                          double phase = 0.0) {
  GridAxis a;
  a.label = std::string(imaginary ? "im" : "re") + std::to_string(mode + 1);
  a.direction.assign(modes, 0.0);
  a.direction[mode] = std::polar(1.0, phase) * (imaginary ? Complex(0.0, 1.0) : Complex(1.0));
  a.min = min;
  a.max = max;
  a.steps = steps;
  return a;
}

/// Axis along the common direction (1, ..., 1)/sqrt(N), real or imaginary.
inline GridAxis diagonal_axis(int modes, bool imaginary, double min, double max, int steps,
                              double phase = 0.0) {
  GridAxis a;
  a.label = imaginary ? "im-diagonal" : "re-diagonal";
  const Complex unit = std::polar(1.0 / std::sqrt(static_cast<double>(modes)), phase) *
                       (imaginary ? Complex(0.0, 1.0) : Complex(1.0));
  a.direction.assign(modes, unit);
  a.min = min;
  a.max = max;
  a.steps = steps;
  return a;
}

inline void validate_grid_shape(const WignerGrid& grid) {
  if (grid.axes.empty() || grid.axes.size() > 4) throw InvalidArgument("grids have 1 to 4 axes");
  if (static_cast<int>(grid.origin.size()) != grid.modes) {
    throw InvalidArgument("grid origin needs one entry per mode");
  }
  for (const auto& a : grid.axes) {
    if (a.steps < 1) throw InvalidArgument("grid axes need at least one step");
    if (!(a.max >= a.min)) throw InvalidArgument("grid axis max below min");
    if (static_cast<int>(a.direction.size()) != grid.modes) {
      throw InvalidArgument("axis direction needs one entry per mode");
    }
  }
  for (std::size_t i = 0; i < grid.axes.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      Complex ip(0.0);
      for (int m = 0; m < grid.modes; ++m) {
        ip += std::conj(grid.axes[i].direction[m]) * grid.axes[j].direction[m];
      }
      // Real inner product on R^{2N}.
      if (std::abs(ip.real() - (i == j ? 1.0 : 0.0)) > 1e-12) {
        throw InvalidArgument("grid axes must be orthonormal in R^{2N}");
      }
    }
  }
  if (grid.size() > (std::size_t{1} << 26)) throw SizingError("grid has too many points");
}

template <typename F>
void fill_grid(WignerGrid& grid, F&& f, int threads = 0) {
  validate_grid_shape(grid);
  grid.values.assign(grid.size(), 0.0);
  parallel_for(grid.size(), threads, [&](std::size_t i) {
    const auto g = grid.point(i);
    grid.values[i] = f(std::span<const Complex>(g));
  });
}

/// Grid of a named state's closed-form Wigner function.
inline WignerGrid wigner_grid(const CatStateSpec& spec, std::vector<Complex> origin,
                              std::vector<GridAxis> axes, int threads = 0) {
  const auto psi = coherent_components(spec);
  WignerGrid grid;
  grid.modes = spec.modes;
  grid.origin = std::move(origin);
  grid.axes = std::move(axes);
  for (const auto& c : psi) grid.branch_amplitudes.push_back(c.amplitudes);
  fill_grid(grid, [&](std::span<const Complex> g) { return wigner_superposition(psi, g); }, threads);
  return grid;
}

/// Slice of HCS_2 through the closed form, gamma_2 fixed.
inline WignerGrid wigner_hcs2_slice(Complex alpha, Complex gamma2, double min, double max,
                                    int steps, int threads = 0) {
  WignerGrid grid;
  grid.modes = 2;
  grid.origin = {0.0, gamma2};
  grid.axes = {mode_axis(0, 2, false, min, max, steps), mode_axis(0, 2, true, min, max, steps)};
  for (const auto& c : coherent_components(CatStateSpec{StateFamily::kHcs, 2, alpha, {}})) {
    grid.branch_amplitudes.push_back(c.amplitudes);
  }
  fill_grid(grid, [&](std::span<const Complex> g) { return wigner_hcs2_closed(g[0], g[1], alpha); },
            threads);
  return grid;
}

namespace detail {

inline std::string shortest(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace detail

/// CSV with one re/im column pair per mode (re,im for one mode;
/// re1,im1,re2,im2,... otherwise) and w, row-major.
inline void write_csv(const WignerGrid& grid, std::ostream& out) {
  if (grid.modes == 1) {
    out << "re,im";
  } else {
    for (int m = 0; m < grid.modes; ++m) out << (m ? "," : "") << "re" << m + 1 << ",im" << m + 1;
  }
  out << ",w\n";
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    const auto g = grid.point(i);
    for (int m = 0; m < grid.modes; ++m) {
      out << (m ? "," : "") << detail::shortest(g[m].real()) << ',' << detail::shortest(g[m].imag());
    }
    out << ',' << detail::shortest(grid.values[i]) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Features

struct PhasePeak {
  std::vector<Complex> location;
  double value = 0.0;
};

struct PhaseSpaceFeatures {
  std::vector<PhasePeak> peaks;  ///< significant local maxima, |value| descending
  std::optional<double> fringe_wavelength;
  std::string fringe_axis = "none";
  double peak_separation = 0.0;
  std::vector<std::vector<Complex>> lobe_centres;  ///< fitted +-c when the fit is used
  bool lobe_fit_used = false;
  double lobe_fit_residual = 0.0;
};

/// Expected fringe wavelength along an axis: pi / max |Im(d^dag (b_k - b_l))|.
inline std::optional<double> expected_fringe_wavelength(const WignerGrid& grid,
                                                        const GridAxis& axis) {
  double freq = 0.0;
  for (const auto& bk : grid.branch_amplitudes) {
    for (const auto& bl : grid.branch_amplitudes) {
      Complex ip(0.0);
      for (int m = 0; m < grid.modes; ++m) ip += std::conj(axis.direction[m]) * (bk[m] - bl[m]);
      freq = std::max(freq, std::abs(ip.imag()));
    }
  }
  if (freq == 0.0) return std::nullopt;
  return std::numbers::pi / freq;
}

/// Throws DomainError unless every axis samples its fringes at least eight
/// times per wavelength.
inline void check_resolution(const WignerGrid& grid) {
  for (const auto& a : grid.axes) {
    const auto lambda = expected_fringe_wavelength(grid, a);
    if (lambda && a.steps > 1 && a.step() > *lambda / 8.0) {
      throw DomainError("grid step " + detail::shortest(a.step()) + " along " + a.label +
                        " exceeds fringe wavelength / 8 = " + detail::shortest(*lambda / 8.0));
    }
  }
}

namespace detail {

/// A[e^{-2|t-c|^2} + e^{-2|t+c|^2}] + B e^{-2|t|^2} cos(2 k.t) on grid coordinates.
struct LobeModel {
  using Scalar = double;
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };

  const Eigen::MatrixXd* points;  ///< dims x count
  const Eigen::VectorXd* data;
  int dims;

  int inputs() const { return 2 + 2 * dims; }
  int values() const { return static_cast<int>(data->size()); }

  static double eval(const Eigen::VectorXd& x, const Eigen::VectorXd& t, int dims) {
    const auto c = x.segment(2, dims);
    const auto k = x.segment(2 + dims, dims);
    return x(0) * (std::exp(-2.0 * (t - c).squaredNorm()) + std::exp(-2.0 * (t + c).squaredNorm())) +
           x(1) * std::exp(-2.0 * t.squaredNorm()) * std::cos(2.0 * k.dot(t));
  }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    for (Eigen::Index i = 0; i < data->size(); ++i) {
      f(i) = eval(x, points->col(i), dims) - (*data)(i);
    }
    return 0;
  }
};

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline int nearest_index(const GridAxis& a, double t) {
  if (a.steps <= 1) return 0;
  const double s = (t - a.min) / a.step();
  return std::clamp(static_cast<int>(std::lround(s)), 0, a.steps - 1);
}

}  // namespace detail

/// Zero-crossing fringe wavelength along `axis_index`, on the line through
/// the grid point nearest the grid origin.
inline std::optional<double> measure_fringe_wavelength(const WignerGrid& grid, int axis_index) {
  const auto& axis = grid.axes[axis_index];
  if (axis.steps < 3) return std::nullopt;
  std::vector<int> idx(grid.axes.size());
  for (std::size_t j = 0; j < grid.axes.size(); ++j) idx[j] = detail::nearest_index(grid.axes[j], 0.0);
  std::vector<double> line(axis.steps);
  for (int s = 0; s < axis.steps; ++s) {
    idx[axis_index] = s;
    std::size_t flat = 0;
    for (std::size_t j = 0; j < grid.axes.size(); ++j) flat = flat * grid.axes[j].steps + idx[j];
    line[s] = grid.values[flat];
  }
  double mean = 0.0;
  for (double v : line) mean += v;
  mean /= line.size();
  double peak = 0.0;
  for (double& v : line) {
    v -= mean;
    peak = std::max(peak, std::abs(v));
  }
  if (peak == 0.0) return std::nullopt;
  std::vector<double> crossings;
  for (int s = 0; s + 1 < axis.steps; ++s) {
    const double a = line[s], b = line[s + 1];
    if (std::max(std::abs(a), std::abs(b)) < 1e-3 * peak) continue;
    if ((a < 0.0) != (b < 0.0)) crossings.push_back(axis.at(s) + axis.step() * a / (a - b));
  }
  if (crossings.size() < 3) return std::nullopt;
  std::vector<double> gaps;
  for (std::size_t i = 1; i < crossings.size(); ++i) gaps.push_back(crossings[i] - crossings[i - 1]);
  return 2.0 * detail::median(gaps);
}

/// Local maxima, fringe wavelength and lobe separation of a grid.
///
/// Lobes of small cats are not resolved as separate maxima, so their centres
/// come from a least-squares fit of the two-lobe-plus-interference model,
/// seeded by the detected maxima; if the model does not describe the grid
/// (relative residual above 5%) the separation falls back to the largest
/// distance between significant maxima.
inline PhaseSpaceFeatures extract_features(const WignerGrid& grid) {
  validate_grid_shape(grid);
  if (grid.values.size() != grid.size()) throw InvalidArgument("grid values not filled");
  check_resolution(grid);
  PhaseSpaceFeatures out;
  const int dims = static_cast<int>(grid.axes.size());
  const std::size_t n = grid.size();
  double wmax = 0.0;
  for (double v : grid.values) wmax = std::max(wmax, v);

  // Local maxima in the 3^d neighbourhood, interior points only.
  std::vector<std::size_t> strides(dims, 1);
  for (int j = dims - 2; j >= 0; --j) strides[j] = strides[j + 1] * grid.axes[j + 1].steps;
  const int neigh = static_cast<int>(std::pow(3, dims));
  std::vector<std::size_t> maxima;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = grid.values[i];
    if (v < 0.25 * wmax || v <= 0.0) continue;
    const auto idx = grid.indices(i);
    bool interior = true;
    for (int j = 0; j < dims; ++j) {
      if (grid.axes[j].steps > 1 && (idx[j] == 0 || idx[j] == grid.axes[j].steps - 1)) interior = false;
    }
    if (!interior) continue;
    bool is_max = true;
    for (int code = 0; code < neigh && is_max; ++code) {
      long offset = 0;
      int rem = code;
      bool self = true, valid = true;
      for (int j = dims - 1; j >= 0; --j) {
        const int dj = rem % 3 - 1;
        rem /= 3;
        if (dj != 0) self = false;
        if (grid.axes[j].steps == 1 && dj != 0) valid = false;
        offset += dj * static_cast<long>(strides[j]);
      }
      if (self || !valid) continue;
      const std::size_t k = static_cast<std::size_t>(static_cast<long>(i) + offset);
      // Ties go to the earlier point.
      if (grid.values[k] > v || (grid.values[k] == v && k < i)) is_max = false;
    }
    if (is_max) maxima.push_back(i);
  }
  std::stable_sort(maxima.begin(), maxima.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(grid.values[a]) > std::abs(grid.values[b]);
  });
  for (std::size_t i : maxima) out.peaks.push_back({grid.point(i), grid.values[i]});

  // Fringe axis: the one with the highest expected fringe frequency.
  int fringe_axis = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < dims; ++j) {
    const auto lambda = expected_fringe_wavelength(grid, grid.axes[j]);
    if (lambda && *lambda < best) {
      best = *lambda;
      fringe_axis = j;
    }
  }
  if (fringe_axis >= 0) {
    out.fringe_wavelength = measure_fringe_wavelength(grid, fringe_axis);
    if (out.fringe_wavelength) out.fringe_axis = grid.axes[fringe_axis].label;
  }

  // Fallback separation from the maxima.
  double fallback = 0.0;
  for (std::size_t a = 0; a < maxima.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      const auto pa = grid.point(maxima[a]), pb = grid.point(maxima[b]);
      double d2 = 0.0;
      for (int m = 0; m < grid.modes; ++m) d2 += std::norm(pa[m] - pb[m]);
      fallback = std::max(fallback, std::sqrt(d2));
    }
  }

  // Model fit in grid coordinates on a regular subsample of at most ~10^4
  // points (every `stride`-th index along each axis).
  const int stride = static_cast<int>(
      std::ceil(std::pow(static_cast<double>(n) / 1e4, 1.0 / dims) - 1e-12));
  std::vector<std::size_t> fit_idx;
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = grid.indices(i);
    bool keep = true;
    for (int v : idx) keep = keep && (stride <= 1 || v % stride == 0);
    if (keep) fit_idx.push_back(i);
  }
  Eigen::MatrixXd pts(dims, static_cast<Eigen::Index>(fit_idx.size()));
  Eigen::VectorXd data(static_cast<Eigen::Index>(fit_idx.size()));
  for (std::size_t s = 0; s < fit_idx.size(); ++s) {
    const auto t = grid.coords(fit_idx[s]);
    for (int j = 0; j < dims; ++j) pts(j, static_cast<Eigen::Index>(s)) = t[j];
    data(static_cast<Eigen::Index>(s)) = grid.values[fit_idx[s]];
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(2 + 2 * dims);
  // Seed c from the significant maximum farthest from the grid origin, or
  // from the second moment of W when only a central maximum exists.
  double far = 0.0;
  for (std::size_t i : maxima) {
    const auto t = grid.coords(i);
    double r2 = 0.0;
    for (double v : t) r2 += v * v;
    if (r2 > far) {
      far = r2;
      for (int j = 0; j < dims; ++j) x(2 + j) = t[j];
    }
  }
  if (far < 0.25) {
    Eigen::MatrixXd m2 = Eigen::MatrixXd::Zero(dims, dims);
    double m0 = 0.0;
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
      m2 += data(i) * pts.col(i) * pts.col(i).transpose();
      m0 += data(i);
    }
    if (m0 > 0.0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m2 / m0);
      const double spread = std::max(0.0, es.eigenvalues()(dims - 1) - 0.25);
      x.segment(2, dims) = std::sqrt(spread) * es.eigenvectors().col(dims - 1);
    }
  }
  if (fringe_axis >= 0 && out.fringe_wavelength) {
    x(2 + dims + fringe_axis) = std::numbers::pi / *out.fringe_wavelength;
  }
  // Linear amplitudes for the seed.
  {
    Eigen::MatrixXd basis(pts.cols(), 2);
    Eigen::VectorXd xa = x, xb = x;
    xa(0) = 1.0, xa(1) = 0.0, xb(0) = 0.0, xb(1) = 1.0;
    for (Eigen::Index i = 0; i < pts.cols(); ++i) {
      basis(i, 0) = detail::LobeModel::eval(xa, pts.col(i), dims);
      basis(i, 1) = detail::LobeModel::eval(xb, pts.col(i), dims);
    }
    const Eigen::Vector2d ab = basis.colPivHouseholderQr().solve(data);
    x(0) = ab(0);
    x(1) = ab(1);
  }
  detail::LobeModel model{&pts, &data, dims};
  Eigen::NumericalDiff<detail::LobeModel> diff(model);
  Eigen::LevenbergMarquardt<Eigen::NumericalDiff<detail::LobeModel>> lm(diff);
  lm.parameters.maxfev = 1500;
  lm.parameters.xtol = 1e-12;
  lm.parameters.ftol = 1e-14;
  lm.minimize(x);
  Eigen::VectorXd resid(data.size());
  model(x, resid);
  const double dn = data.norm();
  out.lobe_fit_residual = dn > 0.0 ? resid.norm() / dn : 0.0;
  if (dn > 0.0 && out.lobe_fit_residual <= 0.05) {
    out.lobe_fit_used = true;
    const Eigen::VectorXd c = x.segment(2, dims);
    out.peak_separation = 2.0 * c.norm();
    std::vector<double> tp(c.data(), c.data() + dims), tm(dims);
    for (int j = 0; j < dims; ++j) tm[j] = -tp[j];
    out.lobe_centres = {grid.point_at(tp), grid.point_at(tm)};
  } else {
    out.peak_separation = fallback;
  }
  return out;
}

}  // namespace catsize
