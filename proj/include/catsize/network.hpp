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
 * Beamsplitter chain that splits one coherent mode evenly over M modes,
 * and the resulting map from a single-mode cat plus vacuum modes to the
 * entangled coherent state.
 */

#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "catsize/fock.hpp"
#include "catsize/phase_space.hpp"

namespace catsize {

/// theta_q = (atan o sec)^{M-1-q}(pi/4), q = 1..M-1 (returned 0-based).
inline std::vector<double> splitting_angles(int modes) {
  if (modes < 2) throw InvalidArgument("splitting network needs at least two modes");
  std::vector<double> theta(modes - 1);
  for (int q = 1; q <= modes - 1; ++q) {
    double t = std::numbers::pi / 4.0;
    for (int r = 0; r < modes - 1 - q; ++r) t = std::atan(1.0 / std::cos(t));
    theta[q - 1] = t;
  }
  return theta;
}

/// Applies composite splitters on (0,1), (1,2), ..., (M-2, M-1) in that order.
inline FockVector apply_splitting_network(const FockVector& state) {
  const auto theta = splitting_angles(state.modes());
  FockVector out = state;
  for (int q = 0; q + 1 < state.modes(); ++q) {
    const int targets[2] = {q, q + 1};
    out = apply_local(composite_beamsplitter_local(theta[q], state.cutoff()),
                      std::span<const int>(targets, 2), out);
  }
  return out;
}

struct NetworkCheck {
  int modes = 0;
  Complex alpha;
  int cutoff = 0;
  double fidelity = 0.0;
  double norm_deviation = 0.0;  ///< |1 - |output||
};

namespace detail {

inline int network_cutoff(double amplitude, int cutoff) {
  return cutoff > 0 ? cutoff : cutoff_for_tail(amplitude, 1e-14) + 4;
}

inline double pure_fidelity(const FockVector& a, const FockVector& b) {
  return std::norm(a.amplitudes().dot(b.amplitudes())) /
         (a.amplitudes().squaredNorm() * b.amplitudes().squaredNorm());
}

inline FockVector with_vacuum_modes(const FockVector& single, int modes) {
  std::vector<FockVector> parts{single};
  for (int m = 1; m < modes; ++m) parts.push_back(number_state(0, single.cutoff()));
  return tensor(std::span<const FockVector>(parts));
}

}  // namespace detail

/// Fidelity of network(|sqrt(M) a> (x) |0>^{M-1}) with |a>^{(x)M}.
inline NetworkCheck check_splitting_network(int modes, Complex alpha, int cutoff = 0) {
  const double big = std::sqrt(static_cast<double>(modes)) * std::abs(alpha);
  NetworkCheck r{modes, alpha, detail::network_cutoff(big, cutoff)};
  const auto input = coherent_vector(std::sqrt(static_cast<double>(modes)) * alpha, r.cutoff, 1e-12)
                         .normalized();
  const auto out = apply_splitting_network(detail::with_vacuum_modes(input, modes));
  const auto single = coherent_vector(alpha, r.cutoff, 1e-12).normalized();
  std::vector<FockVector> parts(modes, single);
  const auto target = tensor(std::span<const FockVector>(parts));
  r.fidelity = detail::pure_fidelity(out, target);
  r.norm_deviation = out.norm_deviation();
  return r;
}

/// Fidelity of network((|sqrt(N) a> + |-sqrt(N) a>) (x) |0>^{N-1}) with |Omega_N(a)>.
inline NetworkCheck check_cat_splitting(int modes, Complex alpha, int cutoff = 0) {
  const double big = std::sqrt(static_cast<double>(modes)) * std::abs(alpha);
  NetworkCheck r{modes, alpha, detail::network_cutoff(big, cutoff)};
  const Complex a = std::sqrt(static_cast<double>(modes)) * alpha;
  const auto cat = (coherent_vector(a, r.cutoff, 1e-12) + coherent_vector(-a, r.cutoff, 1e-12))
                       .normalized();
  const auto out = apply_splitting_network(detail::with_vacuum_modes(cat, modes));
  const auto target = fock_state(CatStateSpec{StateFamily::kOmega, modes, alpha, {}}, r.cutoff);
  r.fidelity = detail::pure_fidelity(out, target);
  r.norm_deviation = out.norm_deviation();
  return r;
}

}  // namespace catsize
