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
 * Moments of local-sum operators in states c1 |u>^N + c2 |v>^N.
 *
 * For A = sum_i O_i every moment reduces to single-mode brackets:
 *   <X|A|Y>   = N a_xy o_xy^{N-1}
 *   <X|A^2|Y> = N b_xy o_xy^{N-1} + N(N-1) a_xy^2 o_xy^{N-2}
 * with a_xy = <x|O|y>, b_xy = <x|O^2|y>, o_xy = <x|y>. The single-mode
 * vectors live in a truncated Fock space chosen with enough headroom that
 * O^2 is exact to double precision on them.
 */

#pragma once

#include <array>
#include <cmath>

#include "catsize/closed_forms.hpp"
#include "catsize/fock.hpp"

namespace catsize {

struct TwoBranchState {
  int modes = 1;
  std::array<Complex, 2> coeffs{Complex(1.0), Complex(1.0)};
  std::array<Vector, 2> branches;  ///< normalised single-mode factors
  int cutoff = 0;
};

struct LocalSumMoments {
  double norm2 = 0.0;  ///< <psi|psi> of the unnormalised combination
  double mean = 0.0;
  double variance = 0.0;
};

namespace detail {

/// z^k with z^0 = 1 for every z, including 0.
inline Complex cpow(Complex z, long k) {
  Complex r(1.0), b = z;
  while (k > 0) {
    if (k & 1) r *= b;
    b *= b;
    k >>= 1;
  }
  return r;
}

inline Vector unit(const Vector& v) { return v / v.norm(); }

}  // namespace detail

/// Cutoff giving O^2 brackets of coherent-type vectors at double precision.
inline int bracket_cutoff(Complex alpha) {
  return cutoff_for_tail(std::abs(alpha), 1e-18) + 12;
}

/// Kitten vectors (|a> +- |-a>)/A_+-.
inline std::array<Vector, 2> kittens(Complex alpha, int cutoff) {
  const Vector p = coherent_vector(alpha, cutoff, 1e-12).amplitudes();
  const Vector m = coherent_vector(-alpha, cutoff, 1e-12).amplitudes();
  return {detail::unit(p + m), detail::unit(p - m)};
}

/// Branch representation of OMEGA, HCS, EVEN_CAT, ODD_CAT and
/// PRODUCT_COHERENT. Single-mode cats are one-mode OMEGA-like states.
inline TwoBranchState two_branch(const CatStateSpec& spec, int cutoff = 0) {
  spec.validate();
  if (cutoff == 0) cutoff = bracket_cutoff(spec.alpha);
  TwoBranchState s;
  s.modes = spec.modes;
  s.cutoff = cutoff;
  switch (spec.family) {
    case StateFamily::kOmega:
    case StateFamily::kEvenCat:
    case StateFamily::kOddCat:
    case StateFamily::kProductCoherent: {
      if (spec.family != StateFamily::kOmega && spec.modes != 1 &&
          spec.family != StateFamily::kProductCoherent) {
        throw InvalidArgument("single-mode cats take modes = 1");
      }
      s.branches = {coherent_vector(spec.alpha, cutoff, 1e-12).amplitudes(),
                    coherent_vector(-spec.alpha, cutoff, 1e-12).amplitudes()};
      s.branches = {detail::unit(s.branches[0]), detail::unit(s.branches[1])};
      if (spec.family == StateFamily::kOddCat) s.coeffs[1] = -1.0;
      if (spec.family == StateFamily::kProductCoherent) s.coeffs[1] = 0.0;
      break;
    }
    case StateFamily::kHcs:
      s.branches = kittens(spec.alpha, cutoff);
      break;
    default:
      throw InvalidArgument(std::string("no two-branch form for ") + to_string(spec.family));
  }
  return s;
}

/// Mean and variance of sum_i O_i where `op` is the single-mode O.
inline LocalSumMoments local_sum_moments(const TwoBranchState& s, const Matrix& op) {
  const long n = s.modes;
  std::array<Vector, 2> ov;
  for (int k = 0; k < 2; ++k) ov[k] = op * s.branches[k];
  Complex norm2(0.0), m1(0.0), m2(0.0);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      const Complex c = std::conj(s.coeffs[x]) * s.coeffs[y];
      if (c == Complex(0.0)) continue;
      const Complex o = s.branches[x].dot(s.branches[y]);
      const Complex a = s.branches[x].dot(ov[y]);
      // <x|O^2|y> = <O^dag x|O y>; O is Hermitian here.
      const Complex b = ov[x].dot(ov[y]);
      norm2 += c * detail::cpow(o, n);
      m1 += c * static_cast<double>(n) * a * detail::cpow(o, n - 1);
      m2 += c * (static_cast<double>(n) * b * detail::cpow(o, n - 1) +
                 static_cast<double>(n) * static_cast<double>(n - 1) * a * a *
                     detail::cpow(o, n - 2));
    }
  }
  LocalSumMoments r;
  r.norm2 = norm2.real();
  r.mean = m1.real() / r.norm2;
  r.variance = std::max(0.0, m2.real() / r.norm2 - r.mean * r.mean);
  return r;
}

/// Variance of sum_i O_i in the product state |u>^N.
inline double product_variance(const Vector& u, const Matrix& op, int modes) {
  const Vector ou = op * u;
  const double mean = u.dot(ou).real();
  return modes * std::max(0.0, ou.squaredNorm() - mean * mean);
}

}  // namespace catsize
