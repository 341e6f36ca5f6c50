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
 * Truncated Fock-space backend: dense state vectors and operators over
 * N bosonic modes with a per-mode photon cutoff. This is the brute-force
 * reference that every closed form in the library is checked against.
 *
 * Joint basis ordering: |n_0, n_1, ..., n_{N-1}> has flat index
 * sum_i n_i (cutoff+1)^(N-1-i), i.e. mode 0 is the most significant digit
 * (same ordering as a Kronecker product of single-mode factors).
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <unsupported/Eigen/MatrixFunctions>

#include "catsize/errors.hpp"

namespace catsize {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

inline constexpr std::size_t kMaxJointDim = std::size_t{1} << 22;
/// Largest dimension for which a dense joint *operator* is materialised.
inline constexpr std::size_t kMaxDenseOperatorDim = 4096;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kDensityTol = 1e-10;

struct TruncationReport {
  int cutoff_used = 0;
  double tail_mass = 0.0;
  bool converged = true;
};

/// (cutoff+1)^modes, rejecting spaces above kMaxJointDim.
inline std::size_t joint_dim(int cutoff, int modes) {
  if (cutoff < 1) throw InvalidArgument("cutoff must be >= 1");
  if (modes < 1) throw InvalidArgument("modes must be >= 1");
  std::size_t dim = 1;
  for (int m = 0; m < modes; ++m) {
    dim *= static_cast<std::size_t>(cutoff) + 1;
    if (dim > kMaxJointDim) {
      std::ostringstream os;
      os << "joint Fock space (cutoff " << cutoff << ", " << modes
         << " modes) exceeds the dense limit of " << kMaxJointDim;
      throw SizingError(os.str());
    }
  }
  return dim;
}

/// True when (cutoff+1)^modes <= limit.
inline bool joint_dim_fits(int cutoff, int modes, std::size_t limit) {
  std::size_t dim = 1;
  for (int m = 0; m < modes; ++m) {
    dim *= static_cast<std::size_t>(cutoff) + 1;
    if (dim > limit) return false;
  }
  return true;
}

/// Default per-mode cutoff for displacements up to |alpha_max|.
inline int default_cutoff(double alpha_max) {
  const double a = std::abs(alpha_max);
  return static_cast<int>(std::ceil(a * a + 8.0 * a + 20.0));
}

/// Poisson tail P(n > cutoff) for mean photon number `mean`, summed
/// directly so that tails far below machine epsilon stay resolved.
inline double poisson_tail(double mean, int cutoff) {
  if (mean == 0.0) return 0.0;
  const double log_mean = std::log(mean);
  double tail = 0.0;
  for (int n = cutoff + 1;; ++n) {
    const double term = std::exp(-mean + n * log_mean - std::lgamma(n + 1.0));
    tail += term;
    if (n > mean && term <= tail * 1e-17) break;
  }
  return tail;
}

/// Smallest cutoff whose coherent-state tail mass is below `tail_tol`.
inline int cutoff_for_tail(double alpha_max, double tail_tol) {
  const double mean = alpha_max * alpha_max;
  int cutoff = 1;
  while (poisson_tail(mean, cutoff) > tail_tol) ++cutoff;
  return cutoff;
}

class FockVector {
 public:
  FockVector(int cutoff, int modes, Vector amplitudes,
             TruncationReport report = {})
      : cutoff_(cutoff), modes_(modes), amps_(std::move(amplitudes)),
        report_(report) {
    const auto dim = joint_dim(cutoff, modes);
    if (static_cast<std::size_t>(amps_.size()) != dim) {
      throw InvalidArgument("amplitude length does not match (cutoff+1)^modes");
    }
    if (report_.cutoff_used == 0) report_.cutoff_used = cutoff;
  }

  int cutoff() const noexcept { return cutoff_; }
  int modes() const noexcept { return modes_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amps_.size()); }
  const Vector& amplitudes() const noexcept { return amps_; }
  const TruncationReport& truncation() const noexcept { return report_; }

  double norm() const { return amps_.norm(); }
  double norm_deviation() const { return std::abs(norm() - 1.0); }

  Complex inner(const FockVector& other) const {
    check_compatible(other);
    return amps_.dot(other.amps_);  // conjugates *this
  }

  FockVector normalized() const {
    return FockVector(cutoff_, modes_, amps_ / amps_.norm(), report_);
  }

  FockVector operator+(const FockVector& other) const {
    check_compatible(other);
    return FockVector(cutoff_, modes_, amps_ + other.amps_, merged(other));
  }
  FockVector operator-(const FockVector& other) const {
    check_compatible(other);
    return FockVector(cutoff_, modes_, amps_ - other.amps_, merged(other));
  }
  FockVector operator*(Complex s) const {
    return FockVector(cutoff_, modes_, amps_ * s, report_);
  }

 private:
  void check_compatible(const FockVector& other) const {
    if (other.cutoff_ != cutoff_ || other.modes_ != modes_) {
      throw InvalidArgument("Fock vectors live in different spaces");
    }
  }
  TruncationReport merged(const FockVector& other) const {
    TruncationReport r = report_;
    r.tail_mass = std::max(r.tail_mass, other.report_.tail_mass);
    r.converged = r.converged && other.report_.converged;
    return r;
  }

  int cutoff_;
  int modes_;
  Vector amps_;
  TruncationReport report_;
};

class FockOperator {
 public:
  FockOperator(int cutoff, int modes, Matrix matrix, bool hermitian_hint = false)
      : cutoff_(cutoff), modes_(modes), matrix_(std::move(matrix)),
        hermitian_(hermitian_hint) {
    const auto dim = joint_dim(cutoff, modes);
    if (static_cast<std::size_t>(matrix_.rows()) != dim ||
        matrix_.rows() != matrix_.cols()) {
      throw InvalidArgument("operator matrix must be square of dimension (cutoff+1)^modes");
    }
    if (hermitian_) {
      const double dev = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
      if (dev > kHermitianTol) {
        std::ostringstream os;
        os << "operator flagged Hermitian deviates by " << dev;
        throw InvalidArgument(os.str());
      }
      matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
    }
  }

  int cutoff() const noexcept { return cutoff_; }
  int modes() const noexcept { return modes_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  const Matrix& matrix() const noexcept { return matrix_; }
  bool hermitian_hint() const noexcept { return hermitian_; }

  double hermitian_deviation() const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  }

  FockVector apply(const FockVector& v) const {
    check(v.cutoff(), v.modes());
    return FockVector(cutoff_, modes_, matrix_ * v.amplitudes(), v.truncation());
  }

  FockOperator adjoint() const {
    return FockOperator(cutoff_, modes_, matrix_.adjoint(), hermitian_);
  }

  FockOperator operator*(const FockOperator& o) const {
    check(o.cutoff_, o.modes_);
    return FockOperator(cutoff_, modes_, matrix_ * o.matrix_);
  }
  FockOperator operator+(const FockOperator& o) const {
    check(o.cutoff_, o.modes_);
    return FockOperator(cutoff_, modes_, matrix_ + o.matrix_,
                        hermitian_ && o.hermitian_);
  }
  FockOperator operator-(const FockOperator& o) const {
    check(o.cutoff_, o.modes_);
    return FockOperator(cutoff_, modes_, matrix_ - o.matrix_,
                        hermitian_ && o.hermitian_);
  }
  FockOperator scaled(Complex s) const {
    return FockOperator(cutoff_, modes_, matrix_ * s,
                        hermitian_ && s.imag() == 0.0);
  }

 private:
  void check(int cutoff, int modes) const {
    if (cutoff != cutoff_ || modes != modes_) {
      throw InvalidArgument("operator and operand live in different spaces");
    }
  }

  int cutoff_;
  int modes_;
  Matrix matrix_;
  bool hermitian_;
};

namespace detail {

inline Matrix annihilation_matrix(int cutoff) {
  Matrix a = Matrix::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return a;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

inline Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

inline std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

}  // namespace detail

/// Coherent state |alpha> truncated at `cutoff`. Throws TruncationError
/// when the lost Poisson tail exceeds `tail_tol`; the report carries the
/// tail mass either way.
inline FockVector coherent_vector(Complex alpha, int cutoff, double tail_tol = 1e-6) {
  if (cutoff < 1) throw InvalidArgument("cutoff must be >= 1");
  Vector amps(cutoff + 1);
  const double r2 = std::norm(alpha);
  amps(0) = std::exp(-0.5 * r2);
  for (int n = 1; n <= cutoff; ++n) {
    amps(n) = amps(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  }
  const double captured = amps.squaredNorm();
  TruncationReport report{cutoff, std::max(0.0, 1.0 - captured), true};
  report.converged = report.tail_mass <= tail_tol;
  if (!report.converged) {
    std::ostringstream os;
    os << "cutoff " << cutoff << " loses tail mass " << report.tail_mass
       << " of |alpha=" << alpha << ">";
    throw TruncationError(os.str(), report.tail_mass);
  }
  return FockVector(cutoff, 1, std::move(amps), report);
}

/// Single-mode Fock state |n>.
inline FockVector number_state(int n, int cutoff) {
  if (n < 0 || n > cutoff) throw InvalidArgument("photon number outside cutoff");
  Vector amps = Vector::Zero(cutoff + 1);
  amps(n) = 1.0;
  return FockVector(cutoff, 1, std::move(amps));
}

/// Standard single-mode ladder operators on the truncated space.
struct ModeOps {
  FockOperator annihilation;
  FockOperator creation;
  FockOperator number;
  FockOperator parity;

  /// (a e^{-i phi} + a^dag e^{i phi}) / sqrt(2)
  FockOperator quadrature(double phi) const {
    const Complex ph = std::polar(1.0, phi);
    Matrix x = (annihilation.matrix() * std::conj(ph) + creation.matrix() * ph) /
               std::numbers::sqrt2;
    return FockOperator(annihilation.cutoff(), 1, std::move(x), true);
  }
};

inline ModeOps mode_ops(int cutoff) {
  Matrix a = detail::annihilation_matrix(cutoff);
  Matrix n = Matrix::Zero(cutoff + 1, cutoff + 1);
  Matrix p = Matrix::Zero(cutoff + 1, cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) {
    n(k, k) = k;
    p(k, k) = (k % 2 == 0) ? 1.0 : -1.0;
  }
  Matrix ad = a.adjoint();
  return ModeOps{FockOperator(cutoff, 1, std::move(a)),
                 FockOperator(cutoff, 1, std::move(ad)),
                 FockOperator(cutoff, 1, std::move(n), true),
                 FockOperator(cutoff, 1, std::move(p), true)};
}

/// Exact matrix elements <m|D(beta)|n>, 0 <= m, n <= cutoff, of the
/// untruncated displacement, from D_{m+1,n} = (sqrt(n) D_{m,n-1} + beta D_{m,n}) / sqrt(m+1)
/// seeded by the coherent column and row. Applied to a vector supported
/// below the cutoff this gives the exact projection of the displaced vector.
inline Matrix displacement_matrix(Complex beta, int cutoff) {
  if (cutoff < 0) throw InvalidArgument("cutoff must be >= 0");
  const int d = cutoff + 1;
  Matrix out(d, d);
  const double head = std::exp(-0.5 * std::norm(beta));
  out(0, 0) = head;
  for (int n = 1; n < d; ++n) {
    out(0, n) = out(0, n - 1) * (-std::conj(beta)) / std::sqrt(static_cast<double>(n));
  }
  for (int m = 0; m + 1 < d; ++m) {
    const double inv = 1.0 / std::sqrt(static_cast<double>(m + 1));
    out(m + 1, 0) = beta * out(m, 0) * inv;
    for (int n = 1; n < d; ++n) {
      out(m + 1, n) = (std::sqrt(static_cast<double>(n)) * out(m, n - 1) + beta * out(m, n)) * inv;
    }
  }
  return out;
}

/// D(alpha) = exp(alpha a^dag - conj(alpha) a), exponentiated in the
/// truncated space. Accurate on the low-photon subspace only; the
/// deviation grows toward the cutoff.
inline FockOperator displacement_op(Complex alpha, int cutoff) {
  const Matrix a = detail::annihilation_matrix(cutoff);
  const Matrix gen = alpha * a.adjoint() - std::conj(alpha) * a;
  return FockOperator(cutoff, 1, gen.exp());
}

/// e^{i phi n} on one mode of an N-mode space.
inline FockOperator phase_shifter(double phi, int mode, int modes, int cutoff) {
  if (mode < 0 || mode >= modes) throw InvalidArgument("mode index out of range");
  const auto dim = joint_dim(cutoff, modes);
  if (dim > kMaxDenseOperatorDim) {
    throw SizingError("dense phase shifter requested on an oversized space");
  }
  const std::size_t stride = detail::ipow(cutoff + 1, modes - 1 - mode);
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const auto n = static_cast<double>((idx / stride) % (cutoff + 1));
    m(idx, idx) = std::polar(1.0, phi * n);
  }
  return FockOperator(cutoff, modes, std::move(m));
}

/// Local single-mode phase shifter as a (cutoff+1)-dimensional matrix.
inline SparseMatrix phase_shifter_local(double phi, int cutoff) {
  SparseMatrix m(cutoff + 1, cutoff + 1);
  std::vector<Eigen::Triplet<Complex>> trip;
  for (int n = 0; n <= cutoff; ++n) trip.emplace_back(n, n, std::polar(1.0, phi * n));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

/// Two-mode beamsplitter exp(i theta (a_1^dag a_2 + a_2^dag a_1)) as a
/// sparse (cutoff+1)^2 matrix. The generator conserves total photon
/// number, so it is exponentiated one total-number block at a time.
inline SparseMatrix beamsplitter_local(double theta, int cutoff) {
  const int d = cutoff + 1;
  std::vector<Eigen::Triplet<Complex>> trip;
  for (int total = 0; total <= 2 * cutoff; ++total) {
    const int lo = std::max(0, total - cutoff);
    const int hi = std::min(cutoff, total);
    const int size = hi - lo + 1;
    // Block basis: n1 = lo..hi, n2 = total - n1.
    Matrix gen = Matrix::Zero(size, size);
    for (int k = 0; k < size; ++k) {
      const int n1 = lo + k;
      const int n2 = total - n1;
      // a_1^dag a_2 |n1,n2> = sqrt((n1+1) n2) |n1+1,n2-1>
      if (k + 1 < size && n2 >= 1) {
        const double amp = std::sqrt(static_cast<double>(n1 + 1) * n2);
        gen(k + 1, k) += amp;
        gen(k, k + 1) += amp;
      }
    }
    const Matrix block = (Complex(0.0, theta) * gen).exp();
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        if (block(r, c) == Complex(0.0)) continue;
        const int row = (lo + r) * d + (total - lo - r);
        const int col = (lo + c) * d + (total - lo - c);
        trip.emplace_back(row, col, block(r, c));
      }
    }
  }
  SparseMatrix m(d * d, d * d);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

/// Apply a k-mode local operator (dense or sparse, dimension (cutoff+1)^k)
/// to the listed target modes of `state`, in the order given.
template <typename LocalMatrix>
FockVector apply_local(const LocalMatrix& local, std::span<const int> targets,
                       const FockVector& state) {
  const int cutoff = state.cutoff();
  const int modes = state.modes();
  const std::size_t d = static_cast<std::size_t>(cutoff) + 1;
  const int k = static_cast<int>(targets.size());
  if (k < 1 || k > modes) throw InvalidArgument("bad target list");
  for (int i = 0; i < k; ++i) {
    if (targets[i] < 0 || targets[i] >= modes) throw InvalidArgument("mode index out of range");
    for (int j = 0; j < i; ++j) {
      if (targets[i] == targets[j]) throw InvalidArgument("repeated target mode");
    }
  }
  const std::size_t local_dim = detail::ipow(d, k);
  if (static_cast<std::size_t>(local.rows()) != local_dim ||
      static_cast<std::size_t>(local.cols()) != local_dim) {
    throw InvalidArgument("local operator dimension does not match targets");
  }

  std::vector<std::size_t> stride(modes);
  for (int m = 0; m < modes; ++m) stride[m] = detail::ipow(d, modes - 1 - m);
  std::vector<int> others;
  for (int m = 0; m < modes; ++m) {
    if (std::find(targets.begin(), targets.end(), m) == targets.end()) others.push_back(m);
  }
  // Offsets of the local sub-block relative to a base index.
  std::vector<std::size_t> offset(local_dim, 0);
  for (std::size_t l = 0; l < local_dim; ++l) {
    std::size_t rem = l;
    for (int t = k - 1; t >= 0; --t) {
      offset[l] += (rem % d) * stride[targets[t]];
      rem /= d;
    }
  }
  const std::size_t outer = detail::ipow(d, modes - k);
  const Vector& in = state.amplitudes();
  Vector out(in.size());
  Vector sub(local_dim);
  for (std::size_t o = 0; o < outer; ++o) {
    std::size_t base = 0;
    std::size_t rem = o;
    for (int t = static_cast<int>(others.size()) - 1; t >= 0; --t) {
      base += (rem % d) * stride[others[t]];
      rem /= d;
    }
    for (std::size_t l = 0; l < local_dim; ++l) sub(l) = in(base + offset[l]);
    const Vector res = local * sub;
    for (std::size_t l = 0; l < local_dim; ++l) out(base + offset[l]) = res(l);
  }
  return FockVector(cutoff, modes, std::move(out), state.truncation());
}

template <typename LocalMatrix>
FockVector apply_local(const LocalMatrix& local, std::initializer_list<int> targets,
                       const FockVector& state) {
  return apply_local(local, std::span<const int>(targets.begin(), targets.size()), state);
}

/// Dense joint beamsplitter on modes (i, j) of an N-mode space.
inline FockOperator beamsplitter_op(double theta, int mode_i, int mode_j, int modes,
                                    int cutoff) {
  if (mode_i == mode_j || mode_i < 0 || mode_j < 0 || mode_i >= modes || mode_j >= modes) {
    throw InvalidArgument("beamsplitter needs two distinct in-range modes");
  }
  const auto dim = joint_dim(cutoff, modes);
  if (dim > kMaxDenseOperatorDim) {
    throw SizingError("dense beamsplitter requested on an oversized space; use apply_local");
  }
  const SparseMatrix local = beamsplitter_local(theta, cutoff);
  Matrix full(dim, dim);
  const int targets[2] = {mode_i, mode_j};
  for (std::size_t c = 0; c < dim; ++c) {
    Vector e = Vector::Zero(dim);
    e(c) = 1.0;
    full.col(c) = apply_local(local, std::span<const int>(targets, 2),
                              FockVector(cutoff, modes, std::move(e)))
                      .amplitudes();
  }
  return FockOperator(cutoff, modes, std::move(full));
}

/// Composite beamsplitter P_j(pi/2) B_ij(-theta) P_j(pi/2), which maps
/// |a>_i|b>_j to |a cos(theta) + b sin(theta)>_i |a sin(theta) - b cos(theta)>_j.
inline SparseMatrix composite_beamsplitter_local(double theta, int cutoff) {
  const SparseMatrix p = phase_shifter_local(std::numbers::pi / 2.0, cutoff);
  SparseMatrix id(cutoff + 1, cutoff + 1);
  id.setIdentity();
  // Phase on the second mode of the pair: kron(I, P).
  std::vector<Eigen::Triplet<Complex>> trip;
  const int d = cutoff + 1;
  for (int n1 = 0; n1 < d; ++n1) {
    for (int n2 = 0; n2 < d; ++n2) {
      trip.emplace_back(n1 * d + n2, n1 * d + n2, p.coeff(n2, n2));
    }
  }
  SparseMatrix pj(d * d, d * d);
  pj.setFromTriplets(trip.begin(), trip.end());
  const SparseMatrix b = beamsplitter_local(-theta, cutoff);
  return SparseMatrix(pj * b * pj);
}

inline FockVector tensor(std::span<const FockVector> parts) {
  if (parts.empty()) throw InvalidArgument("tensor of nothing");
  const int cutoff = parts.front().cutoff();
  int modes = 0;
  std::size_t dim = 1;
  TruncationReport report{cutoff, 0.0, true};
  for (const auto& p : parts) {
    if (p.cutoff() != cutoff) throw InvalidArgument("tensor factors use different cutoffs");
    modes += p.modes();
    dim *= p.dim();
    report.tail_mass = 1.0 - (1.0 - report.tail_mass) * (1.0 - p.truncation().tail_mass);
    report.converged = report.converged && p.truncation().converged;
  }
  joint_dim(cutoff, modes);
  Vector acc = parts.front().amplitudes();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = detail::kron(acc, parts[i].amplitudes());
  return FockVector(cutoff, modes, std::move(acc), report);
}

inline FockVector tensor(std::initializer_list<FockVector> parts) {
  return tensor(std::span<const FockVector>(parts.begin(), parts.size()));
}

inline FockOperator tensor(std::span<const FockOperator> parts) {
  if (parts.empty()) throw InvalidArgument("tensor of nothing");
  const int cutoff = parts.front().cutoff();
  int modes = 0;
  bool herm = true;
  for (const auto& p : parts) {
    if (p.cutoff() != cutoff) throw InvalidArgument("tensor factors use different cutoffs");
    modes += p.modes();
    herm = herm && p.hermitian_hint();
  }
  if (joint_dim(cutoff, modes) > kMaxDenseOperatorDim) {
    throw SizingError("dense tensor-product operator exceeds the operator limit");
  }
  Matrix acc = parts.front().matrix();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = detail::kron(acc, parts[i].matrix());
  return FockOperator(cutoff, modes, std::move(acc), herm);
}

inline FockOperator tensor(std::initializer_list<FockOperator> parts) {
  return tensor(std::span<const FockOperator>(parts.begin(), parts.size()));
}

/// Single-mode operator `op` embedded on `mode` of an N-mode space.
inline FockOperator embed(const FockOperator& op, int mode, int modes) {
  if (op.modes() != 1) throw InvalidArgument("embed expects a single-mode operator");
  if (mode < 0 || mode >= modes) throw InvalidArgument("mode index out of range");
  const int c = op.cutoff();
  std::vector<FockOperator> parts;
  const FockOperator id(c, 1, Matrix::Identity(c + 1, c + 1), true);
  for (int m = 0; m < modes; ++m) parts.push_back(m == mode ? op : id);
  return tensor(std::span<const FockOperator>(parts));
}

/// sum_i op^{(i)} over all N modes.
inline FockOperator local_sum(const FockOperator& op, int modes) {
  FockOperator acc = embed(op, 0, modes);
  for (int m = 1; m < modes; ++m) acc = acc + embed(op, m, modes);
  return acc;
}

/// |v><v| as a density operator.
inline FockOperator density(const FockVector& v) {
  if (v.dim() > kMaxDenseOperatorDim) throw SizingError("density matrix too large");
  return FockOperator(v.cutoff(), v.modes(), v.amplitudes() * v.amplitudes().adjoint(), true);
}

namespace detail {

inline void require_hermitian(const FockOperator& op, const char* what) {
  if (op.hermitian_deviation() > kHermitianTol * std::max(1.0, op.matrix().cwiseAbs().maxCoeff())) {
    throw InvalidArgument(std::string(what) + ": operator is not Hermitian");
  }
}

inline void require_density(const FockOperator& rho, const char* what) {
  require_hermitian(rho, what);
  const Complex tr = rho.matrix().trace();
  if (std::abs(tr - 1.0) > kDensityTol) {
    std::ostringstream os;
    os << what << ": trace " << tr << " is not 1";
    throw InvalidArgument(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -kDensityTol) {
    throw InvalidArgument(std::string(what) + ": operator is not positive semidefinite");
  }
}

}  // namespace detail

/// Reduced density operator on `keep_modes` (kept in ascending order).
inline FockOperator partial_trace(const FockOperator& rho, std::span<const int> keep_modes) {
  detail::require_density(rho, "partial_trace");
  const int modes = rho.modes();
  const std::size_t d = static_cast<std::size_t>(rho.cutoff()) + 1;
  std::vector<int> keep(keep_modes.begin(), keep_modes.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (keep.empty()) throw InvalidArgument("partial_trace must keep at least one mode");
  for (int m : keep) {
    if (m < 0 || m >= modes) throw InvalidArgument("mode index out of range");
  }
  std::vector<int> traced;
  for (int m = 0; m < modes; ++m) {
    if (!std::binary_search(keep.begin(), keep.end(), m)) traced.push_back(m);
  }
  const int nk = static_cast<int>(keep.size());
  const std::size_t kd = detail::ipow(d, nk);
  const std::size_t td = detail::ipow(d, modes - nk);

  auto index_of = [&](std::size_t kept_idx, std::size_t traced_idx) {
    std::vector<std::size_t> digits(modes);
    for (int t = nk - 1; t >= 0; --t) {
      digits[keep[t]] = kept_idx % d;
      kept_idx /= d;
    }
    for (int t = static_cast<int>(traced.size()) - 1; t >= 0; --t) {
      digits[traced[t]] = traced_idx % d;
      traced_idx /= d;
    }
    std::size_t idx = 0;
    for (int m = 0; m < modes; ++m) idx = idx * d + digits[m];
    return idx;
  };

  Matrix out = Matrix::Zero(kd, kd);
  const Matrix& m = rho.matrix();
  for (std::size_t t = 0; t < td; ++t) {
    for (std::size_t r = 0; r < kd; ++r) {
      const std::size_t ri = index_of(r, t);
      for (std::size_t c = 0; c < kd; ++c) out(r, c) += m(ri, index_of(c, t));
    }
  }
  out = (0.5 * (out + out.adjoint())).eval();
  return FockOperator(rho.cutoff(), nk, std::move(out), true);
}

inline FockOperator partial_trace(const FockOperator& rho, std::initializer_list<int> keep) {
  return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

/// Sum of absolute eigenvalues of a Hermitian operator.
inline double trace_norm(const FockOperator& op) {
  detail::require_hermitian(op, "trace_norm");
  Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

struct HelstromPovm {
  FockOperator positive;  ///< guess rho
  FockOperator negative;  ///< guess sigma
  double success_probability;
};

/// Optimal two-outcome measurement for rho vs sigma at equal priors.
inline HelstromPovm helstrom_povm(const FockOperator& rho, const FockOperator& sigma) {
  detail::require_density(rho, "helstrom_povm");
  detail::require_density(sigma, "helstrom_povm");
  const Matrix diff = rho.matrix() - sigma.matrix();
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff);
  const Matrix& v = es.eigenvectors();
  Matrix pos = Matrix::Zero(diff.rows(), diff.cols());
  double norm1 = 0.0;
  for (Eigen::Index k = 0; k < diff.rows(); ++k) {
    const double ev = es.eigenvalues()(k);
    norm1 += std::abs(ev);
    if (ev > 0.0) pos += v.col(k) * v.col(k).adjoint();
  }
  Matrix neg = Matrix::Identity(diff.rows(), diff.cols()) - pos;
  return HelstromPovm{FockOperator(rho.cutoff(), rho.modes(), std::move(pos), true),
                      FockOperator(rho.cutoff(), rho.modes(), std::move(neg), true),
                      0.5 + 0.25 * norm1};
}

/// <state| op |state> / <state|state>.
inline Complex expectation(const FockOperator& op, const FockVector& state) {
  const Vector av = op.matrix() * state.amplitudes();
  return state.amplitudes().dot(av) / state.amplitudes().squaredNorm();
}

/// <A^2> - <A>^2 for Hermitian A (state normalised internally).
inline double variance(const FockOperator& op, const FockVector& state) {
  detail::require_hermitian(op, "variance");
  const Vector av = op.matrix() * state.amplitudes();
  const double nrm = state.amplitudes().squaredNorm();
  const double mean = std::real(state.amplitudes().dot(av)) / nrm;
  const double second = av.squaredNorm() / nrm;
  return second - mean * mean;
}

}  // namespace catsize
