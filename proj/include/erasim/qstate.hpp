// Copyright 2026 The erasim authors
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

#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace erasim {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Ordered list of subsystem dimensions, leftmost subsystem slowest
/// (Kronecker order).
using Dims = std::vector<int>;

inline constexpr double kDefaultTol = 1e-9;

/// Thrown when a pre/post-selected quantity is undefined because the
/// conditioning probability vanishes.
class singular_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline long dim_product(const Dims& dims) {
  long d = 1;
  for (int x : dims) {
    if (x <= 0) throw std::invalid_argument("subsystem dimension must be positive");
    d *= x;
  }
  return d;
}

// stride[i] = product of dims to the right of i
inline std::vector<long> strides(const Dims& dims) {
  std::vector<long> s(dims.size(), 1);
  for (int i = static_cast<int>(dims.size()) - 2; i >= 0; --i)
    s[i] = s[i + 1] * dims[i + 1];
  return s;
}

inline void check_targets(const std::vector<int>& targets, const Dims& dims) {
  for (std::size_t a = 0; a < targets.size(); ++a) {
    if (targets[a] < 0 || targets[a] >= static_cast<int>(dims.size()))
      throw std::out_of_range("target subsystem index out of range");
    for (std::size_t b = a + 1; b < targets.size(); ++b)
      if (targets[a] == targets[b])
        throw std::invalid_argument("duplicate target subsystem");
  }
}

// Enumerates full-space indices split into a target part and a complement
// part. target_index runs over prod(dims[t]) in the order of `targets`;
// the callback receives the full-space offset for target_index = 0 plus
// a function to add the target contribution.
struct IndexSplit {
  std::vector<long> target_stride;   // full-space stride of each target slot
  std::vector<int> target_dim;
  std::vector<long> other_stride;
  std::vector<int> other_dim;
  long target_count = 1;
  long other_count = 1;

  IndexSplit(const Dims& dims, const std::vector<int>& targets) {
    check_targets(targets, dims);
    auto st = strides(dims);
    std::vector<bool> is_target(dims.size(), false);
    for (int t : targets) is_target[t] = true;
    for (int t : targets) {
      target_stride.push_back(st[t]);
      target_dim.push_back(dims[t]);
      target_count *= dims[t];
    }
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (!is_target[i]) {
        other_stride.push_back(st[i]);
        other_dim.push_back(dims[i]);
        other_count *= dims[i];
      }
    }
  }

  // full-space offset of the k-th assignment of the complement subsystems
  long other_offset(long k) const {
    long off = 0;
    for (int i = static_cast<int>(other_dim.size()) - 1; i >= 0; --i) {
      off += (k % other_dim[i]) * other_stride[i];
      k /= other_dim[i];
    }
    return off;
  }

  // full-space offset of the r-th assignment of the target subsystems,
  // where r is a row index of the operator acting on the targets
  long target_offset(long r) const {
    long off = 0;
    for (int i = static_cast<int>(target_dim.size()) - 1; i >= 0; --i) {
      off += (r % target_dim[i]) * target_stride[i];
      r /= target_dim[i];
    }
    return off;
  }
};

}  // namespace detail

/// Pure state of a composite system. `amps` has length prod(dims) with the
/// leftmost subsystem varying slowest. Normalized unless `unnormalized` is
/// set (sub-channel outputs and protocol branches before renormalization).
struct PureState {
  Dims dims;
  Vector amps;
  bool unnormalized = false;

  long dim() const { return amps.size(); }

  double norm() const { return amps.norm(); }

  PureState normalized() const {
    double n = norm();
    if (n == 0.0) throw singular_error("cannot normalize the zero state");
    PureState out{dims, amps / n, false};
    return out;
  }

  /// Computational basis state |labels[0], labels[1], ...>.
  static PureState basis(const Dims& dims, const std::vector<int>& labels) {
    if (labels.size() != dims.size())
      throw std::invalid_argument("basis labels do not match subsystem count");
    auto st = detail::strides(dims);
    long idx = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) {
      if (labels[i] < 0 || labels[i] >= dims[i])
        throw std::out_of_range("basis label out of range");
      idx += labels[i] * st[i];
    }
    Vector v = Vector::Zero(detail::dim_product(dims));
    v(idx) = 1.0;
    return PureState{dims, v};
  }
};

/// Density operator of a composite system.
struct DensityState {
  Dims dims;
  Matrix rho;
  bool unnormalized = false;

  long dim() const { return rho.rows(); }
  double trace() const { return rho.trace().real(); }
};

/// A (not necessarily Hermitian or unitary) operator on a composite space.
struct OperatorMatrix {
  Dims dims;
  Matrix mat;

  long dim() const { return mat.rows(); }
};

inline void check_square(const OperatorMatrix& op) {
  if (op.mat.rows() != op.mat.cols() || op.mat.rows() != detail::dim_product(op.dims))
    throw std::invalid_argument("operator side does not match prod(dims)");
}

inline bool is_hermitian(const Matrix& m, double tol = kDefaultTol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

inline bool is_unitary(const Matrix& m, double tol = kDefaultTol) {
  Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff() <= tol;
}

inline bool is_normalized(const PureState& s, double tol = kDefaultTol) {
  return std::abs(s.norm() - 1.0) <= tol;
}

/// Hermitian, positive semidefinite, unit trace (trace skipped when flagged
/// unnormalized).
inline bool is_valid_density(const DensityState& rho, double tol = kDefaultTol) {
  if (!is_hermitian(rho.rho, tol)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.rho);
  if (es.eigenvalues().minCoeff() < -tol) return false;
  return rho.unnormalized || std::abs(rho.trace() - 1.0) <= tol;
}

// ---------------------------------------------------------------------------
// basic constructions

inline Matrix identity_matrix(long d) { return Matrix::Identity(d, d); }

inline Matrix sigma_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix sigma_y() {
  Matrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

inline Matrix sigma_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix hadamard() {
  Matrix m(2, 2);
  double s = 1.0 / std::sqrt(2.0);
  m << s, s, s, -s;
  return m;
}

/// |ket><ket| on ket's space.
inline Matrix projector(const Vector& ket) { return ket * ket.adjoint(); }

/// Rank-1 basis projector |k><k| in dimension d.
inline Matrix basis_projector(long d, long k) {
  Matrix m = Matrix::Zero(d, d);
  m(k, k) = 1.0;
  return m;
}

// ---------------------------------------------------------------------------
// tensor products

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline PureState tensor(const PureState& a, const PureState& b) {
  Dims dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  Vector out(a.dim() * b.dim());
  for (long i = 0; i < a.dim(); ++i)
    out.segment(i * b.dim(), b.dim()) = a.amps(i) * b.amps;
  return PureState{std::move(dims), std::move(out), a.unnormalized || b.unnormalized};
}

inline OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b) {
  check_square(a);
  check_square(b);
  Dims dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  return OperatorMatrix{std::move(dims), kron(a.mat, b.mat)};
}

inline DensityState tensor(const DensityState& a, const DensityState& b) {
  Dims dims = a.dims;
  dims.insert(dims.end(), b.dims.begin(), b.dims.end());
  return DensityState{std::move(dims), kron(a.rho, b.rho), a.unnormalized || b.unnormalized};
}

inline DensityState to_density(const PureState& s) {
  return DensityState{s.dims, s.amps * s.amps.adjoint(), s.unnormalized};
}

// ---------------------------------------------------------------------------
// embedding and application of local operators

/// Extends `op`, acting on the listed target subsystems, with the identity on
/// every other subsystem of `dims`. Targets need not be adjacent or sorted;
/// the row-order of `op` follows the order of `targets`.
inline OperatorMatrix embed(const OperatorMatrix& op, const std::vector<int>& targets,
                            const Dims& dims) {
  check_square(op);
  if (targets.size() != op.dims.size())
    throw std::invalid_argument("embed: target count does not match operator arity");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= static_cast<int>(dims.size()))
      throw std::out_of_range("embed: target out of range");
    if (dims[targets[i]] != op.dims[i])
      throw std::invalid_argument("embed: target dimension mismatch");
  }
  detail::IndexSplit split(dims, targets);
  long total = detail::dim_product(dims);
  Matrix out = Matrix::Zero(total, total);
  for (long k = 0; k < split.other_count; ++k) {
    long base = split.other_offset(k);
    for (long r = 0; r < split.target_count; ++r) {
      long row = base + split.target_offset(r);
      for (long c = 0; c < split.target_count; ++c) {
        cplx v = op.mat(r, c);
        if (v != cplx(0.0, 0.0)) out(row, base + split.target_offset(c)) = v;
      }
    }
  }
  return OperatorMatrix{dims, std::move(out)};
}

/// Applies `U` to the target subsystems of `s` without forming the embedded
/// matrix.
inline PureState apply(const OperatorMatrix& U, const PureState& s,
                       const std::vector<int>& targets) {
  check_square(U);
  if (targets.size() != U.dims.size())
    throw std::invalid_argument("apply: target count does not match operator arity");
  for (std::size_t i = 0; i < targets.size(); ++i)
    if (targets[i] < 0 || targets[i] >= static_cast<int>(s.dims.size()) ||
        s.dims[targets[i]] != U.dims[i])
      throw std::invalid_argument("apply: target dimension mismatch");
  detail::IndexSplit split(s.dims, targets);
  Vector out = Vector::Zero(s.dim());
  Vector in_block(split.target_count);
  for (long k = 0; k < split.other_count; ++k) {
    long base = split.other_offset(k);
    for (long c = 0; c < split.target_count; ++c)
      in_block(c) = s.amps(base + split.target_offset(c));
    Vector out_block = U.mat * in_block;
    for (long r = 0; r < split.target_count; ++r)
      out(base + split.target_offset(r)) = out_block(r);
  }
  return PureState{s.dims, std::move(out), s.unnormalized};
}

/// Applies `U` to the whole space.
inline PureState apply(const OperatorMatrix& U, const PureState& s) {
  if (U.dims != s.dims) throw std::invalid_argument("apply: dimension mismatch");
  return PureState{s.dims, U.mat * s.amps, s.unnormalized};
}

// ---------------------------------------------------------------------------
// partial trace

/// Reduced state on the `keep` subsystems (order of `keep` defines the output
/// subsystem order). Trace preserving.
inline DensityState partial_trace(const DensityState& rho, const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("partial_trace: keep must be nonempty");
  detail::check_targets(keep, rho.dims);
  detail::IndexSplit split(rho.dims, keep);
  Dims out_dims;
  for (int k : keep) out_dims.push_back(rho.dims[k]);
  Matrix out = Matrix::Zero(split.target_count, split.target_count);
  for (long k = 0; k < split.other_count; ++k) {
    long base = split.other_offset(k);
    for (long r = 0; r < split.target_count; ++r) {
      long row = base + split.target_offset(r);
      for (long c = 0; c < split.target_count; ++c)
        out(r, c) += rho.rho(row, base + split.target_offset(c));
    }
  }
  return DensityState{std::move(out_dims), std::move(out), rho.unnormalized};
}

inline DensityState partial_trace(const PureState& s, const std::vector<int>& keep) {
  return partial_trace(to_density(s), keep);
}

// ---------------------------------------------------------------------------
// inner products and distances

/// <a|b>, conjugate-linear in the first argument.
inline cplx inner(const PureState& a, const PureState& b) {
  if (a.dims != b.dims) throw std::invalid_argument("inner: dimension mismatch");
  return a.amps.dot(b.amps);  // Eigen's dot conjugates the left operand
}

/// |<a|b>| for normalized inputs.
inline double fidelity(const PureState& a, const PureState& b) {
  return std::abs(inner(a, b));
}

/// Fidelity of possibly-unnormalized vectors, |<a|b>| / (|a||b|).
inline double fidelity_normalized(const PureState& a, const PureState& b) {
  double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) throw singular_error("fidelity of a zero vector");
  return std::abs(inner(a, b)) / (na * nb);
}

inline bool equal_up_to_global_phase(const PureState& a, const PureState& b,
                                     double tol = kDefaultTol) {
  return std::abs(fidelity_normalized(a, b) - 1.0) <= tol;
}

struct SchmidtResult {
  int rank = 0;
  std::vector<double> singular_values;  // descending
};

/// Schmidt decomposition of `s` across the bipartition (left = listed
/// subsystems, right = the rest). Rank counts singular values > tol.
inline SchmidtResult schmidt(const PureState& s, const std::vector<int>& left,
                             double tol = kDefaultTol) {
  if (left.empty() || left.size() >= s.dims.size())
    throw std::invalid_argument("schmidt: cut must be a proper nonempty bipartition");
  detail::IndexSplit split(s.dims, left);
  Matrix m(split.target_count, split.other_count);
  for (long r = 0; r < split.target_count; ++r) {
    long roff = split.target_offset(r);
    for (long c = 0; c < split.other_count; ++c)
      m(r, c) = s.amps(roff + split.other_offset(c));
  }
  Eigen::JacobiSVD<Matrix> svd(m);
  SchmidtResult out;
  for (long i = 0; i < svd.singularValues().size(); ++i) {
    double sv = svd.singularValues()(i);
    out.singular_values.push_back(sv);
    if (sv > tol) ++out.rank;
  }
  return out;
}

inline int schmidt_rank(const PureState& s, const std::vector<int>& left,
                        double tol = kDefaultTol) {
  return schmidt(s, left, tol).rank;
}

/// Trace distance (1/2)||rho - sigma||_1 for normalized states.
inline double trace_distance(const DensityState& rho, const DensityState& sigma,
                             double tol = kDefaultTol) {
  if (rho.dims != sigma.dims) throw std::invalid_argument("trace_distance: dimension mismatch");
  if (std::abs(rho.trace() - 1.0) > tol || std::abs(sigma.trace() - 1.0) > tol)
    throw std::invalid_argument("trace_distance: inputs must be normalized");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.rho - sigma.rho);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace erasim
