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

#include "erasim/qstate.hpp"

namespace erasim {

inline constexpr double kDefaultMergeTol = 1e-8;

/// Distinct eigenvalues (ascending) with their orthogonal eigenprojectors.
/// The index k = 0..count()-1 of the ascending order is the eigenvalue label
/// used everywhere downstream (K_mu, Omega_mu, ancilla levels).
struct SpectralDecomposition {
  Dims dims;
  std::vector<double> eigenvalues;
  std::vector<Matrix> projectors;

  int count() const { return static_cast<int>(eigenvalues.size()); }
  long dim() const { return projectors.empty() ? 0 : projectors[0].rows(); }

  /// Sum of lambda_k * P_k.
  Matrix reassemble() const {
    Matrix m = Matrix::Zero(dim(), dim());
    for (int k = 0; k < count(); ++k) m += eigenvalues[k] * projectors[k];
    return m;
  }

  OperatorMatrix projector_op(int k) const { return OperatorMatrix{dims, projectors[k]}; }
};

namespace detail {

// Groups sorted (value, original index) pairs; values within merge_tol of the
// group's first member share a projector.
inline SpectralDecomposition group_spectrum(const Dims& dims,
                                            std::vector<std::pair<double, long>> pairs,
                                            const std::vector<Vector>& basis,
                                            double merge_tol) {
  std::sort(pairs.begin(), pairs.end());
  SpectralDecomposition out;
  out.dims = dims;
  long d = basis.empty() ? 0 : basis[0].size();
  std::size_t i = 0;
  while (i < pairs.size()) {
    double anchor = pairs[i].first;
    Matrix proj = Matrix::Zero(d, d);
    double sum = 0.0;
    int n = 0;
    while (i < pairs.size() && pairs[i].first - anchor <= merge_tol) {
      proj += projector(basis[pairs[i].second]);
      sum += pairs[i].first;
      ++n;
      ++i;
    }
    out.eigenvalues.push_back(sum / n);
    out.projectors.push_back(std::move(proj));
  }
  return out;
}

}  // namespace detail

/// Spectral decomposition of a Hermitian operator. Eigenvalues closer than
/// merge_tol collapse into one degenerate projector. Exactly diagonal inputs
/// take an exact path (no eigensolver), so basis projectors of diagonal
/// observables carry no floating-point noise.
inline SpectralDecomposition spectral_decompose(const OperatorMatrix& H,
                                                double merge_tol = kDefaultMergeTol) {
  check_square(H);
  if (!is_hermitian(H.mat)) throw std::invalid_argument("spectral_decompose: input not Hermitian");
  long d = H.dim();

  bool diagonal = true;
  for (long r = 0; r < d && diagonal; ++r)
    for (long c = 0; c < d; ++c)
      if (r != c && H.mat(r, c) != cplx(0.0, 0.0)) {
        diagonal = false;
        break;
      }

  std::vector<std::pair<double, long>> pairs;
  std::vector<Vector> basis;
  if (diagonal) {
    for (long i = 0; i < d; ++i) {
      pairs.emplace_back(H.mat(i, i).real(), i);
      Vector e = Vector::Zero(d);
      e(i) = 1.0;
      basis.push_back(std::move(e));
    }
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> es(H.mat);
    if (es.info() != Eigen::Success)
      throw std::runtime_error("spectral_decompose: eigensolver failed");
    for (long i = 0; i < d; ++i) {
      pairs.emplace_back(es.eigenvalues()(i), i);
      basis.push_back(es.eigenvectors().col(i));
    }
  }
  return detail::group_spectrum(H.dims, std::move(pairs), basis, merge_tol);
}

/// Matrix function f applied through the spectral decomposition,
/// sum f(lambda_k) P_k.
template <typename F>
Matrix spectral_apply(const SpectralDecomposition& spec, F&& f) {
  Matrix m = Matrix::Zero(spec.dim(), spec.dim());
  for (int k = 0; k < spec.count(); ++k) m += f(spec.eigenvalues[k]) * spec.projectors[k];
  return m;
}

/// exp(i * theta * H) for Hermitian H, exact through the spectrum.
inline Matrix exp_i_hermitian(const OperatorMatrix& H, double theta,
                              double merge_tol = kDefaultMergeTol) {
  auto spec = spectral_decompose(H, merge_tol);
  return spectral_apply(spec, [theta](double lam) {
    return std::exp(cplx(0.0, theta * lam));
  });
}

/// Product observable X (x) Y with the protocol-side bookkeeping: the factor
/// with the smaller number of distinct eigenvalues plays the X role. When
/// that factor is the physical B side, `swapped` records the relabeling.
struct ProductObservable {
  OperatorMatrix op_a;  // physical A factor
  OperatorMatrix op_b;  // physical B factor
  SpectralDecomposition spec_x;  // |x| <= |y| side
  SpectralDecomposition spec_y;
  bool swapped = false;

  int x_count() const { return spec_x.count(); }
  int y_count() const { return spec_y.count(); }

  Dims system_dims() const {
    return Dims{static_cast<int>(op_a.dim()), static_cast<int>(op_b.dim())};
  }
  /// Subsystem index (0 = A, 1 = B) carrying the X role.
  int x_side() const { return swapped ? 1 : 0; }
  int y_side() const { return swapped ? 0 : 1; }
};

inline ProductObservable make_product_observable(const OperatorMatrix& A, const OperatorMatrix& B,
                                                 double merge_tol = kDefaultMergeTol) {
  auto spec_a = spectral_decompose(A, merge_tol);
  auto spec_b = spectral_decompose(B, merge_tol);
  ProductObservable p;
  p.op_a = A;
  p.op_b = B;
  if (spec_a.count() <= spec_b.count()) {
    p.spec_x = std::move(spec_a);
    p.spec_y = std::move(spec_b);
    p.swapped = false;
  } else {
    p.spec_x = std::move(spec_b);
    p.spec_y = std::move(spec_a);
    p.swapped = true;
  }
  return p;
}

/// Omega_mu = [sum_k x_{k-mu} X_k] (x) Y on the physical A (x) B ordering.
/// The index k - mu is modular over the |x| labels; Omega_0 = X (x) Y.
inline OperatorMatrix omega_mu(const ProductObservable& p, int mu) {
  int n = p.x_count();
  if (mu < 0 || mu >= n) throw std::out_of_range("omega_mu: mu out of range");
  Matrix xs = Matrix::Zero(p.spec_x.dim(), p.spec_x.dim());
  for (int k = 0; k < n; ++k)
    xs += p.spec_x.eigenvalues[((k - mu) % n + n) % n] * p.spec_x.projectors[k];
  Matrix y = p.spec_y.reassemble();
  Dims dims = p.system_dims();
  Matrix m = p.swapped ? kron(y, xs) : kron(xs, y);
  return OperatorMatrix{dims, std::move(m)};
}

/// K_mu = sum_k ((k - mu) mod |x|) X_k on the X-role subsystem alone.
inline OperatorMatrix k_mu(const ProductObservable& p, int mu) {
  int n = p.x_count();
  if (mu < 0 || mu >= n) throw std::out_of_range("k_mu: mu out of range");
  Matrix m = Matrix::Zero(p.spec_x.dim(), p.spec_x.dim());
  for (int k = 0; k < n; ++k)
    m += static_cast<double>(((k - mu) % n + n) % n) * p.spec_x.projectors[k];
  return OperatorMatrix{p.spec_x.dims, std::move(m)};
}

}  // namespace erasim
