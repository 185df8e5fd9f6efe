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

#include "erasim/observable.hpp"

#include <optional>

namespace erasim {

/// Measurement channel in Kraus form, sum K^dag K = I.
struct KrausChannel {
  Dims dims;
  std::vector<Matrix> kraus;
  std::vector<std::string> labels;

  int count() const { return static_cast<int>(kraus.size()); }

  bool complete(double tol = kDefaultTol) const {
    long d = kraus.empty() ? 0 : kraus[0].rows();
    Matrix s = Matrix::Zero(d, d);
    for (const auto& k : kraus) s += k.adjoint() * k;
    return (s - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
  }
};

/// Lueders channel of a projective observable: rho -> sum_k P_k rho P_k.
inline KrausChannel lueders(const SpectralDecomposition& spec) {
  KrausChannel ch;
  ch.dims = spec.dims;
  for (int k = 0; k < spec.count(); ++k) {
    ch.kraus.push_back(spec.projectors[k]);
    ch.labels.push_back(std::to_string(spec.eigenvalues[k]));
  }
  return ch;
}

inline DensityState apply_channel(const KrausChannel& ch, const DensityState& rho) {
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const auto& k : ch.kraus) out += k * rho.rho * k.adjoint();
  return DensityState{rho.dims, std::move(out), rho.unnormalized};
}

/// One outcome of the channel applied without renormalization; `probability`
/// is the outcome's Born weight.
template <typename StateT>
struct Subchannel {
  StateT state;
  double probability;
};

inline Subchannel<PureState> subchannel_apply(const KrausChannel& ch, int k, const PureState& s) {
  if (k < 0 || k >= ch.count()) throw std::out_of_range("subchannel index out of range");
  Vector v = ch.kraus[k] * s.amps;
  double p = v.squaredNorm();
  return {PureState{s.dims, std::move(v), true}, p};
}

inline Subchannel<DensityState> subchannel_apply(const KrausChannel& ch, int k,
                                                 const DensityState& rho) {
  if (k < 0 || k >= ch.count()) throw std::out_of_range("subchannel index out of range");
  Matrix m = ch.kraus[k] * rho.rho * ch.kraus[k].adjoint();
  double p = m.trace().real();
  return {DensityState{rho.dims, std::move(m), true}, p};
}

/// Born probabilities P(lambda_k) = <s|P_k|s>.
inline std::vector<double> born(const PureState& s, const SpectralDecomposition& spec) {
  if (spec.dim() != s.dim()) throw std::invalid_argument("born: dimension mismatch");
  std::vector<double> out;
  out.reserve(spec.count());
  for (int k = 0; k < spec.count(); ++k)
    out.push_back((s.amps.adjoint() * spec.projectors[k] * s.amps)(0).real());
  return out;
}

/// Pre-selected |psi> and post-selected |phi> boundary conditions.
struct PrePostSelection {
  PureState pre;
  PureState post;
};

/// ABL probabilities for an intermediate projective measurement:
/// Pr(k | psi, phi) = |<phi|P_k|psi>|^2 / sum_j |<phi|P_j|psi>|^2.
inline std::vector<double> abl(const PrePostSelection& pp, const SpectralDecomposition& spec,
                               double tol = kDefaultTol) {
  if (pp.pre.dims != pp.post.dims || spec.dim() != pp.pre.dim())
    throw std::invalid_argument("abl: dimension mismatch");
  std::vector<double> w;
  double total = 0.0;
  for (int k = 0; k < spec.count(); ++k) {
    cplx a = (pp.post.amps.adjoint() * spec.projectors[k] * pp.pre.amps)(0);
    w.push_back(std::norm(a));
    total += w.back();
  }
  if (total <= tol * tol)
    throw singular_error("abl: post-selection unreachable through every outcome");
  for (auto& x : w) x /= total;
  return w;
}

/// Weak value <phi|O|psi> / <phi|psi>. Returns nullopt (a tagged singular
/// result) when the pre- and post-selection are orthogonal within tol.
inline std::optional<cplx> weak_value(const PrePostSelection& pp, const OperatorMatrix& omega,
                                      double tol = kDefaultTol) {
  if (pp.pre.dims != pp.post.dims || omega.dim() != pp.pre.dim())
    throw std::invalid_argument("weak_value: dimension mismatch");
  cplx den = inner(pp.post, pp.pre);
  if (std::abs(den) <= tol) return std::nullopt;
  cplx num = (pp.post.amps.adjoint() * omega.mat * pp.pre.amps)(0);
  return num / den;
}

/// Modular value <phi|e^{iK O}|psi> / <phi|psi>, with the exponential taken
/// exactly through the spectral decomposition of the Hermitian O.
inline std::optional<cplx> modular_value(const PrePostSelection& pp, const OperatorMatrix& obs,
                                         double K, double tol = kDefaultTol,
                                         double merge_tol = kDefaultMergeTol) {
  if (pp.pre.dims != pp.post.dims || obs.dim() != pp.pre.dim())
    throw std::invalid_argument("modular_value: dimension mismatch");
  cplx den = inner(pp.post, pp.pre);
  if (std::abs(den) <= tol) return std::nullopt;
  Matrix u = exp_i_hermitian(obs, K, merge_tol);
  cplx num = (pp.post.amps.adjoint() * u * pp.pre.amps)(0);
  return num / den;
}

}  // namespace erasim
