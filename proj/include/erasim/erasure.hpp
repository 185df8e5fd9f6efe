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

#include "erasim/measurement.hpp"
#include "erasim/meter.hpp"

namespace erasim {

// ---------------------------------------------------------------------------
// The erasure scheme: inducing the von Neumann coupling exp(-i g Omega (x) P)
// by a strong ancilla measurement followed by erasure of the record, and its
// extension to non-local product observables X (x) Y where Alice and Bob only
// act locally on an entangled ancilla pair.
// ---------------------------------------------------------------------------

/// Ancilla bookkeeping for a product observable with |x| distinct eigenvalues
/// on the X side.
struct AncillaConfig {
  int dim;                  ///< |x|
  PureState entangled_init; ///< |+_x> = (1/sqrt|x|) sum_m |m>|m> on [n, n]
  Vector erase_target;      ///< |+M> = (1/sqrt|x|) sum_m |m>
  std::vector<double> qb_eigenvalues;  ///< Q^{B_N}|m> = x_{-m mod |x|} |m>
};

inline AncillaConfig make_ancilla_config(const ProductObservable& p) {
  int n = p.x_count();
  AncillaConfig cfg;
  cfg.dim = n;
  Vector ent = Vector::Zero(static_cast<long>(n) * n);
  for (int m = 0; m < n; ++m) ent(static_cast<long>(m) * n + m) = 1.0 / std::sqrt(double(n));
  cfg.entangled_init = PureState{{n, n}, std::move(ent)};
  cfg.erase_target = Vector::Constant(n, 1.0 / std::sqrt(double(n)));
  for (int m = 0; m < n; ++m)
    cfg.qb_eigenvalues.push_back(p.spec_x.eigenvalues[((-m) % n + n) % n]);
  return cfg;
}

namespace detail {

// cyclic shift S|m> = |m+1 mod n>
inline Matrix cyclic_shift(int n) {
  Matrix s = Matrix::Zero(n, n);
  for (int m = 0; m < n; ++m) s((m + 1) % n, m) = 1.0;
  return s;
}

// U_s = sum_i X_i (x) S^i on (X-side, ancilla): copies the distinct-eigenvalue
// label of X into the ancilla, modularly.
inline OperatorMatrix strong_copy_interaction(const SpectralDecomposition& spec_x, int n) {
  long dx = spec_x.dim();
  Matrix u = Matrix::Zero(dx * n, dx * n);
  Matrix s = cyclic_shift(n);
  Matrix spow = Matrix::Identity(n, n);
  for (int i = 0; i < spec_x.count(); ++i) {
    u += kron(spec_x.projectors[i], spow);
    spow = (s * spow).eval();
  }
  return OperatorMatrix{{static_cast<int>(dx), n}, std::move(u)};
}

// Fourier (erasure) basis vector |f_j> = (1/sqrt n) sum_m w^{jm} |m>;
// j = 0 is |+M>.
inline Vector fourier_vector(int n, int j) {
  Vector v(n);
  for (int m = 0; m < n; ++m) {
    double ang = 2.0 * M_PI * j * m / n;
    v(m) = cplx(std::cos(ang), std::sin(ang)) / std::sqrt(double(n));
  }
  return v;
}

}  // namespace detail

/// One enumerated branch of the protocol: Alice's readout mu and Bob's erasure
/// outcome (erase_outcome = 0 means the |+M> success projection). The joint
/// state is the normalized system (x) meter state with the ancilla removed;
/// `effective_op` is the Omega_mu whose coupling the branch realizes, and
/// failure branches carry the extra known unitary on the X side.
struct ProtocolOutcome {
  int mu = 0;
  bool erased = false;
  int erase_outcome = 0;
  double probability = 0.0;
  JointState joint;
  OperatorMatrix effective_op;
  std::optional<OperatorMatrix> failure_unitary;
  std::string correction;  ///< empty when no correction was applied
  std::optional<double> corrected_fidelity;
  std::string warning;
};

/// Proposition 1 at a single site: strong measurement of `spec` with an
/// ancilla sized to the spectrum, meter coupling to the ancilla pointer, then
/// erasure. Returns the normalized success branch and its probability
/// (1/|spec| for the uniform erasure projection).
inline std::pair<JointState, double> prop1_measure(const PureState& s,
                                                   const SpectralDecomposition& spec,
                                                   const Meter& m, double g) {
  if (spec.dim() != s.dim()) throw std::invalid_argument("prop1: dimension mismatch");
  int n = spec.count();
  int anc = static_cast<int>(s.dims.size());  // ancilla appended last

  PureState anc0 = PureState::basis({n}, {0});
  JointState j = JointState::product(tensor(s, anc0), m);

  // strong measurement: copy the eigenvalue label onto the ancilla
  Matrix copy = Matrix::Zero(s.dim() * n, s.dim() * n);
  Matrix sh = detail::cyclic_shift(n);
  Matrix spow = Matrix::Identity(n, n);
  for (int k = 0; k < n; ++k) {
    copy += kron(spec.projectors[k], spow);
    spow = (sh * spow).eval();
  }
  j.apply_full(copy);

  // couple the meter to Q^N (the ancilla pointer holding the eigenvalues)
  Matrix qn = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) qn(k, k) = spec.eigenvalues[k];
  auto qn_spec = spectral_decompose(OperatorMatrix{{n}, qn});
  j.couple(qn_spec, {anc}, g);

  // erase
  Vector plus_m = Vector::Constant(n, 1.0 / std::sqrt(double(n)));
  JointState branch = j.contracted(anc, plus_m);
  double prob = branch.norm2();
  branch.normalize();
  return {std::move(branch), prob};
}

/// The four-step non-local protocol for a product observable, enumerating all
/// |x| readouts mu and all |x| erasure outcomes. Branch (mu, erased) realizes
/// exp(-i g Omega_mu (x) P); failure outcomes carry the known diagonal
/// unitary D_j = sum_i w^{ji} X_i.
inline std::vector<ProtocolOutcome> nonlocal_product_measure(const ProductObservable& p,
                                                             const PureState& s, const Meter& m,
                                                             double g) {
  Dims sys = p.system_dims();
  if (s.dims != sys) throw std::invalid_argument("nonlocal protocol: state dims mismatch");
  AncillaConfig cfg = make_ancilla_config(p);
  int n = cfg.dim;
  int a_n = 2, b_n = 3;  // ancilla halves appended after [A, B]

  JointState j = JointState::product(tensor(s, cfg.entangled_init), m);

  // 1. Alice couples her side to A_N with U_s
  j.apply_operator(detail::strong_copy_interaction(p.spec_x, n), {p.x_side(), a_n});

  // 3's generator: Y (x) Q^{B_N} (step order: the readout of A_N commutes
  // with Bob's coupling, so branches are enumerated after coupling)
  Matrix qb = Matrix::Zero(n, n);
  for (int mm = 0; mm < n; ++mm) qb(mm, mm) = cfg.qb_eigenvalues[mm];
  Matrix gen = kron(p.spec_y.reassemble(), qb);
  auto gen_spec =
      spectral_decompose(OperatorMatrix{{static_cast<int>(p.spec_y.dim()), n}, gen});
  j.couple(gen_spec, {p.y_side(), b_n}, g);

  std::vector<ProtocolOutcome> outcomes;
  for (int mu = 0; mu < n; ++mu) {
    Vector mu_bra = Vector::Zero(n);
    mu_bra(mu) = 1.0;
    JointState j_mu = j.contracted(a_n, mu_bra);  // [A, B, B_N]
    for (int jj = 0; jj < n; ++jj) {
      ProtocolOutcome out;
      out.mu = mu;
      out.erase_outcome = jj;
      out.erased = (jj == 0);
      JointState branch = j_mu.contracted(2, detail::fourier_vector(n, jj));
      out.probability = branch.norm2();
      branch.normalize();
      out.joint = std::move(branch);
      out.effective_op = omega_mu(p, mu);
      if (jj != 0) {
        Matrix dj = Matrix::Zero(p.spec_x.dim(), p.spec_x.dim());
        for (int i = 0; i < n; ++i) {
          double ang = 2.0 * M_PI * jj * i / n;
          dj += cplx(std::cos(ang), std::sin(ang)) * p.spec_x.projectors[i];
        }
        out.failure_unitary = OperatorMatrix{p.spec_x.dims, std::move(dj)};
      }
      outcomes.push_back(std::move(out));
    }
  }
  return outcomes;
}

/// The instantaneous Pi_{1,1} circuit: entangled two-qubit ancilla, CNOT on
/// Alice's side, controlled-controlled-shift on Bob's side, post-selection of
/// |0>|+> on the ancilla. Built gate by gate (independently of the generic
/// protocol engine).
inline std::vector<ProtocolOutcome> pi11_circuit(const PureState& s, const Meter& m, double g) {
  if (s.dims != Dims{2, 2}) throw std::invalid_argument("pi11_circuit wants two qubits");
  Vector bell = Vector::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  PureState plus_x{{2, 2}, std::move(bell)};
  JointState j = JointState::product(tensor(s, plus_x), m);

  Matrix cnot = Matrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(3, 2) = cnot(2, 3) = 1.0;  // control = first slot
  j.apply_operator(OperatorMatrix{{2, 2}, cnot}, {0, 2});

  // controlled-controlled-W with W = translate(g): generator |1><1| (x) |1><1|
  Matrix cc = Matrix::Zero(4, 4);
  cc(3, 3) = 1.0;
  auto cc_spec = spectral_decompose(OperatorMatrix{{2, 2}, cc});
  j.couple(cc_spec, {1, 3}, g);

  auto pobs = make_product_observable(OperatorMatrix{{2}, basis_projector(2, 1)},
                                      OperatorMatrix{{2}, basis_projector(2, 1)});

  std::vector<ProtocolOutcome> outcomes;
  for (int mu = 0; mu < 2; ++mu) {
    Vector mu_bra = Vector::Zero(2);
    mu_bra(mu) = 1.0;
    JointState j_mu = j.contracted(2, mu_bra);
    for (int jj = 0; jj < 2; ++jj) {
      ProtocolOutcome out;
      out.mu = mu;
      out.erase_outcome = jj;
      out.erased = (jj == 0);
      JointState branch = j_mu.contracted(2, detail::fourier_vector(2, jj));
      out.probability = branch.norm2();
      branch.normalize();
      out.joint = std::move(branch);
      out.effective_op = omega_mu(pobs, mu);
      if (jj == 1)
        out.failure_unitary = OperatorMatrix{{2}, Matrix(sigma_z())};
      outcomes.push_back(std::move(out));
    }
  }
  return outcomes;
}

/// Product of Pauli z operators with the optional local correction chain:
/// failure branches get the phase gate exp(i (pi/2) sigma_z^B Q^M / g) (exact
/// on a strong discrete pointer), mu = 1 branches get the pointer reflection
/// that maps the Omega_1 = -sigma_z sigma_z coupling onto the target. With
/// both enabled every branch reproduces exp(-i g sigma_z sigma_z (x) P) up to
/// a global phase, exactly in the strong limit.
inline std::vector<ProtocolOutcome> pauli_product_measure(const PureState& s, const Meter& m,
                                                          double g, bool correct) {
  auto p = make_product_observable(OperatorMatrix{{2}, Matrix(sigma_z())},
                                   OperatorMatrix{{2}, Matrix(sigma_z())});
  auto outcomes = nonlocal_product_measure(p, s, m, g);
  if (!correct) return outcomes;
  if (g == 0.0) throw std::domain_error("pauli correction is undefined at g = 0");

  JointState target = couple(s, spectral_decompose(omega_mu(p, 0)), m, g);
  auto sz_spec = spectral_decompose(OperatorMatrix{{2}, Matrix(sigma_z())});
  MeterRegime regime = classify_regime(m, 2.0 * std::abs(g));

  for (auto& out : outcomes) {
    std::string applied;
    if (!out.erased) {
      out.joint.apply_position_phase(sz_spec, {1}, M_PI / (2.0 * g));
      applied = "exp(i(pi/2) sz_B Q/g)";
    }
    if (out.mu == 1) {
      out.joint.reflect_meter();
      applied += applied.empty() ? "meter reflection" : " + meter reflection";
    }
    if (!applied.empty()) {
      out.correction = applied;
      out.effective_op = omega_mu(p, 0);
      out.failure_unitary.reset();
    }
    out.corrected_fidelity = fidelity(out.joint, target);
    if (regime != MeterRegime::strong && !out.erased)
      out.warning = "correction assumes a strong meter; regime is " +
                    std::string(to_string(regime));
  }
  return outcomes;
}

/// Both sides of the post-selected equivalence {Y Q^{B_N}}_w = {XY}_w: the
/// left side evaluates the weak value of Y (x) Q^{B_N} on the U_s-evolved
/// extended pre/post pair, the right side the plain product weak value.
inline std::pair<cplx, cplx> postselected_equivalence(const PrePostSelection& pp,
                                                      const ProductObservable& p) {
  Dims sys = p.system_dims();
  if (pp.pre.dims != sys || pp.post.dims != sys)
    throw std::invalid_argument("postselected_equivalence: dims mismatch");
  AncillaConfig cfg = make_ancilla_config(p);
  int n = cfg.dim;

  PureState pre_ext = tensor(pp.pre, cfg.entangled_init);

  Vector anc_post = kron(Matrix(Vector::Unit(n, 0)), Matrix(cfg.erase_target)).col(0);
  PureState post_base = tensor(pp.post, PureState{{n, n}, std::move(anc_post)});
  PureState post_ext =
      apply(detail::strong_copy_interaction(p.spec_x, n), post_base, {p.x_side(), 2});

  Matrix qb = Matrix::Zero(n, n);
  for (int mm = 0; mm < n; ++mm) qb(mm, mm) = cfg.qb_eigenvalues[mm];
  OperatorMatrix yq{{static_cast<int>(p.spec_y.dim()), n},
                    kron(p.spec_y.reassemble(), qb)};
  Dims ext_dims = sys;
  ext_dims.push_back(n);
  ext_dims.push_back(n);
  OperatorMatrix yq_full = embed(yq, {p.y_side(), 3}, ext_dims);

  auto lhs = weak_value({pre_ext, post_ext}, yq_full);
  auto rhs = weak_value(pp, omega_mu(p, 0));
  if (!lhs || !rhs) throw singular_error("postselected_equivalence: orthogonal pre/post pair");
  return {*lhs, *rhs};
}

}  // namespace erasim
