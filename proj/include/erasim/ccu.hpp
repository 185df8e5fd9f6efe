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

namespace erasim {

// ---------------------------------------------------------------------------
// Controlled-Controlled-U from a qutrit ancilla with deterministic erasure,
// under the restriction that the system qubits never interact directly.
// Subsystem order: A, B (controls), M (target), N (qutrit ancilla).
// ---------------------------------------------------------------------------

enum class CCUVariant { reversal_only, paper_literal };
enum class MediationRule { ancilla_mediated_only, system_target_allowed };

struct CCUGate {
  std::string name;
  std::vector<int> support;  ///< subsystem indices the gate acts on
  OperatorMatrix op;         ///< operator on those subsystems, in support order
};

struct CCUPlan {
  double g = 0.0;
  Matrix meter_generator;  ///< P^M, default sigma_x
  CCUVariant variant = CCUVariant::reversal_only;
  std::vector<CCUGate> gates;
};

namespace detail {

inline Matrix qutrit_increment() {
  Matrix s = Matrix::Zero(3, 3);
  s(1, 0) = s(2, 1) = s(0, 2) = 1.0;  // |2> wraps to |0>; two qubit controls never get there
  return s;
}

inline Matrix controlled_on_qubit(const Matrix& u) {
  long d = u.rows();
  Matrix out = Matrix::Zero(2 * d, 2 * d);
  out.topLeftCorner(d, d) = Matrix::Identity(d, d);
  out.bottomRightCorner(d, d) = u;
  return out;
}

}  // namespace detail

inline CCUPlan build_ccu_plan(double g, CCUVariant variant,
                              const Matrix& meter_generator = sigma_x()) {
  if (!is_hermitian(meter_generator))
    throw std::invalid_argument("ccu: meter generator must be Hermitian");
  CCUPlan plan;
  plan.g = g;
  plan.meter_generator = meter_generator;
  plan.variant = variant;

  Matrix inc = detail::qutrit_increment();
  Matrix w = exp_i_hermitian(OperatorMatrix{{2}, meter_generator}, g);

  OperatorMatrix c_inc{{2, 3}, detail::controlled_on_qubit(inc)};
  OperatorMatrix c_inc_dag{{2, 3}, detail::controlled_on_qubit(Matrix(inc.adjoint()))};
  // [|0><0| + |1><1|] (x) 1 + |2><2| (x) e^{i g P^M}
  Matrix fin = Matrix::Zero(6, 6);
  fin.block(0, 0, 2, 2) = Matrix::Identity(2, 2);
  fin.block(2, 2, 2, 2) = Matrix::Identity(2, 2);
  fin.block(4, 4, 2, 2) = w;
  OperatorMatrix level2_w{{3, 2}, std::move(fin)};

  plan.gates.push_back({"controlled-increment A", {0, 3}, c_inc});
  plan.gates.push_back({"controlled-increment B", {1, 3}, c_inc});
  plan.gates.push_back({"level-2 controlled W", {3, 2}, level2_w});
  if (variant == CCUVariant::paper_literal) {
    OperatorMatrix cw_dag{{2, 2}, detail::controlled_on_qubit(Matrix(w.adjoint()))};
    plan.gates.push_back({"controlled W-dagger A", {0, 2}, cw_dag});
    plan.gates.push_back({"controlled W-dagger B", {1, 2}, cw_dag});
  }
  plan.gates.push_back({"reverse controlled-increment B", {1, 3}, c_inc_dag});
  plan.gates.push_back({"reverse controlled-increment A", {0, 3}, c_inc_dag});
  return plan;
}

struct CCUResult {
  OperatorMatrix unitary;        ///< induced operator on [A, B, M]
  double ancilla_leakage = 0.0;  ///< max residual outside |0>^N over basis inputs
  double deviation = 0.0;        ///< max |entry| difference vs CC-e^{i g P^M}
  CCUPlan plan;
};

/// Target gate: identity except e^{i g P^M} on the |11> control block.
inline OperatorMatrix cc_target(double g, const Matrix& meter_generator = sigma_x()) {
  Matrix w = exp_i_hermitian(OperatorMatrix{{2}, meter_generator}, g);
  Matrix out = Matrix::Identity(8, 8);
  out.block(6, 6, 2, 2) = w;
  return OperatorMatrix{{2, 2, 2}, std::move(out)};
}

/// Runs the gate sequence on [2,2,2,3] with the ancilla starting at |0>,
/// verifies the ancilla disentangles back to |0> on every branch and returns
/// the induced unitary on the three qubits.
inline CCUResult build_ccu(double g, CCUVariant variant,
                           const Matrix& meter_generator = sigma_x()) {
  CCUResult res;
  res.plan = build_ccu_plan(g, variant, meter_generator);
  Dims dims{2, 2, 2, 3};

  Matrix u = Matrix::Identity(24, 24);
  for (const auto& gate : res.plan.gates)
    u = (embed(gate.op, gate.support, dims).mat * u).eval();

  Matrix induced(8, 8);
  double leak = 0.0;
  for (long col = 0; col < 8; ++col) {
    Vector in = Vector::Zero(24);
    in(col * 3 + 0) = 1.0;  // ancilla |0>
    Vector out = u * in;
    for (long row = 0; row < 8; ++row) {
      induced(row, col) = out(row * 3 + 0);
      leak = std::max({leak, std::abs(out(row * 3 + 1)), std::abs(out(row * 3 + 2))});
    }
  }
  res.unitary = OperatorMatrix{{2, 2, 2}, std::move(induced)};
  res.ancilla_leakage = leak;
  res.deviation =
      (res.unitary.mat - cc_target(g, meter_generator).mat).cwiseAbs().maxCoeff();
  return res;
}

/// Checks each gate's support against the declared interaction restriction:
/// ancilla_mediated_only allows {qubit, N} and {N, M} pairs only;
/// system_target_allowed additionally permits {system qubit, M}.
/// Direct system-system interactions are never allowed.
inline bool verify_interaction_constraint(const CCUPlan& plan, MediationRule rule) {
  for (const auto& gate : plan.gates) {
    bool touches_a = false, touches_b = false, touches_m = false, touches_n = false;
    for (int s : gate.support) {
      if (s == 0) touches_a = true;
      if (s == 1) touches_b = true;
      if (s == 2) touches_m = true;
      if (s == 3) touches_n = true;
    }
    if (touches_a && touches_b) return false;
    bool system_target = (touches_a || touches_b) && touches_m;
    if (system_target && !touches_n && rule == MediationRule::ancilla_mediated_only)
      return false;
    if (system_target && touches_n) return false;  // three-body interaction
  }
  return true;
}

}  // namespace erasim
