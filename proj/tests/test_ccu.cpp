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

#include "doctest.h"

#include "erasim/ccu.hpp"
#include "erasim/random.hpp"
#include "test_helpers.hpp"

using namespace erasim;
using namespace erasim::testing;

TEST_CASE("reversal-only construction: identity at g = 0, CC-W in general") {
  auto id = build_ccu(0.0, CCUVariant::reversal_only);
  CHECK(mnear(id.unitary.mat, identity_matrix(8), 1e-12));
  CHECK(id.ancilla_leakage <= 1e-12);

  // g = pi/2 with P = sigma_x is a Toffoli up to the phase on the target block
  auto tof = build_ccu(M_PI / 2.0, CCUVariant::reversal_only);
  Matrix want = identity_matrix(8);
  want.block(6, 6, 2, 2) = cplx(0, 1) * sigma_x();
  CHECK(mnear(tof.unitary.mat, want, 1e-12));
  CHECK(tof.deviation <= 1e-12);
}

TEST_CASE("reversal-only construction matches the direct CC-W on random states") {
  Rng rng(139);
  for (double g : {0.3, M_PI / 2.0, 2.1}) {
    auto res = build_ccu(g, CCUVariant::reversal_only);
    CHECK(res.deviation <= 1e-12);
    CHECK(is_unitary(res.unitary.mat));
    auto target = cc_target(g);
    for (int t = 0; t < 10; ++t) {
      PureState s = random_state({2, 2, 2}, rng);
      auto via_gates = apply(res.unitary, s);
      auto direct = apply(target, s);
      CHECK(fidelity(via_gates, direct) >= 1.0 - 1e-12);
    }
  }
}

TEST_CASE("the ancilla disentangles back to |0> on every branch") {
  Rng rng(149);
  auto plan = build_ccu_plan(1.234, CCUVariant::reversal_only);
  Dims dims{2, 2, 2, 3};
  Matrix u = identity_matrix(24);
  for (const auto& gate : plan.gates) u = (embed(gate.op, gate.support, dims).mat * u).eval();

  for (int t = 0; t < 20; ++t) {
    PureState s = random_state({2, 2, 2}, rng);
    PureState full = tensor(s, PureState::basis({3}, {0}));
    PureState out{dims, u * full.amps};
    auto anc = partial_trace(out, {3});
    CHECK(anc.rho(0, 0).real() >= 1.0 - 1e-9);  // fidelity with |0><0|
  }
}

TEST_CASE("intermediate state after the three forward interactions") {
  // amplitude pattern: a00|00>|0>|0> + (a01|01> + a10|10>)|1>|0> + a11|11>|2> e^{igP}|0>
  Rng rng(151);
  double g = 0.77;
  auto plan = build_ccu_plan(g, CCUVariant::reversal_only);
  Dims dims{2, 2, 2, 3};
  Matrix u3 = identity_matrix(24);
  for (int i = 0; i < 3; ++i) u3 = (embed(plan.gates[i].op, plan.gates[i].support, dims).mat * u3).eval();

  PureState s = random_state({2, 2}, rng);
  PureState full = tensor(tensor(s, PureState::basis({2}, {0})), PureState::basis({3}, {0}));
  Vector got = u3 * full.amps;

  Vector w = exp_i_hermitian(OperatorMatrix{{2}, sigma_x()}, g).col(0);
  Vector want = Vector::Zero(24);
  auto idx = [](int a, int b, int mm, int nn) { return ((a * 2 + b) * 2 + mm) * 3 + nn; };
  want(idx(0, 0, 0, 0)) = s.amps(0);
  want(idx(0, 1, 0, 1)) = s.amps(1);
  want(idx(1, 0, 0, 1)) = s.amps(2);
  want(idx(1, 1, 0, 2)) = s.amps(3) * w(0);
  want(idx(1, 1, 1, 2)) = s.amps(3) * w(1);
  CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("paper-literal variant deviates from CC-W by the reported amount") {
  for (double g : {0.3, M_PI / 2.0, 2.1}) {
    auto res = build_ccu(g, CCUVariant::paper_literal);
    CHECK(res.ancilla_leakage <= 1e-12);  // the extra gates never touch N
    CHECK(res.deviation > 1e-6);          // flagged: not the target gate
    CHECK(is_unitary(res.unitary.mat));

    // the extra controlled-W^dag gates land W^dag on the 01, 10 and 11 blocks
    Matrix w = exp_i_hermitian(OperatorMatrix{{2}, sigma_x()}, g);
    Matrix want = identity_matrix(8);
    for (int block : {1, 2, 3}) want.block(2 * block, 2 * block, 2, 2) = w.adjoint();
    CHECK(mnear(res.unitary.mat, want, 1e-12));
  }
}

TEST_CASE("CC structure: conjugation by Z on either control is absorbed") {
  auto res = build_ccu(1.1, CCUVariant::reversal_only);
  for (int control : {0, 1}) {
    auto z = embed(OperatorMatrix{{2}, sigma_z()}, {control}, {2, 2, 2});
    Matrix conj = z.mat * res.unitary.mat * z.mat;
    CHECK(mnear(conj, res.unitary.mat, 1e-12));
  }
}

TEST_CASE("interaction constraints: mediation rules separate the two variants") {
  auto reversal = build_ccu_plan(0.5, CCUVariant::reversal_only);
  CHECK(verify_interaction_constraint(reversal, MediationRule::ancilla_mediated_only));
  CHECK(verify_interaction_constraint(reversal, MediationRule::system_target_allowed));

  auto literal = build_ccu_plan(0.5, CCUVariant::paper_literal);
  CHECK(!verify_interaction_constraint(literal, MediationRule::ancilla_mediated_only));
  CHECK(verify_interaction_constraint(literal, MediationRule::system_target_allowed));

  // a direct two-qubit gate between the system qubits is never allowed
  CCUPlan bad = reversal;
  Matrix cnot = Matrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(3, 2) = cnot(2, 3) = 1.0;
  bad.gates.push_back({"direct CNOT", {0, 1}, OperatorMatrix{{2, 2}, cnot}});
  CHECK(!verify_interaction_constraint(bad, MediationRule::ancilla_mediated_only));
  CHECK(!verify_interaction_constraint(bad, MediationRule::system_target_allowed));
}
