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

#include "erasim/observable.hpp"
#include "erasim/random.hpp"
#include "test_helpers.hpp"

using namespace erasim;
using namespace erasim::testing;

static bool spectral_invariants_hold(const SpectralDecomposition& spec, const Matrix& src,
                                     double tol = 1e-9) {
  long d = spec.dim();
  Matrix sum = Matrix::Zero(d, d);
  for (int k = 0; k < spec.count(); ++k) {
    sum += spec.projectors[k];
    for (int l = 0; l < spec.count(); ++l) {
      Matrix prod = spec.projectors[k] * spec.projectors[l];
      Matrix want = (k == l) ? spec.projectors[k] : Matrix::Zero(d, d).eval();
      if ((prod - want).cwiseAbs().maxCoeff() > tol) return false;
    }
  }
  if ((sum - identity_matrix(d)).cwiseAbs().maxCoeff() > tol) return false;
  for (std::size_t k = 1; k < spec.eigenvalues.size(); ++k)
    if (spec.eigenvalues[k] <= spec.eigenvalues[k - 1]) return false;
  return (spec.reassemble() - src).cwiseAbs().maxCoeff() <= tol;
}

TEST_CASE("spectral decomposition of sigma_z, a rank-1 projector and sigma_z x sigma_z") {
  auto sz = spectral_decompose(OperatorMatrix{{2}, sigma_z()});
  REQUIRE(sz.count() == 2);
  CHECK(near(sz.eigenvalues[0], -1.0));
  CHECK(near(sz.eigenvalues[1], 1.0));
  CHECK(mnear(sz.projectors[0], basis_projector(2, 1)));
  CHECK(mnear(sz.projectors[1], basis_projector(2, 0)));

  Matrix pi11 = kron(basis_projector(2, 1), basis_projector(2, 1));
  auto sp = spectral_decompose(OperatorMatrix{{2, 2}, pi11});
  REQUIRE(sp.count() == 2);
  CHECK(near(sp.eigenvalues[0], 0.0));
  CHECK(near(sp.eigenvalues[1], 1.0));
  CHECK(near(sp.projectors[0].trace().real(), 3.0));  // rank-3 degenerate block
  CHECK(mnear(sp.projectors[1], pi11));

  auto zz = spectral_decompose(OperatorMatrix{{2, 2}, kron(sigma_z(), sigma_z())});
  REQUIRE(zz.count() == 2);
  Matrix plus = Matrix::Zero(4, 4);
  plus(0, 0) = plus(3, 3) = 1.0;
  Matrix minus = Matrix::Zero(4, 4);
  minus(1, 1) = minus(2, 2) = 1.0;
  CHECK(mnear(zz.projectors[1], plus));
  CHECK(mnear(zz.projectors[0], minus));
  CHECK(spectral_invariants_hold(zz, kron(sigma_z(), sigma_z())));

  CHECK_THROWS_AS(spectral_decompose(OperatorMatrix{{2}, Matrix(hadamard() * sigma_z())}),
                  std::invalid_argument);
}

TEST_CASE("property: reassembly reproduces random Hermitian inputs") {
  Rng rng(41);
  for (long d : {2L, 3L, 5L, 9L}) {
    Matrix h = random_hermitian(d, rng);
    auto spec = spectral_decompose(OperatorMatrix{{static_cast<int>(d)}, h});
    CHECK(spectral_invariants_hold(spec, h));
  }
}

TEST_CASE("degenerate eigenvalues merge into one projector") {
  Matrix h = Matrix::Zero(3, 3);
  h(0, 0) = 5.0;
  h(1, 1) = 5.0;
  h(2, 2) = 7.0;
  auto spec = spectral_decompose(OperatorMatrix{{3}, h});
  REQUIRE(spec.count() == 2);
  CHECK(near(spec.projectors[0].trace().real(), 2.0));
}

TEST_CASE("omega_mu: identity permutation, Pauli sign flip, projector relabeling") {
  auto zz = make_product_observable(OperatorMatrix{{2}, sigma_z()},
                                    OperatorMatrix{{2}, sigma_z()});
  CHECK(mnear(omega_mu(zz, 0).mat, kron(sigma_z(), sigma_z())));
  CHECK(mnear(omega_mu(zz, 1).mat, -kron(sigma_z(), sigma_z()), 1e-12));
  CHECK_THROWS_AS(omega_mu(zz, 2), std::out_of_range);

  auto pp = make_product_observable(OperatorMatrix{{2}, basis_projector(2, 1)},
                                    OperatorMatrix{{2}, basis_projector(2, 1)});
  CHECK(mnear(omega_mu(pp, 0).mat, kron(basis_projector(2, 1), basis_projector(2, 1))));
  // a wrong readout turns Pi_{1,1} into Pi_{0,1}: same spectrum, shifted eigenspace
  CHECK(mnear(omega_mu(pp, 1).mat, kron(basis_projector(2, 0), basis_projector(2, 1))));
}

TEST_CASE("k_mu follows the ascending-label convention") {
  auto zz = make_product_observable(OperatorMatrix{{2}, sigma_z()},
                                    OperatorMatrix{{2}, sigma_z()});
  // labels: k=0 <-> -1 on |1>, k=1 <-> +1 on |0>, so K_0 = 0*X_0 + 1*X_1
  CHECK(mnear(k_mu(zz, 0).mat, basis_projector(2, 0)));
  CHECK(mnear(k_mu(zz, 1).mat, basis_projector(2, 1)));

  auto pp = make_product_observable(OperatorMatrix{{2}, basis_projector(2, 1)},
                                    OperatorMatrix{{2}, basis_projector(2, 1)});
  CHECK(mnear(k_mu(pp, 0).mat, basis_projector(2, 1)));  // K_0 = |1><1|
  CHECK(mnear(k_mu(pp, 1).mat, basis_projector(2, 0)));  // K_1 = |0><0|

  // |x| = 1: X proportional to the identity gives the zero operator
  auto idp = make_product_observable(OperatorMatrix{{2}, identity_matrix(2)},
                                     OperatorMatrix{{2}, sigma_z()});
  CHECK(near(k_mu(idp, 0).mat.cwiseAbs().maxCoeff(), 0.0));
}

TEST_CASE("role swap when |x| > |y| is recorded and Omega_0 is unchanged") {
  Matrix jz = Matrix::Zero(3, 3);
  jz(0, 0) = -1.0;
  jz(2, 2) = 1.0;
  auto p = make_product_observable(OperatorMatrix{{3}, jz}, OperatorMatrix{{2}, sigma_z()});
  CHECK(p.swapped);
  CHECK(p.x_count() == 2);
  CHECK(p.x_side() == 1);
  CHECK(mnear(omega_mu(p, 0).mat, kron(jz, sigma_z())));
  CHECK(p.system_dims() == Dims{3, 2});
}

static std::vector<double> sorted_eigs(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

TEST_CASE("property: Omega_mu keeps the spectrum of X x Y as a multiset") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    int da = 2 + static_cast<int>(rng.integer() % 2);
    int db = 2 + static_cast<int>(rng.integer() % 2);
    auto p = make_product_observable(OperatorMatrix{{da}, random_hermitian(da, rng)},
                                     OperatorMatrix{{db}, random_hermitian(db, rng)});
    auto base = sorted_eigs(omega_mu(p, 0).mat);
    for (int mu = 1; mu < p.x_count(); ++mu) {
      auto shifted = sorted_eigs(omega_mu(p, mu).mat);
      REQUIRE(shifted.size() == base.size());
      for (std::size_t i = 0; i < base.size(); ++i) CHECK(near(shifted[i], base[i], 1e-7));
    }
  }
}

TEST_CASE("property: for Pauli-like X the single shifted branch is an overall sign") {
  auto zx = make_product_observable(OperatorMatrix{{2}, sigma_x()},
                                    OperatorMatrix{{2}, sigma_z()});
  CHECK(mnear(omega_mu(zx, 1).mat, -omega_mu(zx, 0).mat, 1e-12));
}
