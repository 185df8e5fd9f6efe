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

#include "erasim/meter.hpp"
#include "erasim/random.hpp"
#include "test_helpers.hpp"

using namespace erasim;
using namespace erasim::testing;

namespace {

// quadrature oracle: sampled wavepacket psi(q) ~ exp(-(q-c)^2 / (4 D^2))
std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> q(n);
  for (int i = 0; i < n; ++i) q[i] = lo + (hi - lo) * i / (n - 1);
  return q;
}

std::vector<double> packet_samples(const std::vector<double>& q, double width, double center) {
  std::vector<double> v(q.size());
  double norm = std::pow(2.0 * M_PI * width * width, -0.25);
  for (std::size_t i = 0; i < q.size(); ++i)
    v[i] = norm * std::exp(-(q[i] - center) * (q[i] - center) / (4.0 * width * width));
  return v;
}

double quad_overlap(const std::vector<double>& q, const std::vector<double>& a,
                    const std::vector<double>& b) {
  double dq = q[1] - q[0];
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) s += a[i] * b[i];
  return s * dq;
}

}  // namespace

TEST_CASE("gaussian overlap kernel matches the quadrature oracle") {
  auto m0 = GaussianMeter::packet(1.0, 0.0);
  CHECK(cnear(overlap(m0, m0), 1.0, 1e-12));

  // frozen from the Gaussian-integral oracle: exp(-a^2 / (8 D^2))
  auto m1 = GaussianMeter::packet(1.0, 1.0);
  CHECK(cnear(overlap(m0, m1), std::exp(-0.125), 1e-12));

  auto q = grid(-50.0, 50.0, 100001);
  CHECK(near(quad_overlap(q, packet_samples(q, 1.0, 0.0), packet_samples(q, 1.0, 1.0)),
             std::exp(-0.125), 1e-10));

  auto w0 = GaussianMeter::packet(0.8, 0.0);
  auto w1 = GaussianMeter::packet(0.8, 2.5);
  double expect = std::exp(-2.5 * 2.5 / (8.0 * 0.64));
  CHECK(cnear(overlap(w0, w1), expect, 1e-12));
  CHECK(near(quad_overlap(q, packet_samples(q, 0.8, 0.0), packet_samples(q, 0.8, 2.5)), expect,
             1e-10));

  CHECK_THROWS_AS(overlap(m0, w0), std::invalid_argument);
  CHECK_THROWS_AS(overlap(Meter{m0}, Meter{DiscreteMeter::at({0.0, 1.0}, 0.0)}),
                  std::invalid_argument);
}

TEST_CASE("translate shifts centers and relabels discrete positions") {
  auto m = GaussianMeter::packet(1.0, 0.0);
  auto same = translate(m, 0.0);
  CHECK(same.components[0].center == 0.0);

  auto shifted = translate(m, 0.7);
  CHECK(shifted.components[0].center == 0.7);
  CHECK(cnear(overlap(shifted, GaussianMeter::packet(1.0, 0.7)), 1.0, 1e-12));

  double g = 0.4;
  auto d = DiscreteMeter::at({-g, 0.0, g}, 0.0);
  auto dt = translate(d, g);
  CHECK(cnear(dt.amps(2), 1.0));
  CHECK_THROWS_AS(translate(dt, g), std::domain_error);

  auto cyc = DiscreteMeter::at({0.0, 1.0, 2.0}, 2.0, true);
  auto wrapped = translate(cyc, 1.0);
  CHECK(cnear(wrapped.amps(0), 1.0));
}

TEST_CASE("discrete basis states are exactly orthogonal") {
  auto d0 = DiscreteMeter::at({0.0, 0.5}, 0.0);
  auto d1 = DiscreteMeter::at({0.0, 0.5}, 0.5);
  CHECK(overlap(d0, d1) == cplx(0.0, 0.0));
  CHECK(near(meter_norm(Meter{d0}), 1.0));
}

TEST_CASE("couple: g = 0 leaves the product state, eigenstates shift rigidly") {
  Rng rng(31);
  PureState s = random_state({2}, rng);
  auto spec = spectral_decompose(OperatorMatrix{{2}, sigma_z()});
  Meter m = GaussianMeter::packet(1.0, 0.0);

  auto j0 = couple(s, spec, m, 0.0);
  CHECK(near(fidelity(j0, JointState::product(s, m)), 1.0, 1e-12));
  CHECK(near(pointer_stats(j0).mean_q, 0.0, 1e-12));  // unmeasured pointer stays put

  // |1> has sigma_z eigenvalue -1: single packet at -g
  auto j = couple(PureState::basis({2}, {1}), spec, m, 0.5);
  auto st = pointer_stats(j);
  CHECK(near(st.mean_q, -0.5, 1e-12));
  CHECK(near(st.var_q, 1.0, 1e-12));

  // arbitrary initial center: the shift adds to it
  auto joff = couple(PureState::basis({2}, {1}), spec, GaussianMeter::packet(1.0, 0.7), 0.5);
  CHECK(near(pointer_stats(joff).mean_q, 0.2, 1e-12));
}

namespace {

// fine-grid oracle for the reduced-system purity after coupling a qubit
// (|0> + |1>)/sqrt(2) to sigma_z at strength g
double purity_grid_oracle(double g, double width) {
  auto q = grid(-30.0, 30.0, 60001);
  auto b0 = packet_samples(q, width, g);    // |0>: eigenvalue +1
  auto b1 = packet_samples(q, width, -g);   // |1>: eigenvalue -1
  double r00 = 0.5 * quad_overlap(q, b0, b0);
  double r11 = 0.5 * quad_overlap(q, b1, b1);
  double r01 = 0.5 * quad_overlap(q, b0, b1);
  return r00 * r00 + r11 * r11 + 2.0 * r01 * r01;
}

}  // namespace

TEST_CASE("couple entangles system and meter with the oracle purity") {
  auto spec = spectral_decompose(OperatorMatrix{{2}, sigma_z()});
  for (auto [g, width] : std::vector<std::pair<double, double>>{{0.5, 1.0}, {0.7, 1.0}, {1.0, 0.5}}) {
    // frozen from the grid oracle: purity = (1 + exp(-g^2 / D^2)) / 2
    double expect = 0.5 * (1.0 + std::exp(-g * g / (width * width)));
    CHECK(near(purity_grid_oracle(g, width), expect, 1e-9));

    auto j = couple(plus_state(), spec, GaussianMeter::packet(width, 0.0), g);
    Matrix rho = j.system_density().rho;
    double purity = (rho * rho).trace().real();
    CHECK(near(purity, expect, 1e-12));
  }
}

TEST_CASE("property: coupling preserves the norm") {
  Rng rng(37);
  for (int t = 0; t < 20; ++t) {
    // random observable on [2,2] with at most 3 distinct eigenvalues
    Matrix u = random_unitary(4, rng);
    Matrix d = Matrix::Zero(4, 4);
    for (int i = 0; i < 4; ++i) d(i, i) = static_cast<double>(rng.integer() % 3);
    Matrix h = u * d * u.adjoint();
    h = 0.5 * (h + h.adjoint()).eval();
    auto spec = spectral_decompose(OperatorMatrix{{2, 2}, h});
    PureState s = random_state({2, 2}, rng);
    double g = 2.0 * rng.uniform() - 0.5;
    auto j = couple(s, spec, GaussianMeter::packet(0.5 + rng.uniform(), 0.0), g);
    CHECK(near(j.norm2(), 1.0));
  }
}

TEST_CASE("property: sequential couplings compose additively") {
  Rng rng(41);
  auto spec = spectral_decompose(OperatorMatrix{{2}, sigma_x()});
  PureState s = random_state({2}, rng);
  Meter m = GaussianMeter::packet(1.0, 0.0);
  auto two_step = couple(couple(s, spec, m, 0.3), spec, {0}, 0.45);
  auto one_step = couple(s, spec, m, 0.75);
  CHECK(near(fidelity(two_step, one_step), 1.0));
  CHECK(cnear(inner(two_step, one_step), 1.0, 1e-9));  // equal including phase
}

TEST_CASE("strong limit: a pointer-sign readout projects the system") {
  PureState s = ket({0.6, 0.8}, {2});
  auto spec = spectral_decompose(OperatorMatrix{{2}, sigma_z()});
  auto j = couple(s, spec, GaussianMeter::packet(1.0, 0.0), 8.0);
  auto above = j.system_density_given_sign(0.0, true);
  double p_above = above.rho.trace().real();
  CHECK(near(p_above, 0.36, 1e-9));  // |<0|s>|^2, eigenvalue +1 side
  CHECK(near((above.rho / p_above)(0, 0).real(), 1.0, 1e-9));
  auto below = j.system_density_given_sign(0.0, false);
  double p_below = below.rho.trace().real();
  CHECK(near(p_below, 0.64, 1e-9));
  CHECK(near((below.rho / p_below)(1, 1).real(), 1.0, 1e-9));
}

TEST_CASE("weak limit: conditional pointer shift converges to the real weak value") {
  PureState pre = ket({0.8, 0.6}, {2});
  Vector post_raw(2);
  post_raw << cplx(0.9, 0.0), cplx(0.3, 0.2);
  PureState post{{2}, post_raw / post_raw.norm()};
  auto spec = spectral_decompose(OperatorMatrix{{2}, sigma_z()});

  cplx wv = (post.amps.adjoint() * sigma_z() * pre.amps)(0) / inner(post, pre);
  auto shift_error = [&](double g) {
    auto j = couple(pre, spec, GaussianMeter::packet(1.0, 0.0), g);
    auto st = pointer_stats(j, post);
    return std::abs(st.mean_q / g - wv.real());
  };
  double e2 = shift_error(1e-2);
  double e3 = shift_error(1e-3);
  CHECK(e3 * 10.0 <= e2);  // at least one order per decade (observed ~quadratic)
}

TEST_CASE("imaginary weak value moves the conjugate momentum, not the pointer") {
  // psi = |0>, phi = |+>, Omega = sigma_y: weak value exactly +i
  PureState pre = PureState::basis({2}, {0});
  PureState post = plus_state();
  auto spec = spectral_decompose(OperatorMatrix{{2}, sigma_y()});

  for (double width : {1.0, 2.0}) {
    auto run = [&](double g) {
      auto j = couple(pre, spec, GaussianMeter::packet(width, 0.0), g);
      return pointer_stats(j, post);
    };
    // frozen small-g series oracle: mean P / g -> Im{O}_w / (2 D^2)
    double slope = 1.0 / (2.0 * width * width);
    auto s3 = run(1e-3);
    REQUIRE(s3.mean_p.has_value());
    CHECK(near(*s3.mean_p / 1e-3, slope, 1e-5 * slope + 1e-9));
    CHECK(std::abs(s3.mean_q) <= 1e-12);  // Q shift is beyond first order

    auto s2 = run(1e-2);
    double e2 = std::abs(*s2.mean_p / 1e-2 - slope);
    double e3 = std::abs(*s3.mean_p / 1e-3 - slope);
    CHECK(e3 * 10.0 <= e2 + 1e-15);
  }
}

TEST_CASE("discrete meters couple exactly and reject off-grid shifts") {
  double g = 0.3;
  auto spec = spectral_decompose(OperatorMatrix{{2}, sigma_z()});
  PureState s = ket({0.6, 0.8}, {2});
  auto j = couple(s, spec, DiscreteMeter::at({-g, 0.0, g}, 0.0), g);
  auto st = pointer_stats(j);
  REQUIRE(st.distribution.size() == 3);
  CHECK(near(st.distribution[0].second, 0.64, 1e-12));  // -g from |1>
  CHECK(near(st.distribution[2].second, 0.36, 1e-12));
  CHECK_THROWS_AS(couple(j, spec, {0}, g), std::domain_error);  // would need +-2g

  auto cyc = couple(s, spec, DiscreteMeter::at({-g, 0.0, g}, 0.0, true), g);
  auto cyc2 = couple(cyc, spec, {0}, g);  // wraps instead of erroring
  CHECK(near(cyc2.norm2(), 1.0, 1e-12));
}

TEST_CASE("pointer statistics reject vanishing post-selection") {
  auto spec = spectral_decompose(OperatorMatrix{{2}, sigma_z()});
  auto j = couple(PureState::basis({2}, {0}), spec, GaussianMeter::packet(1.0, 0.0), 0.2);
  CHECK_THROWS_AS(pointer_stats(j, PureState::basis({2}, {1})), singular_error);
}

TEST_CASE("regime classification uses the documented overlap cutoffs") {
  CHECK(classify_regime(GaussianMeter::packet(1.0), 12.0) == MeterRegime::strong);
  CHECK(classify_regime(GaussianMeter::packet(1.0), 0.05) == MeterRegime::weak);
  CHECK(classify_regime(GaussianMeter::packet(1.0), 2.0) == MeterRegime::intermediate);
  CHECK(classify_regime(DiscreteMeter::at({0.0, 1.0}, 0.0), 1.0) == MeterRegime::strong);
}
