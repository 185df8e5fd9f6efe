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

#include <cstdint>
#include <random>

namespace erasim {

/// Seeded generator with a hand-rolled Box-Muller step, so identical seeds
/// give identical draws on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {
    // 53-bit mantissa in [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  cplx cnormal() { return cplx(normal(), normal()); }

  std::uint64_t integer() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Haar-like random pure state on the composite space.
inline PureState random_state(const Dims& dims, Rng& rng) {
  long d = detail::dim_product(dims);
  Vector v(d);
  for (long i = 0; i < d; ++i) v(i) = rng.cnormal();
  v /= v.norm();
  return PureState{dims, std::move(v)};
}

/// Product of independent random states, one per subsystem.
inline PureState random_product_state(const Dims& dims, Rng& rng) {
  PureState out = random_state({dims[0]}, rng);
  for (std::size_t i = 1; i < dims.size(); ++i)
    out = tensor(out, random_state({dims[i]}, rng));
  return out;
}

inline Matrix random_hermitian(long d, Rng& rng) {
  Matrix g(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) g(i, j) = rng.cnormal();
  return 0.5 * (g + g.adjoint());
}

inline Matrix random_unitary(long d, Rng& rng) {
  Matrix g(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) g(i, j) = rng.cnormal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long i = 0; i < d; ++i) {
    cplx ph = r(i, i) / std::abs(r(i, i));
    q.col(i) *= ph;
  }
  return q;
}

}  // namespace erasim
