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

#include <cmath>
#include <numeric>
#include <optional>
#include <variant>

namespace erasim {

// ---------------------------------------------------------------------------
// Pointer meters.
//
// A Gaussian meter is a finite superposition of displaced (and possibly
// momentum-boosted) wavepackets of one common width:
//
//   psi_{c,k}(q) ~ exp(i k q) exp(-(q - c)^2 / (4 Delta^2)),   Var(Q) = Delta^2.
//
// Everything is evaluated with closed-form kernels, never on a grid:
//
//   <c1,k1|c2,k2>  = exp(-(c1-c2)^2/(8 D^2) - (k2-k1)^2 D^2/2 + i (k2-k1)(c1+c2)/2)
//   <c1,k1|Q|c2,k2> = <.|.> * (m + i (k2-k1) D^2),          m = (c1+c2)/2
//   <c1,k1|Q^2|..>  = <.|.> * ((m + i (k2-k1) D^2)^2 + D^2)
//   <c1,k1|P|c2,k2> = <.|.> * ((k1+k2)/2 + i (c1-c2)/(4 D^2))
//
// Translation follows e^{-i a P}|q=c> = |q=c+a> (positive shifts), and a
// momentum boost e^{i k Q} maps |c,k0> to |c,k0+k> with no extra phase.
// ---------------------------------------------------------------------------

struct GaussianComponent {
  cplx amp;
  double center = 0.0;
  double momentum = 0.0;
};

struct GaussianMeter {
  double width = 1.0;
  std::vector<GaussianComponent> components;

  /// Single wavepacket |q=center>.
  static GaussianMeter packet(double width, double center = 0.0) {
    if (width <= 0.0) throw std::invalid_argument("meter width must be positive");
    return GaussianMeter{width, {{cplx(1.0, 0.0), center, 0.0}}};
  }
};

/// Finite labeled pointer-position set. `amps` is the state over `positions`
/// (exactly orthogonal basis). With `cyclic`, translations wrap around a
/// uniform grid instead of erroring at the edge.
struct DiscreteMeter {
  std::vector<double> positions;
  Vector amps;
  bool cyclic = false;

  static DiscreteMeter at(std::vector<double> positions, double initial, bool cyclic = false);
};

using Meter = std::variant<GaussianMeter, DiscreteMeter>;

namespace detail {

inline cplx packet_overlap(double width, const GaussianComponent& a, const GaussianComponent& b) {
  double d = a.center - b.center;
  double dk = b.momentum - a.momentum;
  double mid = 0.5 * (a.center + b.center);
  double w2 = width * width;
  return std::exp(cplx(-d * d / (8.0 * w2) - 0.5 * dk * dk * w2, dk * mid));
}

inline cplx packet_q(double width, const GaussianComponent& a, const GaussianComponent& b) {
  double dk = b.momentum - a.momentum;
  cplx m(0.5 * (a.center + b.center), dk * width * width);
  return packet_overlap(width, a, b) * m;
}

inline cplx packet_q2(double width, const GaussianComponent& a, const GaussianComponent& b) {
  double dk = b.momentum - a.momentum;
  double w2 = width * width;
  cplx m(0.5 * (a.center + b.center), dk * w2);
  return packet_overlap(width, a, b) * (m * m + w2);
}

inline cplx packet_p(double width, const GaussianComponent& a, const GaussianComponent& b) {
  cplx v(0.5 * (a.momentum + b.momentum), (a.center - b.center) / (4.0 * width * width));
  return packet_overlap(width, a, b) * v;
}

// integral of conj(psi_a) psi_b over q > theta (zero-momentum packets only)
inline double packet_halfline(double width, double ca, double cb, double theta) {
  double d = ca - cb;
  double m = 0.5 * (ca + cb);
  double w2 = width * width;
  return std::exp(-d * d / (8.0 * w2)) * 0.5 * std::erfc((theta - m) / (std::sqrt(2.0) * width));
}

inline constexpr double kComponentMergeTol = 1e-12;

inline void merge_components(std::vector<GaussianComponent>& comps) {
  if (comps.empty()) return;
  std::sort(comps.begin(), comps.end(), [](const auto& x, const auto& y) {
    if (x.center != y.center) return x.center < y.center;
    return x.momentum < y.momentum;
  });
  std::vector<GaussianComponent> out;
  for (const auto& c : comps) {
    if (!out.empty() && std::abs(out.back().center - c.center) <= kComponentMergeTol &&
        std::abs(out.back().momentum - c.momentum) <= kComponentMergeTol) {
      out.back().amp += c.amp;
    } else {
      out.push_back(c);
    }
  }
  std::erase_if(out, [](const auto& c) { return c.amp == cplx(0.0, 0.0); });
  comps = std::move(out);
}

inline long find_position(const std::vector<double>& positions, double p, double tol = 1e-9) {
  for (std::size_t i = 0; i < positions.size(); ++i)
    if (std::abs(positions[i] - p) <= tol) return static_cast<long>(i);
  return -1;
}

// uniform spacing, or throws (needed for cyclic translation)
inline double grid_step(const std::vector<double>& positions) {
  if (positions.size() < 2) throw std::domain_error("cyclic meter needs at least 2 positions");
  double step = positions[1] - positions[0];
  for (std::size_t i = 1; i + 1 < positions.size(); ++i)
    if (std::abs(positions[i + 1] - positions[i] - step) > 1e-12 * std::max(1.0, std::abs(step)))
      throw std::domain_error("cyclic meter requires a uniform position grid");
  return step;
}

}  // namespace detail

inline DiscreteMeter DiscreteMeter::at(std::vector<double> positions, double initial,
                                       bool cyclic) {
  for (std::size_t i = 0; i < positions.size(); ++i)
    for (std::size_t j = i + 1; j < positions.size(); ++j)
      if (std::abs(positions[i] - positions[j]) <= 1e-9)
        throw std::invalid_argument("discrete meter positions must be distinct");
  long idx = detail::find_position(positions, initial);
  if (idx < 0) throw std::domain_error("initial position not in the position set");
  Vector v = Vector::Zero(static_cast<long>(positions.size()));
  v(idx) = 1.0;
  return DiscreteMeter{std::move(positions), std::move(v), cyclic};
}

// ---------------------------------------------------------------------------
// meter-level operations

inline cplx overlap(const GaussianMeter& a, const GaussianMeter& b) {
  if (a.width != b.width) throw std::invalid_argument("overlap: meter widths differ");
  cplx s = 0.0;
  for (const auto& x : a.components)
    for (const auto& y : b.components)
      s += std::conj(x.amp) * y.amp * detail::packet_overlap(a.width, x, y);
  return s;
}

inline cplx overlap(const DiscreteMeter& a, const DiscreteMeter& b) {
  if (a.positions != b.positions) throw std::invalid_argument("overlap: position sets differ");
  return a.amps.dot(b.amps);
}

inline cplx overlap(const Meter& a, const Meter& b) {
  if (a.index() != b.index()) throw std::invalid_argument("overlap: mixed meter kinds");
  if (std::holds_alternative<GaussianMeter>(a))
    return overlap(std::get<GaussianMeter>(a), std::get<GaussianMeter>(b));
  return overlap(std::get<DiscreteMeter>(a), std::get<DiscreteMeter>(b));
}

inline double meter_norm(const Meter& m) { return std::sqrt(std::abs(overlap(m, m).real())); }

inline GaussianMeter translate(const GaussianMeter& m, double a) {
  GaussianMeter out = m;
  for (auto& c : out.components) {
    c.amp *= std::exp(cplx(0.0, -c.momentum * a));
    c.center += a;
  }
  return out;
}

inline DiscreteMeter translate(const DiscreteMeter& m, double a) {
  DiscreteMeter out = m;
  out.amps.setZero();
  long n = static_cast<long>(m.positions.size());
  double drop = 1e-13 * m.amps.cwiseAbs().maxCoeff();
  if (m.cyclic) {
    double step = detail::grid_step(m.positions);
    double raw = a / step;
    long k = std::lround(raw);
    if (std::abs(raw - k) > 1e-9)
      throw std::domain_error("cyclic translation must be a whole number of grid steps");
    for (long j = 0; j < n; ++j) out.amps(((j + k) % n + n) % n) += m.amps(j);
  } else {
    for (long j = 0; j < n; ++j) {
      if (std::abs(m.amps(j)) <= drop) continue;
      long t = detail::find_position(m.positions, m.positions[j] + a);
      if (t < 0) throw std::domain_error("translation leaves the discrete position set");
      out.amps(t) += m.amps(j);
    }
  }
  return out;
}

inline Meter translate(const Meter& m, double a) {
  if (std::holds_alternative<GaussianMeter>(m)) return translate(std::get<GaussianMeter>(m), a);
  return translate(std::get<DiscreteMeter>(m), a);
}

/// Classification of a coupling by the overlap of adjacent shifted pointer
/// states (report labeling only; nothing branches on this).
enum class MeterRegime { strong, intermediate, weak };

inline MeterRegime classify_regime(const Meter& m, double min_shift_gap) {
  if (std::holds_alternative<DiscreteMeter>(m))
    return min_shift_gap == 0.0 ? MeterRegime::weak : MeterRegime::strong;
  double w = std::get<GaussianMeter>(m).width;
  double ov = std::exp(-min_shift_gap * min_shift_gap / (8.0 * w * w));
  if (ov <= 1e-6) return MeterRegime::strong;
  if (ov >= 0.999) return MeterRegime::weak;
  return MeterRegime::intermediate;
}

inline const char* to_string(MeterRegime r) {
  switch (r) {
    case MeterRegime::strong: return "strong";
    case MeterRegime::weak: return "weak";
    default: return "intermediate";
  }
}

// ---------------------------------------------------------------------------
// Joint system (x) meter states.
//
// A pure state of (finite system) (x) (meter) is stored as one meter ket per
// system basis index: |Psi> = sum_beta |beta> (x) |chi_beta>. For Gaussian
// meters |chi_beta> is a component list; for discrete meters the whole object
// is a dims x positions amplitude matrix.
// ---------------------------------------------------------------------------

class JointState {
 public:
  struct GaussianData {
    double width;
    std::vector<std::vector<GaussianComponent>> kets;  // one per system index
  };
  struct DiscreteData {
    std::vector<double> positions;
    bool cyclic;
    Matrix amps;  // rows: system index, cols: position
  };

  Dims dims;
  std::variant<GaussianData, DiscreteData> data;

  static JointState product(const PureState& s, const Meter& m) {
    JointState j;
    j.dims = s.dims;
    long d = s.dim();
    if (std::holds_alternative<GaussianMeter>(m)) {
      const auto& gm = std::get<GaussianMeter>(m);
      GaussianData g;
      g.width = gm.width;
      g.kets.resize(d);
      for (long b = 0; b < d; ++b) {
        if (s.amps(b) == cplx(0.0, 0.0)) continue;
        for (const auto& c : gm.components)
          g.kets[b].push_back({s.amps(b) * c.amp, c.center, c.momentum});
      }
      j.data = std::move(g);
    } else {
      const auto& dm = std::get<DiscreteMeter>(m);
      DiscreteData dd;
      dd.positions = dm.positions;
      dd.cyclic = dm.cyclic;
      dd.amps = s.amps * dm.amps.transpose();
      j.data = std::move(dd);
    }
    return j;
  }

  bool gaussian() const { return std::holds_alternative<GaussianData>(data); }
  long system_dim() const { return detail::dim_product(dims); }

  double norm2() const {
    if (gaussian()) {
      const auto& g = std::get<GaussianData>(data);
      double s = 0.0;
      for (const auto& ket : g.kets)
        for (const auto& x : ket)
          for (const auto& y : ket)
            s += (std::conj(x.amp) * y.amp * detail::packet_overlap(g.width, x, y)).real();
      return s;
    }
    return std::get<DiscreteData>(data).amps.squaredNorm();
  }

  void scale(cplx f) {
    if (gaussian()) {
      for (auto& ket : std::get<GaussianData>(data).kets)
        for (auto& c : ket) c.amp *= f;
    } else {
      std::get<DiscreteData>(data).amps *= f;
    }
  }

  void normalize() {
    double n = std::sqrt(norm2());
    if (n == 0.0) throw singular_error("cannot normalize zero joint state");
    scale(1.0 / n);
  }

  /// Applies a system operator on the listed target subsystems.
  void apply_operator(const OperatorMatrix& op, const std::vector<int>& targets) {
    OperatorMatrix e = embed(op, targets, dims);
    apply_full(e.mat);
  }

  void apply_full(const Matrix& m) {
    if (m.rows() != system_dim()) throw std::invalid_argument("joint apply: dimension mismatch");
    if (gaussian()) {
      auto& g = std::get<GaussianData>(data);
      std::vector<std::vector<GaussianComponent>> out(g.kets.size());
      for (long r = 0; r < m.rows(); ++r) {
        for (long c = 0; c < m.cols(); ++c) {
          cplx v = m(r, c);
          if (v == cplx(0.0, 0.0)) continue;
          for (const auto& comp : g.kets[c])
            out[r].push_back({v * comp.amp, comp.center, comp.momentum});
        }
        detail::merge_components(out[r]);
      }
      g.kets = std::move(out);
    } else {
      auto& dd = std::get<DiscreteData>(data);
      dd.amps = (m * dd.amps).eval();
    }
  }

  /// von Neumann coupling exp(-i g Omega (x) P) with Omega given spectrally
  /// on the target subsystems: each eigenbranch's meter translates by
  /// g * lambda_k.
  void couple(const SpectralDecomposition& spec, const std::vector<int>& targets, double g) {
    std::vector<Matrix> embedded;
    embedded.reserve(spec.count());
    for (int k = 0; k < spec.count(); ++k)
      embedded.push_back(embed(spec.projector_op(k), targets, dims).mat);

    if (gaussian()) {
      auto& gd = std::get<GaussianData>(data);
      std::vector<std::vector<GaussianComponent>> out(gd.kets.size());
      for (int k = 0; k < spec.count(); ++k) {
        double shift = g * spec.eigenvalues[k];
        const Matrix& e = embedded[k];
        for (long r = 0; r < e.rows(); ++r) {
          for (long c = 0; c < e.cols(); ++c) {
            cplx v = e(r, c);
            if (v == cplx(0.0, 0.0)) continue;
            for (const auto& comp : gd.kets[c])
              out[r].push_back({v * comp.amp * std::exp(cplx(0.0, -comp.momentum * shift)),
                                comp.center + shift, comp.momentum});
          }
        }
      }
      for (auto& ket : out) detail::merge_components(ket);
      gd.kets = std::move(out);
    } else {
      auto& dd = std::get<DiscreteData>(data);
      long n = static_cast<long>(dd.positions.size());
      Matrix out = Matrix::Zero(dd.amps.rows(), n);
      double drop = 1e-13 * (dd.amps.cwiseAbs().maxCoeff() + 1e-300);
      for (int k = 0; k < spec.count(); ++k) {
        double shift = g * spec.eigenvalues[k];
        Matrix branch = embedded[k] * dd.amps;
        if (dd.cyclic) {
          double step = detail::grid_step(dd.positions);
          double raw = shift / step;
          long steps = std::lround(raw);
          if (std::abs(raw - steps) > 1e-9)
            throw std::domain_error("cyclic shift must be a whole number of grid steps");
          for (long j = 0; j < n; ++j) out.col(((j + steps) % n + n) % n) += branch.col(j);
        } else {
          for (long j = 0; j < n; ++j) {
            if (branch.col(j).cwiseAbs().maxCoeff() <= drop) continue;
            long t = detail::find_position(dd.positions, dd.positions[j] + shift);
            if (t < 0) throw std::domain_error("coupling shift leaves the discrete position set");
            out.col(t) += branch.col(j);
          }
        }
      }
      dd.amps = std::move(out);
    }
  }

  /// exp(i gamma Gen (x) Q): boosts the meter momentum by gamma * lambda_k on
  /// each eigenbranch of the generator (discrete meters pick up the exact
  /// position-dependent phase instead).
  void apply_position_phase(const SpectralDecomposition& gen, const std::vector<int>& targets,
                            double gamma) {
    if (gaussian()) {
      auto& gd = std::get<GaussianData>(data);
      std::vector<std::vector<GaussianComponent>> out(gd.kets.size());
      for (int k = 0; k < gen.count(); ++k) {
        double boost = gamma * gen.eigenvalues[k];
        Matrix e = embed(gen.projector_op(k), targets, dims).mat;
        for (long r = 0; r < e.rows(); ++r)
          for (long c = 0; c < e.cols(); ++c) {
            cplx v = e(r, c);
            if (v == cplx(0.0, 0.0)) continue;
            for (const auto& comp : gd.kets[c])
              out[r].push_back({v * comp.amp, comp.center, comp.momentum + boost});
          }
      }
      for (auto& ket : out) detail::merge_components(ket);
      gd.kets = std::move(out);
    } else {
      auto& dd = std::get<DiscreteData>(data);
      Matrix out = Matrix::Zero(dd.amps.rows(), dd.amps.cols());
      for (int k = 0; k < gen.count(); ++k) {
        Matrix branch = embed(gen.projector_op(k), targets, dims).mat * dd.amps;
        for (long j = 0; j < branch.cols(); ++j)
          branch.col(j) *= std::exp(cplx(0.0, gamma * gen.eigenvalues[k] * dd.positions[j]));
        out += branch;
      }
      dd.amps = std::move(out);
    }
  }

  /// Pointer parity q -> -q (local meter unitary).
  void reflect_meter() {
    if (gaussian()) {
      for (auto& ket : std::get<GaussianData>(data).kets)
        for (auto& c : ket) {
          c.center = -c.center;
          c.momentum = -c.momentum;
        }
    } else {
      auto& dd = std::get<DiscreteData>(data);
      Matrix out = Matrix::Zero(dd.amps.rows(), dd.amps.cols());
      for (long j = 0; j < static_cast<long>(dd.positions.size()); ++j) {
        long t = detail::find_position(dd.positions, -dd.positions[j]);
        if (t < 0) throw std::domain_error("reflection requires a symmetric position set");
        out.col(t) = dd.amps.col(j);
      }
      dd.amps = std::move(out);
    }
  }

  /// Contracts one system subsystem with <bra| (projective readout followed by
  /// discarding). The result is unnormalized; its norm^2 is the branch
  /// probability when *this is normalized.
  JointState contracted(int subsystem, const Vector& bra) const {
    if (subsystem < 0 || subsystem >= static_cast<int>(dims.size()))
      throw std::out_of_range("contracted: subsystem out of range");
    if (bra.size() != dims[subsystem])
      throw std::invalid_argument("contracted: bra dimension mismatch");
    detail::IndexSplit split(dims, {subsystem});
    JointState out;
    out.dims = dims;
    out.dims.erase(out.dims.begin() + subsystem);
    if (gaussian()) {
      const auto& gd = std::get<GaussianData>(data);
      GaussianData og;
      og.width = gd.width;
      og.kets.resize(split.other_count);
      for (long o = 0; o < split.other_count; ++o) {
        long base = split.other_offset(o);
        for (long t = 0; t < split.target_count; ++t) {
          cplx w = std::conj(bra(t));
          if (w == cplx(0.0, 0.0)) continue;
          for (const auto& comp : gd.kets[base + split.target_offset(t)])
            og.kets[o].push_back({w * comp.amp, comp.center, comp.momentum});
        }
        detail::merge_components(og.kets[o]);
      }
      out.data = std::move(og);
    } else {
      const auto& dd = std::get<DiscreteData>(data);
      DiscreteData od{dd.positions, dd.cyclic,
                      Matrix::Zero(split.other_count, dd.amps.cols())};
      for (long o = 0; o < split.other_count; ++o) {
        long base = split.other_offset(o);
        for (long t = 0; t < split.target_count; ++t)
          od.amps.row(o) += std::conj(bra(t)) * dd.amps.row(base + split.target_offset(t));
      }
      out.data = std::move(od);
    }
    return out;
  }

  /// Reduced system density operator (meter traced out). Unnormalized iff the
  /// joint state is.
  DensityState system_density() const {
    long d = system_dim();
    Matrix rho(d, d);
    if (gaussian()) {
      const auto& gd = std::get<GaussianData>(data);
      for (long b = 0; b < d; ++b)
        for (long bp = 0; bp < d; ++bp) {
          cplx s = 0.0;
          for (const auto& x : gd.kets[bp])
            for (const auto& y : gd.kets[b])
              s += std::conj(x.amp) * y.amp * detail::packet_overlap(gd.width, x, y);
          rho(b, bp) = s;
        }
    } else {
      const auto& dd = std::get<DiscreteData>(data);
      rho = dd.amps * dd.amps.adjoint();
    }
    bool un = std::abs(rho.trace().real() - 1.0) > 1e-12;
    return DensityState{dims, std::move(rho), un};
  }

  /// Conditional (unnormalized) meter state after projecting the system onto
  /// |phi>; the squared norm is the post-selection probability when *this is
  /// normalized.
  Meter postselect_meter(const PureState& phi) const {
    if (phi.dims != dims) throw std::invalid_argument("postselect: dimension mismatch");
    if (gaussian()) {
      const auto& gd = std::get<GaussianData>(data);
      GaussianMeter m{gd.width, {}};
      for (long b = 0; b < system_dim(); ++b) {
        cplx w = std::conj(phi.amps(b));
        if (w == cplx(0.0, 0.0)) continue;
        for (const auto& comp : gd.kets[b])
          m.components.push_back({w * comp.amp, comp.center, comp.momentum});
      }
      detail::merge_components(m.components);
      return m;
    }
    const auto& dd = std::get<DiscreteData>(data);
    Vector v = (phi.amps.adjoint() * dd.amps).transpose();
    return DiscreteMeter{dd.positions, std::move(v), dd.cyclic};
  }

  /// Reduced system state conditioned on a pointer-sign readout Q > theta
  /// (above) or Q < theta. Gaussian meters must have zero momentum boosts.
  DensityState system_density_given_sign(double theta, bool above) const {
    long d = system_dim();
    Matrix rho = Matrix::Zero(d, d);
    if (gaussian()) {
      const auto& gd = std::get<GaussianData>(data);
      for (const auto& ket : gd.kets)
        for (const auto& c : ket)
          if (c.momentum != 0.0)
            throw std::logic_error("sign conditioning needs zero-momentum meter components");
      for (long b = 0; b < d; ++b)
        for (long bp = 0; bp < d; ++bp) {
          cplx s = 0.0;
          for (const auto& x : gd.kets[bp])
            for (const auto& y : gd.kets[b]) {
              double h = above ? detail::packet_halfline(gd.width, x.center, y.center, theta)
                               : detail::packet_overlap(gd.width, x, y).real() -
                                     detail::packet_halfline(gd.width, x.center, y.center, theta);
              s += std::conj(x.amp) * y.amp * h;
            }
          rho(b, bp) = s;
        }
    } else {
      const auto& dd = std::get<DiscreteData>(data);
      for (long j = 0; j < static_cast<long>(dd.positions.size()); ++j) {
        bool in = above ? dd.positions[j] > theta : dd.positions[j] < theta;
        if (in) rho += dd.amps.col(j) * dd.amps.col(j).adjoint();
      }
    }
    return DensityState{dims, std::move(rho), true};
  }
};

inline cplx inner(const JointState& a, const JointState& b) {
  if (a.dims != b.dims) throw std::invalid_argument("joint inner: dimension mismatch");
  if (a.gaussian() != b.gaussian()) throw std::invalid_argument("joint inner: mixed meter kinds");
  if (a.gaussian()) {
    const auto& ga = std::get<JointState::GaussianData>(a.data);
    const auto& gb = std::get<JointState::GaussianData>(b.data);
    if (ga.width != gb.width) throw std::invalid_argument("joint inner: widths differ");
    cplx s = 0.0;
    for (std::size_t i = 0; i < ga.kets.size(); ++i)
      for (const auto& x : ga.kets[i])
        for (const auto& y : gb.kets[i])
          s += std::conj(x.amp) * y.amp * detail::packet_overlap(ga.width, x, y);
    return s;
  }
  const auto& da = std::get<JointState::DiscreteData>(a.data);
  const auto& db = std::get<JointState::DiscreteData>(b.data);
  if (da.positions != db.positions) throw std::invalid_argument("joint inner: grids differ");
  cplx s = 0.0;
  for (long j = 0; j < da.amps.cols(); ++j) s += da.amps.col(j).dot(db.amps.col(j));
  return s;
}

/// |<a|b>| / (|a| |b|), global-phase insensitive.
inline double fidelity(const JointState& a, const JointState& b) {
  double na = std::sqrt(a.norm2()), nb = std::sqrt(b.norm2());
  if (na == 0.0 || nb == 0.0) throw singular_error("fidelity of a zero joint state");
  return std::abs(inner(a, b)) / (na * nb);
}

// ---------------------------------------------------------------------------
// the von Neumann coupling

inline JointState couple(const PureState& s, const SpectralDecomposition& spec,
                         const std::vector<int>& targets, const Meter& m, double g) {
  JointState j = JointState::product(s, m);
  j.couple(spec, targets, g);
  return j;
}

/// Coupling with the observable acting on the whole system.
inline JointState couple(const PureState& s, const SpectralDecomposition& spec, const Meter& m,
                         double g) {
  std::vector<int> all(s.dims.size());
  std::iota(all.begin(), all.end(), 0);
  return couple(s, spec, all, m, g);
}

inline JointState couple(JointState j, const SpectralDecomposition& spec,
                         const std::vector<int>& targets, double g) {
  j.couple(spec, targets, g);
  return j;
}

// ---------------------------------------------------------------------------
// pointer readout statistics

struct PointerStats {
  double probability = 1.0;  ///< post-selection probability (1 when unconditioned)
  double mean_q = 0.0;
  double var_q = 0.0;
  std::optional<double> mean_p;                        ///< Gaussian meters only
  std::vector<std::pair<double, double>> distribution;  ///< discrete: (position, prob)
};

namespace detail {

inline PointerStats meter_stats(const GaussianMeter& m) {
  double n2 = 0.0;
  cplx q = 0.0, q2 = 0.0, p = 0.0;
  for (const auto& x : m.components)
    for (const auto& y : m.components) {
      cplx w = std::conj(x.amp) * y.amp;
      n2 += (w * packet_overlap(m.width, x, y)).real();
      q += w * packet_q(m.width, x, y);
      q2 += w * packet_q2(m.width, x, y);
      p += w * packet_p(m.width, x, y);
    }
  if (n2 <= 0.0) throw singular_error("pointer statistics of a zero meter state");
  PointerStats st;
  st.mean_q = q.real() / n2;
  st.var_q = q2.real() / n2 - st.mean_q * st.mean_q;
  st.mean_p = p.real() / n2;
  return st;
}

inline PointerStats meter_stats(const DiscreteMeter& m) {
  double n2 = m.amps.squaredNorm();
  if (n2 <= 0.0) throw singular_error("pointer statistics of a zero meter state");
  PointerStats st;
  double q = 0.0, q2 = 0.0;
  for (long j = 0; j < static_cast<long>(m.positions.size()); ++j) {
    double pr = std::norm(m.amps(j)) / n2;
    st.distribution.emplace_back(m.positions[j], pr);
    q += pr * m.positions[j];
    q2 += pr * m.positions[j] * m.positions[j];
  }
  st.mean_q = q;
  st.var_q = q2 - q * q;
  return st;
}

}  // namespace detail

/// Readout statistics of the meter, optionally conditioned on a system
/// post-selection. Throws singular_error when the post-selection probability
/// vanishes within tol.
inline PointerStats pointer_stats(const JointState& joint,
                                  const std::optional<PureState>& postselect = std::nullopt,
                                  double tol = kDefaultTol) {
  double total = joint.norm2();
  if (total <= 0.0) throw singular_error("pointer statistics of a zero joint state");
  if (postselect) {
    Meter cond = joint.postselect_meter(*postselect);
    double p2 = std::abs(overlap(cond, cond).real());
    double prob = p2 / total;
    if (prob <= tol) throw singular_error("post-selection probability vanishes");
    PointerStats st = std::visit([](const auto& m) { return detail::meter_stats(m); }, cond);
    st.probability = prob;
    return st;
  }
  // trace out the system: statistics of the meter marginal
  if (joint.gaussian()) {
    const auto& gd = std::get<JointState::GaussianData>(joint.data);
    double n2 = 0.0;
    cplx q = 0.0, q2 = 0.0, p = 0.0;
    for (const auto& ket : gd.kets)
      for (const auto& x : ket)
        for (const auto& y : ket) {
          cplx w = std::conj(x.amp) * y.amp;
          n2 += (w * detail::packet_overlap(gd.width, x, y)).real();
          q += w * detail::packet_q(gd.width, x, y);
          q2 += w * detail::packet_q2(gd.width, x, y);
          p += w * detail::packet_p(gd.width, x, y);
        }
    PointerStats st;
    st.mean_q = q.real() / n2;
    st.var_q = q2.real() / n2 - st.mean_q * st.mean_q;
    st.mean_p = p.real() / n2;
    return st;
  }
  const auto& dd = std::get<JointState::DiscreteData>(joint.data);
  PointerStats st;
  double q = 0.0, q2 = 0.0;
  for (long j = 0; j < static_cast<long>(dd.positions.size()); ++j) {
    double pr = dd.amps.col(j).squaredNorm() / total;
    st.distribution.emplace_back(dd.positions[j], pr);
    q += pr * dd.positions[j];
    q2 += pr * dd.positions[j] * dd.positions[j];
  }
  st.mean_q = q;
  st.var_q = q2 - q * q;
  return st;
}

}  // namespace erasim
