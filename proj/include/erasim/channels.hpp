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
#include "erasim/random.hpp"

#include <numeric>

namespace erasim {

/// Bipartite channel with labeled outcomes; an outcome may group several
/// Kraus operators (coarse-grained readouts). `cut` is the number of leading
/// subsystems on the A side.
struct BipartiteChannel {
  struct Outcome {
    std::string label;
    std::vector<Matrix> kraus;
  };
  Dims dims;
  int cut = 1;
  std::vector<Outcome> outcomes;

  bool complete(double tol = kDefaultTol) const {
    long d = detail::dim_product(dims);
    Matrix s = Matrix::Zero(d, d);
    for (const auto& o : outcomes)
      for (const auto& k : o.kraus) s += k.adjoint() * k;
    return (s - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() <= tol;
  }

  std::vector<int> a_side() const {
    std::vector<int> v(cut);
    std::iota(v.begin(), v.end(), 0);
    return v;
  }
  std::vector<int> b_side() const {
    std::vector<int> v;
    for (int i = cut; i < static_cast<int>(dims.size()); ++i) v.push_back(i);
    return v;
  }
};

/// Lueders channel of a (possibly non-local) observable, one projector per
/// outcome.
inline BipartiteChannel lueders_bipartite(const SpectralDecomposition& spec, int cut = 1) {
  BipartiteChannel ch;
  ch.dims = spec.dims;
  ch.cut = cut;
  for (int k = 0; k < spec.count(); ++k)
    ch.outcomes.push_back({std::to_string(spec.eigenvalues[k]), {spec.projectors[k]}});
  return ch;
}

/// The joint local measurement of two one-side observables, one rank-group
/// per outcome pair (label "a,b").
inline BipartiteChannel local_joint_channel(const SpectralDecomposition& spec_a,
                                            const SpectralDecomposition& spec_b) {
  BipartiteChannel ch;
  ch.dims = spec_a.dims;
  ch.dims.insert(ch.dims.end(), spec_b.dims.begin(), spec_b.dims.end());
  ch.cut = static_cast<int>(spec_a.dims.size());
  for (int a = 0; a < spec_a.count(); ++a)
    for (int b = 0; b < spec_b.count(); ++b)
      ch.outcomes.push_back({std::to_string(spec_a.eigenvalues[a]) + "," +
                                 std::to_string(spec_b.eigenvalues[b]),
                             {kron(spec_a.projectors[a], spec_b.projectors[b])}});
  return ch;
}

/// Coarse-grains outcomes by merging the listed outcome indices into one
/// (their Kraus lists concatenate; the measurement forgets which fired).
inline BipartiteChannel coarse_grain(const BipartiteChannel& ch,
                                     const std::vector<std::vector<int>>& groups,
                                     const std::vector<std::string>& labels) {
  BipartiteChannel out;
  out.dims = ch.dims;
  out.cut = ch.cut;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    BipartiteChannel::Outcome o;
    o.label = labels[g];
    for (int idx : groups[g])
      for (const auto& k : ch.outcomes.at(idx).kraus) o.kraus.push_back(k);
    out.outcomes.push_back(std::move(o));
  }
  return out;
}

struct EntanglingResult {
  int rank = 0;
  std::vector<double> singular_values;
  double probability = 0.0;
};

/// Schmidt rank across the cut of the normalized outcome-k output for a pure
/// product input (the input is checked to be product). Throws singular_error
/// if the sub-channel annihilates the input.
inline EntanglingResult entangling_test(const BipartiteChannel& ch, int outcome,
                                        const PureState& s, double tol = kDefaultTol) {
  if (s.dims != ch.dims) throw std::invalid_argument("entangling_test: dims mismatch");
  if (schmidt_rank(s, ch.a_side(), tol) != 1)
    throw std::invalid_argument("entangling_test: input is not a product state across the cut");
  const auto& o = ch.outcomes.at(outcome);
  if (o.kraus.size() != 1)
    throw std::invalid_argument("entangling_test: outcome is not a single projective branch");
  PureState out{s.dims, o.kraus[0] * s.amps, true};
  double p = out.amps.squaredNorm();
  if (p <= tol * tol) throw singular_error("entangling_test: sub-channel annihilates the input");
  auto sd = schmidt(out.normalized(), ch.a_side(), tol);
  return {sd.rank, sd.singular_values, p};
}

struct EBScanResult {
  bool entanglement_breaking = true;
  std::optional<PureState> witness;
  int trials_run = 0;
};

/// Randomized scan for entangling behavior of one outcome's sub-channel:
/// every Kraus branch applied to random pure inputs (product and entangled)
/// must give Schmidt rank <= 1 after normalization. A pass is "no violation
/// found in N trials", not a proof.
inline EBScanResult entanglement_breaking_scan(const BipartiteChannel& ch, int outcome,
                                               int trials, std::uint64_t seed,
                                               double tol = kDefaultTol) {
  if (trials < 1) throw std::invalid_argument("entanglement_breaking_scan: trials must be >= 1");
  Rng rng(seed);
  const auto& o = ch.outcomes.at(outcome);
  EBScanResult res;
  auto check = [&](const PureState& s) -> bool {
    for (const auto& k : o.kraus) {
      PureState out{s.dims, k * s.amps, true};
      if (out.amps.squaredNorm() <= tol * tol) continue;  // annihilated
      if (schmidt_rank(out.normalized(), ch.a_side(), tol) > 1) return false;
    }
    return true;
  };
  // deterministic basis-product inputs first
  long da = 1, db = 1;
  for (int i : ch.a_side()) da *= ch.dims[i];
  for (int i : ch.b_side()) db *= ch.dims[i];
  for (long a = 0; a < da; ++a)
    for (long b = 0; b < db; ++b) {
      Vector v = Vector::Zero(da * db);
      v(a * db + b) = 1.0;
      PureState s{ch.dims, std::move(v)};
      ++res.trials_run;
      if (!check(s)) {
        res.entanglement_breaking = false;
        res.witness = s;
        return res;
      }
    }
  for (int t = 0; t < trials; ++t) {
    PureState s = (t % 2 == 0) ? random_product_state(ch.dims, rng) : random_state(ch.dims, rng);
    ++res.trials_run;
    if (!check(s)) {
      res.entanglement_breaking = false;
      res.witness = s;
      return res;
    }
  }
  return res;
}

/// Maximum trace distance between Bob's marginals over pairs of Alice-side
/// preparations: > 0 means the channel signals from A to B (hence is neither
/// causal nor localizable).
inline double signalling_test(const BipartiteChannel& ch,
                              const std::vector<OperatorMatrix>& alice_preps,
                              const PureState& probe) {
  if (probe.dims != ch.dims) throw std::invalid_argument("signalling_test: dims mismatch");
  std::vector<DensityState> marginals;
  for (const auto& prep : alice_preps) {
    PureState prepared = apply(prep, probe, ch.a_side());
    DensityState rho = to_density(prepared);
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    for (const auto& o : ch.outcomes)
      for (const auto& k : o.kraus) out += k * rho.rho * k.adjoint();
    marginals.push_back(partial_trace(DensityState{ch.dims, std::move(out)}, ch.b_side()));
  }
  double best = 0.0;
  for (std::size_t i = 0; i < marginals.size(); ++i)
    for (std::size_t j = i + 1; j < marginals.size(); ++j)
      best = std::max(best, trace_distance(marginals[i], marginals[j]));
  return best;
}

}  // namespace erasim
