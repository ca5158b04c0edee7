// Copyright 2026 The Fourswap Authors
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

#ifndef FOURSWAP_SRC_DISTINGUISHABILITY_HPP_
#define FOURSWAP_SRC_DISTINGUISHABILITY_HPP_

#include <vector>

#include "jsa.hpp"
#include "types.hpp"

namespace fsw {

// Two sources sampled on common grids.
struct SourcePair {
  Jsa source1;
  Jsa source2;
  double delta_phi = 0.0;  // relative pump phase, rad
};

// Source 2 is source 1 translated by (ds, di) rad/ps.
SourcePair translated_pair(const Jsa& base, double ds, double di,
                           double delta_phi = 0.0);

// Integral of f1* f2 over the joint spectrum.
cplx source_overlap(const SourcePair& p);
// Gaussian closed form of the overlap for a rigid translation.
double source_overlap_gaussian(const GaussianModel& g, double ds, double di);
// Translation length along the direction (us, ui) at which the gaussian
// overlap equals `target` in (0, 1].
double translation_for_overlap(const GaussianModel& g, double us, double ui,
                               double target);

struct VjkResult {
  cplx factor_j;  // <phi_j^1|phi_j^2>
  cplx factor_k;  // <phi_k^1|phi_k^2>
  // |factor_j| |factor_k|; phases go into the fringe offset.
  double vjk = 0.0;
};
VjkResult vjk(const SourcePair& p, double omega_j, double omega_k);
// Gaussian closed form of one factor: exp(-d^2 / 8 sS^2) with
// d = ds + 2 alpha sS^2 di.
double bin_factor_gaussian(const GaussianModel& g, double ds, double di);

// Exact P_jk(tau_S) for the two-source heralded state.
FringeTrace two_source_fringes(const SourcePair& p, double omega_j,
                               double omega_k, double tau_i,
                               const std::vector<double>& tau_s);

// Beamsplitter port pairing of a two-fold coincidence.
enum class PortPairing { kCX, kCY, kDX, kDY };
// +1 for (c, x) and (d, y), -1 otherwise.
int pairing_sign(PortPairing pairing);

// P_cc = (1/2)(1 +- Re O e^{i dphi}) over a pump-phase sweep.
FringeTrace twofold_phase_fringes(const SourcePair& p,
                                  const std::vector<double>& phases,
                                  PortPairing pairing = PortPairing::kCX);

// Normalized overlap of the two double-pair terms after projection on one
// photon per output port: (O^2 + Tr A A) / sqrt((1 + P1)(1 + P2)) with
// A(W, W') = int f1*(w, W) f2(w, W').
cplx double_pair_coherence(const SourcePair& p);

// Probability that a double-pair event gives a four-fold coincidence at a
// fixed pump phase: (1/4)(1 + m cos(2 dphi + arg kappa)),
// m = 2 eta1 eta2 |kappa| / (eta1^2 + eta2^2).
double double_pair_fourfold_probability(cplx kappa, double eta1, double eta2,
                                        double delta_phi);
FringeTrace fourfold_phase_fringes(const SourcePair& p, double eta1,
                                   double eta2,
                                   const std::vector<double>& phases);

}  // namespace fsw

#endif  // FOURSWAP_SRC_DISTINGUISHABILITY_HPP_
