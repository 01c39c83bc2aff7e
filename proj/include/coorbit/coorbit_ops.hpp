// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <vector>

#include "coorbit/frames.hpp"

namespace coorbit {

/// Y_d(Lambda) built on a plain-flavor Y.
struct SequenceSpaceSpec {
  QuasiNormSpec base;
  SampleSet sample;
};

/// ||sum_i |c_i| 1_{lambda_i Q}||_Y
double sequence_norm(const CVector& c, const SequenceSpaceSpec& spec);
/// Same with lambda_i B in place of lambda_i Q.
double sequence_norm_with_base(const CVector& c, const SequenceSpaceSpec& spec, const Neighborhood& base_set);

struct CoorbitContext {
  RepPtr rep;
  CVector window;
  QuasiNormSpec y;  // plain L^p_w; the left amalgam is taken inside coorbit_norm
};

/// Validates admissibility of the window. Throws InvalidWindow otherwise.
CoorbitContext make_context(RepPtr rep, CVector window, QuasiNormSpec y);

/// ||V_g f||_{W^L(Y)}
double coorbit_norm(const CoorbitContext& ctx, const CVector& f);

struct RatioRange {
  double min = kInfinity;
  double max = 0.0;
  bool finite() const { return std::isfinite(min) && std::isfinite(max); }
  void add(double r) {
    min = std::min(min, r);
    max = std::max(max, r);
  }
};

/// Extreme ratios ||f||_{Co_g} / ||f||_{Co_h} over the samples.
RatioRange window_independence_ratio(const CoorbitContext& ctx, const CVector& h,
                                     const std::vector<CVector>& samples);

/// Extreme ratios ||V_g f||_{W^L(Y)} / ||V_g f||_Y.
RatioRange wiener_vs_plain_ratio(const CoorbitContext& ctx, const std::vector<CVector>& samples);

/// ||M^L V_g g||_{L^1_w}: bound for the ratio above when Y = L^1_w.
double wiener_vs_plain_bound_l1(const CoorbitContext& ctx);

/// Molecule family with its certificate.
struct MoleculeFamily {
  SampleSet sample;
  CMatrix atoms;
  MoleculeCertificate certificate;
};

/// (<f, h_i>)_i. Throws NoCertificate when the certificate is violated.
CVector coefficient_operator(const MoleculeFamily& family, const CVector& f);
/// sum_i c_i h_i. Throws NoCertificate when the certificate is violated.
CVector reconstruction_operator(const MoleculeFamily& family, const CVector& c);

/// Sample vectors: the standard basis followed by `random` complex Gaussian vectors.
std::vector<CVector> basis_and_random(Index dim, Index random, std::uint64_t seed, std::uint64_t stream);

struct OperatorNorms {
  double coefficient = 0.0;     // sup ||C f||_{Y_d} / ||f||_{Co(Y)}
  double reconstruction = 0.0;  // sup ||D c||_{Co(Y)} / ||c||_{Y_d}
};

OperatorNorms measure_operator_norms(const CoorbitContext& ctx, const MoleculeFamily& family,
                                     const std::vector<CVector>& f_samples,
                                     const std::vector<CVector>& c_samples);

/// C_C, C_D with ||C|| <= C_C rel ||Phi|| and ||D|| <= C_D rel ||Phi||, obtained as
/// safety * the largest ratio over random molecule families on calibration lattices.
struct CalibratedConstants {
  double coefficient = 0.0;
  double reconstruction = 0.0;
  double safety = 2.0;
  int families = 0;
  nlohmann::json to_json() const;
};

CalibratedConstants calibrate_constants(const CoorbitContext& ctx, const PWeight& w, std::uint64_t seed,
                                        double safety = 2.0);

struct BoundCheck {
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

/// ||C_h||_{Co(Y) -> Y_d} against C_C rel ||Phi_h||.
BoundCheck coefficient_bound_check(const CoorbitContext& ctx, const MoleculeFamily& family,
                                   const CalibratedConstants& k, std::uint64_t seed);

struct EmbeddingFactorReport {
  double coorbit_constant = 0.0;  // sup ||f||_{Co(Z)} / ||f||_{Co(Y)}
  double sequence_constant = 0.0; // sup ||c||_{Z_d} / ||c||_{Y_d}
  double coefficient_norm = 0.0;  // ||C||_{Co(Y) -> Y_d}
  double reconstruction_norm = 0.0; // ||D||_{Z_d -> Co(Z)}
  double product = 0.0;
  bool pass = false;
};

/// Factorization f = D C f with C from the frame atoms and D from the dual atoms.
EmbeddingFactorReport embedding_check(const CoorbitContext& ctx_y, const CoorbitContext& ctx_z,
                                      const FrameSystem& fs, const AtomFamily& dual, Index random_samples,
                                      std::uint64_t seed);

struct OperatorExtensionReport {
  double measured = 0.0;        // sup ||T f||_{Co(Y)} / ||f||_{Co(Y)}
  double envelope_norm = 0.0;   // ||M Phi_T||_{L^p_w}
  double constant = 0.0;        // C_D C_C rel^2 ||Phi_h||
  double bound = 0.0;
  bool pass = false;
};

/// Molecules m_i = T pi(lambda_i) g with fitted envelope Phi_T; T f = D_m C_h f.
OperatorExtensionReport extend_operator_check(const CoorbitContext& ctx, const PWeight& w, const CMatrix& t,
                                              const FrameSystem& fs, const AtomFamily& dual,
                                              const CalibratedConstants& k, Index random_samples,
                                              std::uint64_t seed);

/// T = sum_x c(x) mu(x) pi(x) with c random on a block around the identity.
CMatrix random_convolution_operator(const Representation& rep, int radius, std::uint64_t seed);

}  // namespace coorbit
