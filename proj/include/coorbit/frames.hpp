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

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coorbit/cd_matrix.hpp"

namespace coorbit {

/// Projective unitary representation: one matrix per carrier point.
class Representation {
 public:
  /// Throws InvalidParameter unless every matrix is square, unitary (1e-10)
  /// and the identity acts trivially.
  Representation(ModelPtr model, std::vector<CMatrix> action);

  /// (pi(k,l) f)(t) = e^{2 pi i l t / N} f(t - k) on the cyclic phase space.
  static std::shared_ptr<const Representation> gabor(const ModelPtr& model);

  const ModelPtr& model() const { return model_; }
  Index dimension() const { return dim_; }
  const CMatrix& operator()(Index x) const { return action_[static_cast<std::size_t>(x)]; }
  CVector apply(Index x, const CVector& f) const { return (*this)(x) * f; }

 private:
  ModelPtr model_;
  Index dim_ = 0;
  std::vector<CMatrix> action_;
};

using RepPtr = std::shared_ptr<const Representation>;

/// c exp(-pi d(t,0)^2 / N) with the cyclic distance d and unit norm.
CVector gaussian_window(Index n);
/// Normalized indicator of {d(t,0) <= half_width}.
CVector boxcar_window(Index n, Index half_width);
/// "gaussian" or "boxcar".
CVector window_by_id(const std::string& id, Index n);

/// V_g f(x) = <f, pi(x) g>
ComplexFunction voice_transform(const Representation& rep, const CVector& g, const CVector& f);

struct AdmissibilityReport {
  bool is_admissible = false;
  double constant = 0.0;   // ||V_g f||^2 / ||f||^2
  double spread = 0.0;     // ||A - constant I||_2, A = sum mu(x) pi(x)g (pi(x)g)^*
};

/// Throws InvalidWindow for g = 0 and ReducibilityWarning when the constant depends on f.
AdmissibilityReport check_admissible(const Representation& rep, const CVector& g, double tol = 1e-10);
CVector normalize_admissible(const Representation& rep, const CVector& g);

/// ||V_h f - V_g f *_sigma V_h g||_inf
double reproducing_check(const Representation& rep, const CVector& g, const CVector& h, const CVector& f);

/// Columns pi(lambda_i) g.
CMatrix atoms_at(const Representation& rep, const CVector& g, const SampleSet& sample);

struct MoleculeCertificate {
  RealFunction envelope;
  double p = 1.0;
  Eigen::VectorXd weight;
  std::string weight_id = "unit";
  double amalgam_value = 0.0;  // ||M Phi||_{L^p_w}
  double max_violation = 0.0;
};

/// Phi_0(z) = max_i |V_g h_i(lambda_i z)|, Phi = max(Phi_0, Phi_0^v).
MoleculeCertificate fit_envelope(const Representation& rep, const CVector& g, const CMatrix& atoms,
                                 const SampleSet& sample, const PWeight& w);

struct AtomFamily {
  CMatrix atoms;
  std::optional<MoleculeCertificate> certificate;
  double error = 0.0;        // reconstruction / orthogonality residual
  int series_terms = 0;      // 0 when a direct solve was used
  double contraction = 0.0;  // ||S - I||_2 or ||G - I||_2
};

struct FrameSystem {
  RepPtr rep;
  CVector window;
  SampleSet sample;
  Eigen::VectorXd tau;
  CMatrix atoms;            // pi(lambda_i) g
  CMatrix frame_operator;   // sum tau_i a_i a_i^*
  double lower = 0.0;
  double upper = 0.0;
  std::optional<AtomFamily> dual;
  std::optional<AtomFamily> parseval;
};

/// Extreme eigenvalues with residual check ||Sv - lambda v|| <= 1e-9.
std::pair<double, double> frame_bounds(const CMatrix& s);

FrameSystem build_frame(RepPtr rep, const CVector& g, const SampleSet& sample, Eigen::VectorXd tau);
/// Frame with tau_i = mu(U_i) from the greedy cover. Propagates NotDense.
FrameSystem build_almost_tight_frame(RepPtr rep, const CVector& g, const SampleSet& sample,
                                     const Neighborhood& u);

enum class SolveMethod { automatic, series, direct };

/// h_i = S^{-1}(tau_i a_i); series when ||S - I|| < 1 (automatic), else a direct solve.
/// Throws NotAFrame when A = 0 and NotContractive for a forced series path.
AtomFamily dual_frame(const FrameSystem& fs, const PWeight& w, SolveMethod method = SolveMethod::automatic,
                      double tail_tol = 1e-14);
/// F_i = S^{-1/2}(tau_i^{1/2} a_i)
AtomFamily parseval_frame(const FrameSystem& fs, const PWeight& w, SolveMethod method = SolveMethod::automatic,
                          double tail_tol = 1e-14);

/// G_{i,i'} = <pi(lambda_i') g, pi(lambda_i) g>
CDMatrix gramian(const Representation& rep, const CVector& g, const SampleSet& sample);
std::pair<double, double> riesz_bounds(const CDMatrix& gram);
/// h = A G^{-1}; error = max |<h_i', a_i> - delta|. Throws NotRiesz.
AtomFamily biorthogonal_system(const Representation& rep, const CVector& g, const SampleSet& sample,
                               SolveMethod method = SolveMethod::automatic, double tail_tol = 1e-14);
/// A G^{-1/2}; error = max |F^* F - I|. Throws NotRiesz.
AtomFamily orthonormalize(const Representation& rep, const CVector& g, const SampleSet& sample,
                          SolveMethod method = SolveMethod::automatic, double tail_tol = 1e-14);

struct KernelEnvelopeReport {
  double max_excess = 0.0;
  double max_ratio = 0.0;
  Index pairs_checked = 0;
  bool holds = true;
};

/// |H(x,y)| <= rel/mu(Q) (M^L Phi * M^R Phi)(y^{-1} x), H(x,y) = sum_i H_i(x) conj(H_i(y)),
/// H_i = V_g(tau_i^{1/2} a_i), Phi the fitted envelope of the scaled atoms.
KernelEnvelopeReport frame_kernel_envelope_check(const FrameSystem& fs, const PWeight& w);

struct DualMajorant {
  RealFunction psi;         // symmetric majorant with |V_g h_i(x)| <= tau_i psi(lambda_i^{-1} x)
  int terms = 0;
  double contraction = 0.0;
  double tail = 0.0;
};

/// Series majorant |a_0| Phi + sum_n |a_n| Psi_n + tail with Phi = |V_g g|,
/// Psi_1 = min(eps ||g||^2, Phi + Theta), Psi_n = min(Psi_{n-1} * Psi_1, eps^n ||g||^2).
DualMajorant dual_majorant(const FrameSystem& fs, double tail_tol = 1e-14);

nlohmann::json frame_report_json(const FrameSystem& fs, const std::string& lattice, const std::string& tau_policy);

}  // namespace coorbit
