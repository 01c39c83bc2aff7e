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

#include <optional>
#include <string>

#include "coorbit/holomorphic.hpp"
#include "coorbit/sampling.hpp"

namespace coorbit {

/// Nonnegative symmetric envelope with its (p, w) context.
struct Envelope {
  RealFunction phi;
  double p = 1.0;
  Eigen::VectorXd weight;  // empty means w = 1
  std::string weight_id = "unit";
};

/// Matrix indexed by rows in Lambda and columns in Gamma.
struct CDMatrix {
  SampleSet rows;
  SampleSet cols;
  CMatrix entries;
  std::optional<Envelope> envelope;

  CDMatrix() = default;
  /// Throws IncompatibleOperands on shape or model mismatch.
  CDMatrix(SampleSet r, SampleSet c, CMatrix e, std::optional<Envelope> env = std::nullopt);
};

struct EnvelopeCheck {
  bool holds = true;
  double max_excess = 0.0;  // max of |A_ij| - min{Phi(g_j^-1 l_i), Phi(l_i^-1 g_j)}
  Index unbinned = 0;       // entries with neither relative position on the carrier
};

/// Exhaustive entry check |A_ij| <= min{Phi(gamma_j^-1 lambda_i), Phi(lambda_i^-1 gamma_j)} + tol.
EnvelopeCheck verify_envelope(const CDMatrix& a, const RealFunction& phi, double tol = 0.0);

/// Smallest sampled envelope: bin maxima of |A_ij| at gamma_j^-1 lambda_i,
/// symmetrized by the involution. Throws CoverageWarning when a nonzero entry
/// has no bin and strict is set.
RealFunction minimal_envelope(const CDMatrix& a, bool strict = true);

/// Attaches the minimal envelope with the given (p, w) context.
CDMatrix with_minimal_envelope(CDMatrix a, double p = 1.0, Eigen::VectorXd weight = {},
                               std::string weight_id = "unit");

struct SchurBounds {
  double row_sum_bound = 0.0;  // bounds sum_j |A_ij|, uses rel(Gamma)
  double col_sum_bound = 0.0;  // bounds sum_i |A_ij|, uses rel(Lambda)
  double op_bound_l2 = 0.0;    // sqrt(row * col)
  double measured_row_sum = 0.0;
  double measured_col_sum = 0.0;
  double measured_l2 = 0.0;
};

/// Schur-test bounds from the envelope. Throws NoCertificate without one.
SchurBounds schur_bounds(const CDMatrix& a);

/// rel(Lambda)/mu(Q) (M^L Theta * M^R Phi + M^L Phi * M^R Theta), symmetrized.
RealFunction product_envelope(const RealFunction& theta, const RealFunction& phi, int rel_middle);

/// A B with envelope from product_envelope. Needs A.cols == B.rows and both envelopes.
CDMatrix product_with_envelope(const CDMatrix& a, const CDMatrix& b);

struct MatrixHolomorphicResult {
  CDMatrix matrix;
  int terms = 0;
  double contraction = 0.0;
  double tail_bound = 0.0;
};

/// phi(A) by power series around I with a propagated envelope
/// |a_0| Phi_I + sum_n |a_n| Theta_n + tail, Theta_n an envelope of (A - I)^n.
MatrixHolomorphicResult matrix_holomorphic(const CDMatrix& a, HoloFunction phi, double tail_tol = 1e-14);

nlohmann::json to_json(const CDMatrix& a);

}  // namespace coorbit
