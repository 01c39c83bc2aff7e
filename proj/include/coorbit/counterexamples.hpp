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

#include <vector>

#include "coorbit/amalgam.hpp"

namespace coorbit {

/// One row of the real-line example at shift T:
/// f = 1_(T,T+1), g = f^v, v(x) = e^{-x}, w(x) = e^{x}.
struct RealLineRow {
  double t = 0.0;
  double conv_at_zero = 0.0;  // (f * g)(0)
  double norm_f = 0.0;        // ||f||_{W^L(L^1_v)}
  double norm_g = 0.0;        // ||g^v||_{W^L(L^1_v)}
  double norm_conv = 0.0;     // ||f * g||_{W^L(L^1_w)}
  double ratio = 0.0;         // norm_conv / (norm_f norm_g)
};

/// Throws TruncationError unless max T + 2 < half_width.
std::vector<RealLineRow> realline_counterexample(const std::vector<double>& t_list, double half_width,
                                                 double step);

/// Quadrature for the affine example with f(x, a) = e^{-|x|} min(a^alpha, a^-beta).
/// Scale integrals run over ln b in [-log_half_width, log_half_width].
struct AffineQuadrature {
  double alpha = 2.0;
  double beta = 0.5;
  double log_step = 0.01;
  double log_half_width = 20.0;
  double z_step = 0.01;
  double z_half_width = 20.0;

  void validate() const;
  AffineQuadrature halved() const;
};

/// min(a^alpha, a^-beta)
double affine_profile(double a, double alpha, double beta);

/// (f^v * f)(x, a) by quadrature.
double affine_self_convolution(double x, double a, const AffineQuadrature& q);

/// Lower proxy for the W^L(L^1_w) norm of f^v * f restricted to b in [1, B]:
/// sum over b of 2 (1 + b) max_{b' in (b/2, 2b)} (f^v * f)(0, b') d(ln b).
double affine_partial_norm(double b_max, const AffineQuadrature& q);

/// sup |f| over the quadrature grid.
double affine_sup(const AffineQuadrature& q);

struct InDiagnosticRow {
  Index point = 0;
  double c0 = 0.0;
  double c1 = 0.0;
  double measure = 0.0;
};

/// mu(Q x Q) at each point.
std::vector<InDiagnosticRow> in_diagnostic(const GroupModel& model, const std::vector<Index>& points);

}  // namespace coorbit
