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

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace coorbit {

using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

/// phi(z) = 1/z or z^{-1/2}, expanded around z = 1.
enum class HoloFunction { inverse, inverse_sqrt };

std::string to_string(HoloFunction phi);
HoloFunction holo_function_from_string(const std::string& name);

/// Coefficients a_n of phi(1 + t) = sum_n a_n t^n: (-1)^n for the inverse,
/// binom(-1/2, n) for the inverse square root.
std::vector<double> series_coefficients(HoloFunction phi, int count);

struct SeriesPlan {
  int terms = 1;            // a_0 .. a_{terms-1}
  double contraction = 0.0; // q = ||S - I||_2
  double tail_bound = 0.0;  // bound on sum_{n >= terms} |a_n| q^n
};

/// Smallest truncation whose geometric tail |a_n| q^{n+1} / (1 - q) is below tail_tol.
/// Throws NotContractive for q >= 1.
SeriesPlan plan_series(HoloFunction phi, double q, double tail_tol);

struct HolomorphicResult {
  CMatrix value;
  int terms = 0;
  double contraction = 0.0;
  double tail_bound = 0.0;
};

double spectral_norm(const CMatrix& a);

/// Truncated power series phi(S) = sum_n a_n (S - I)^n. Throws NotContractive
/// unless ||S - I||_2 <= eps_bound < 1.
HolomorphicResult holomorphic_apply(const CMatrix& s, HoloFunction phi, double eps_bound = 0.999,
                                    double tail_tol = 1e-14);

/// phi(S) for Hermitian positive definite S via eigendecomposition.
CMatrix hermitian_function(const CMatrix& s, HoloFunction phi);

}  // namespace coorbit
