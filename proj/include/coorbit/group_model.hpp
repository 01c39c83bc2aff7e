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

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace coorbit {

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// Marker returned by partial group operations that leave the carrier.
inline constexpr Index kAbsent = -1;

enum class ModelKind { cyclic, line, affine };

struct AffineGridParams {
  double x_half_width = 4.0;
  double x_step = 0.05;
  double a_min = 1.0 / 16.0;
  double a_max = 8.0;
  double a_ratio = 1.05;
};

/// Finite carrier of group points with quadrature Haar weights, a partial
/// multiplication, the modular function, a cocycle and the base
/// neighborhood Q.
///
/// Three built-in models exist:
///  - cyclic phase space Z_N x Z_N (exact, Heisenberg-type cocycle),
///  - a uniform grid on [-L, L] with addition (truncated),
///  - the affine group R x (0, inf) on a uniform-x / geometric-a grid
///    (truncated, products snapped to the nearest cell).
///
/// Instances are immutable and shared through ModelPtr.
class GroupModel {
 public:
  ModelKind kind() const { return kind_; }
  Index size() const { return static_cast<Index>(coords_.rows()); }
  bool is_exact() const { return kind_ == ModelKind::cyclic; }
  Index identity() const { return identity_; }

  /// Product xy, or kAbsent when it falls off the carrier.
  Index mul(Index x, Index y) const;
  /// Inverse x^{-1}, or kAbsent.
  Index inv(Index x) const;

  double haar(Index x) const { return haar_(x); }
  const Eigen::VectorXd& haar_weights() const { return haar_; }
  double modular(Index x) const { return modular_(x); }
  const Eigen::VectorXd& modular_values() const { return modular_; }
  Complex cocycle(Index x, Index y) const;

  const std::vector<Index>& q_neighborhood() const { return q_; }
  bool in_q(Index x) const { return in_q_[static_cast<std::size_t>(x)] != 0; }
  /// Haar measure of Q.
  double q_measure() const { return q_measure_; }

  /// Coordinate label: (k, l) for cyclic, (x, 0) for the line, (x, a) for affine.
  Eigen::Vector2d coords(Index x) const { return coords_.row(x).transpose(); }
  const Eigen::Matrix<double, Eigen::Dynamic, 2>& coordinates() const { return coords_; }

  /// Carrier point nearest to the given coordinates if it lies within half
  /// a cell, kAbsent otherwise. Cyclic coordinates are reduced mod N.
  Index locate(double c0, double c1 = 0.0) const;

  /// Throws InvalidPoint unless 0 <= x < size().
  void check_point(Index x) const;

  /// Cyclic order N (cyclic models only, 0 otherwise).
  int cyclic_order() const { return n_; }
  /// Grid step in the first coordinate (1 for cyclic).
  double step() const { return step_; }
  /// Ratio of the geometric a-grid (affine only).
  double a_ratio() const { return ratio_; }

  std::string name() const;
  nlohmann::json parameters() const;

 private:
  friend std::shared_ptr<const GroupModel> build_cyclic_phase_space(int n);
  friend std::shared_ptr<const GroupModel> build_real_line(double half_width, double step);
  friend std::shared_ptr<const GroupModel> build_affine_grid(const AffineGridParams& params);

  GroupModel() = default;
  void finalize_q();

  ModelKind kind_ = ModelKind::cyclic;
  Eigen::Matrix<double, Eigen::Dynamic, 2> coords_;
  Eigen::VectorXd haar_;
  Eigen::VectorXd modular_;
  std::vector<Index> q_;
  std::vector<char> in_q_;
  double q_measure_ = 0.0;
  Index identity_ = 0;

  int n_ = 0;           // cyclic order
  double step_ = 1.0;   // x step (line, affine)
  Index mx_ = 0;        // x half count: x_j = j * step, j in [-mx, mx]
  Index nx_ = 1;        // 2 * mx + 1
  Index ma_lo_ = 0;     // affine: a_m = ratio^m, m in [ma_lo, ma_hi]
  Index ma_hi_ = 0;
  double ratio_ = 1.0;
  Eigen::VectorXd a_pow_;  // ratio^m per a-row
  AffineGridParams affine_params_{};
  double half_width_ = 0.0;
};

using ModelPtr = std::shared_ptr<const GroupModel>;

ModelPtr build_cyclic_phase_space(int n);
ModelPtr build_real_line(double half_width, double step);
ModelPtr build_affine_grid(const AffineGridParams& params);

/// Builds a model from {"model": "cyclic"|"line"|"affine", ...numeric parameters}.
ModelPtr build_model(const nlohmann::json& config);

/// Set of carrier indices containing the identity (U, V, Q-like sets).
using Neighborhood = std::vector<Index>;

/// Cyclic block {(k, l) : lo <= k, l <= hi} (coordinates taken mod N).
Neighborhood block_neighborhood(const GroupModel& model, int lo, int hi);
/// Points with |x| < radius on the line model.
Neighborhood interval_neighborhood(const GroupModel& model, double radius);
/// The whole carrier.
Neighborhood full_neighborhood(const GroupModel& model);

// ---------------------------------------------------------------------------
// p-weights

struct PWeightReport {
  bool w1 = false;  // w >= 1
  bool w2 = false;  // submultiplicative on defined products
  bool w3 = false;  // p-symmetry w(x) = w(x^-1) Delta(x^-1)^{1/p}
  double min_value = 0.0;
  double max_submultiplicative_ratio = 0.0;
  double max_symmetry_deviation = 0.0;
  bool pass() const { return w1 && w2 && w3; }
};

/// Default tolerance: 1e-12 on exact models, 1e-8 on truncated ones.
double default_weight_tolerance(const GroupModel& model);

/// Checks the three p-weight axioms. O(size^2) for the submultiplicativity scan.
PWeightReport validate_p_weight(const GroupModel& model, const Eigen::VectorXd& w, double p,
                                double tol = -1.0);

/// Per-point weight validated against the p-weight axioms at construction.
class PWeight {
 public:
  /// Throws InvalidWeight if any axiom fails at the model's default tolerance.
  PWeight(ModelPtr model, Eigen::VectorXd values, double p, std::string id = "custom");

  static PWeight unit(ModelPtr model, double p);

  const Eigen::VectorXd& values() const { return values_; }
  double operator()(Index x) const { return values_(x); }
  double p() const { return p_; }
  const std::string& id() const { return id_; }
  const ModelPtr& model() const { return model_; }

 private:
  ModelPtr model_;
  Eigen::VectorXd values_;
  double p_;
  std::string id_;
};

/// w(x) = max{w0(x), w0(x^-1) Delta(x^-1)^{1/p}}. Requires w0 >= 1 and
/// submultiplicative; absent inverses keep w0(x).
PWeight symmetrize_weight(ModelPtr model, const Eigen::VectorXd& w0, double p,
                          std::string id = "symmetrized");

/// Polynomial weight (1 + |k| + |l|)^s on the cyclic model, |.| the cyclic distance.
Eigen::VectorXd polynomial_weight(const GroupModel& model, double s);

/// Haar measure of Q x Q = {q1 x q2}, counting every representable product cell once.
double measure_QxQ(const GroupModel& model, Index x);

}  // namespace coorbit
