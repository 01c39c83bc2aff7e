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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "coorbit/coorbit_ops.hpp"
#include "coorbit/counterexamples.hpp"
#include "coorbit/report.hpp"

namespace coorbit {

// Every config reads missing keys as defaults and rejects out-of-range values
// with InvalidParameter.

struct RealLineConfig {
  std::vector<double> t_list{1.0, 2.0, 3.0};
  double half_width = 12.0;
  double step = 0.005;
  bool resolution_check = true;

  static RealLineConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct AffineConfig {
  AffineQuadrature quadrature;
  std::vector<double> a_list{1.0, 2.0, 4.0, 8.0};
  std::vector<double> b_list{16.0, 64.0};
  bool resolution_check = true;

  static AffineConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct GaborConfig {
  int n = 8;
  std::vector<int> lattice_steps{1, 2};
  std::string window = "gaussian";
  double eps_target = 1.0;  // Neumann series when ||S - I|| < eps_target, direct solve otherwise
  double p = 1.0;
  double weight_exponent = 0.0;
  std::vector<int> refinement_blocks{8, 4, 2, 1};
  std::uint64_t seed = 1;

  static GaborConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct RieszConfig {
  int n = 8;
  int separation = 4;
  std::string window = "gaussian";
  double p = 1.0;
  double weight_exponent = 0.0;
  std::uint64_t seed = 1;

  static RieszConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct InDiagnosticConfig {
  nlohmann::json model = {{"model", "cyclic"}, {"N", 8}};
  std::vector<std::array<double, 2>> points;  // coordinates; empty means a default list per model
  double growth_factor = 3.0;                 // affine: measure(last) / measure(first)

  static InDiagnosticConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct CoorbitNormConfig {
  int n = 8;
  double p = 0.5;
  double weight_exponent = 1.0;
  std::string window = "gaussian";
  std::string alt_window = "boxcar";
  int samples = 100;
  std::uint64_t seed = 1;

  static CoorbitNormConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct CoorbitEmbedConfig {
  int n = 8;
  int lattice_step = 2;
  std::string window = "gaussian";
  double y_p = 0.5;
  double y_weight_exponent = 1.0;
  double z_p = 1.0;
  double z_weight_exponent = 0.0;
  int samples = 40;
  int random_operators = 3;
  std::uint64_t seed = 1;

  static CoorbitEmbedConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

/// Throws ResolutionError when a pass flag flips at half step.
Report run_counterexample_realline(const RealLineConfig& config);
/// Throws ResolutionError when halving the steps moves a value by more than 5% or flips a flag.
Report run_counterexample_affine(const AffineConfig& config);
Report run_gabor_suite(const GaborConfig& config);
Report run_riesz_suite(const RieszConfig& config);
Report run_in_diagnostic(const InDiagnosticConfig& config);
Report run_coorbit_norm(const CoorbitNormConfig& config);
Report run_coorbit_embed(const CoorbitEmbedConfig& config);

/// max_{i,x} |V_g h_i(x)| - tau_i psi(lambda_i^{-1} x)
double majorant_excess(const FrameSystem& fs, const AtomFamily& dual, const RealFunction& psi);

/// Dispatch on "<group> <name>", e.g. "counterexample realline". Throws InvalidParameter
/// for unknown commands.
Report run_command(const std::string& group, const std::string& name, const nlohmann::json& config);

}  // namespace coorbit
