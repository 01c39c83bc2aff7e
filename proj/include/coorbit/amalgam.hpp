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

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "coorbit/errors.hpp"
#include "coorbit/group_model.hpp"

namespace coorbit {

/// Function on the carrier of a model. Scalar is double or Complex.
template <typename Scalar>
struct GridFunction {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  ModelPtr model;
  Vector values;

  GridFunction() = default;
  explicit GridFunction(ModelPtr m) : model(std::move(m)), values(Vector::Zero(model->size())) {}
  GridFunction(ModelPtr m, Vector v) : model(std::move(m)), values(std::move(v)) {
    if (values.size() != model->size())
      throw IncompatibleOperands("grid function length differs from carrier size");
  }

  Index size() const { return values.size(); }
  Scalar operator()(Index x) const { return values(x); }
  Scalar& operator()(Index x) { return values(x); }
};

using RealFunction = GridFunction<double>;
using ComplexFunction = GridFunction<Complex>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class Flavor { plain, left, right, two_sided };

/// Y = L^p_w with an optional amalgam flavor. The weight is any positive
/// per-point vector; an empty vector means w = 1.
struct QuasiNormSpec {
  double p = 1.0;
  Eigen::VectorXd weight;
  Flavor flavor = Flavor::plain;

  static QuasiNormSpec lebesgue(double p, Eigen::VectorXd w = {}) { return {p, std::move(w), Flavor::plain}; }
  static QuasiNormSpec with(double p, const PWeight& w, Flavor f) { return {p, w.values(), f}; }
  QuasiNormSpec as(Flavor f) const { return {p, weight, f}; }
};

/// Throws IncompatibleOperands if a and b live on different models.
void require_same_model(const ModelPtr& a, const ModelPtr& b);

/// Pointwise modulus.
template <typename Scalar>
RealFunction abs(const GridFunction<Scalar>& f) {
  return RealFunction(f.model, f.values.cwiseAbs().template cast<double>());
}

template <typename Scalar>
GridFunction<Scalar> involution(const GridFunction<Scalar>& f) {
  const GroupModel& m = *f.model;
  GridFunction<Scalar> out(f.model);
  for (Index x = 0; x < m.size(); ++x) {
    const Index xi = m.inv(x);
    if (xi != kAbsent) out.values(x) = f.values(xi);
  }
  return out;
}

/// (L_y F)(x) = F(y^{-1} x)
template <typename Scalar>
GridFunction<Scalar> translate_left(const GridFunction<Scalar>& f, Index y) {
  const GroupModel& m = *f.model;
  m.check_point(y);
  const Index yi = m.inv(y);
  GridFunction<Scalar> out(f.model);
  if (yi == kAbsent) return out;
  for (Index x = 0; x < m.size(); ++x) {
    const Index z = m.mul(yi, x);
    if (z != kAbsent) out.values(x) = f.values(z);
  }
  return out;
}

/// (R_y F)(x) = F(x y)
template <typename Scalar>
GridFunction<Scalar> translate_right(const GridFunction<Scalar>& f, Index y) {
  const GroupModel& m = *f.model;
  m.check_point(y);
  GridFunction<Scalar> out(f.model);
  for (Index x = 0; x < m.size(); ++x) {
    const Index z = m.mul(x, y);
    if (z != kAbsent) out.values(x) = f.values(z);
  }
  return out;
}

/// Twisted left translation (L^sigma_y F)(x) = sigma(y, y^{-1} x) F(y^{-1} x).
ComplexFunction translate_left_twisted(const ComplexFunction& f, Index y);

/// M^L F(x) = max_{q in Q, xq defined} |F(xq)|
template <typename Scalar>
RealFunction maximal_left(const GridFunction<Scalar>& f) {
  const GroupModel& m = *f.model;
  RealFunction out(f.model);
  const auto& q = m.q_neighborhood();
  for (Index x = 0; x < m.size(); ++x) {
    double best = 0.0;
    for (Index s : q) {
      const Index z = m.mul(x, s);
      if (z != kAbsent) best = std::max(best, static_cast<double>(std::abs(f.values(z))));
    }
    out.values(x) = best;
  }
  return out;
}

/// M^R F(x) = max_{q in Q, qx defined} |F(qx)|
template <typename Scalar>
RealFunction maximal_right(const GridFunction<Scalar>& f) {
  const GroupModel& m = *f.model;
  RealFunction out(f.model);
  const auto& q = m.q_neighborhood();
  for (Index x = 0; x < m.size(); ++x) {
    double best = 0.0;
    for (Index s : q) {
      const Index z = m.mul(s, x);
      if (z != kAbsent) best = std::max(best, static_cast<double>(std::abs(f.values(z))));
    }
    out.values(x) = best;
  }
  return out;
}

/// M = M^L M^R
template <typename Scalar>
RealFunction maximal_two_sided(const GridFunction<Scalar>& f) {
  return maximal_left(maximal_right(f));
}

/// (sum_k |F_k w_k|^p mu_k)^{1/p}; weighted max for p = inf.
double lpw_norm_values(const GroupModel& model, const Eigen::VectorXd& abs_values, double p,
                       const Eigen::VectorXd& weight);

template <typename Scalar>
double lpw_norm(const GridFunction<Scalar>& f, const QuasiNormSpec& spec) {
  return lpw_norm_values(*f.model, f.values.cwiseAbs().template cast<double>(), spec.p, spec.weight);
}

/// Norm of the flavor's maximal function (plain flavor: the Lebesgue norm itself).
template <typename Scalar>
double amalgam_norm(const GridFunction<Scalar>& f, const QuasiNormSpec& spec) {
  switch (spec.flavor) {
    case Flavor::plain: return lpw_norm(f, spec);
    case Flavor::left: return lpw_norm(maximal_left(f), spec);
    case Flavor::right: return lpw_norm(maximal_right(f), spec);
    case Flavor::two_sided: return lpw_norm(maximal_two_sided(f), spec);
  }
  return 0.0;
}

/// Raw sum (F1 *_sigma F2)(x) = sum_y F1(y) c(y, y^{-1}x) F2(y^{-1}x) mu(y).
template <typename Scalar, bool Twisted>
GridFunction<Scalar> convolve_impl(const GridFunction<Scalar>& f1, const GridFunction<Scalar>& f2) {
  require_same_model(f1.model, f2.model);
  const GroupModel& m = *f1.model;
  const Index n = m.size();
  GridFunction<Scalar> out(f1.model);
  for (Index y = 0; y < n; ++y) {
    const Scalar a = f1.values(y);
    if (a == Scalar(0)) continue;
    const Index yi = m.inv(y);
    if (yi == kAbsent) continue;
    const Scalar scaled = a * m.haar(y);
    for (Index x = 0; x < n; ++x) {
      const Index z = m.mul(yi, x);
      if (z == kAbsent) continue;
      if constexpr (Twisted) {
        out.values(x) += scaled * m.cocycle(y, z) * f2.values(z);
      } else {
        out.values(x) += scaled * f2.values(z);
      }
    }
  }
  return out;
}

template <typename Scalar>
GridFunction<Scalar> convolve(const GridFunction<Scalar>& f1, const GridFunction<Scalar>& f2) {
  return convolve_impl<Scalar, false>(f1, f2);
}

inline ComplexFunction twisted_convolve(const ComplexFunction& f1, const ComplexFunction& f2) {
  return convolve_impl<Complex, true>(f1, f2);
}

/// Indicator of a set of carrier indices.
RealFunction indicator(const ModelPtr& model, const std::vector<Index>& set);
/// Indicator of Q.
RealFunction indicator_q(const ModelPtr& model);
/// delta / mu(x): the unit for convolution at x.
RealFunction normalized_delta(const ModelPtr& model, Index x);
ComplexFunction to_complex(const RealFunction& f);

struct ConvolutionReport {
  double lhs = 0.0;          // ||F1 * F2||_Y
  double left_factor = 0.0;  // ||F1||_{W^L(Y)}
  double right_factor = 0.0; // ||F2||_{W^R(L^p_w)}
  double rhs_product = 0.0;
  double empirical_constant = 0.0;   // lhs / rhs_product (0 when both vanish)
  double max_left_excess = 0.0;      // max of M^L(F1*F2) - |F1| * M^L F2
  double max_right_excess = 0.0;     // max of M^R(F1*F2) - M^R F1 * |F2|
  bool pointwise_ok = true;
};

/// Measures the convolution relation W^L(Y) * W^R(L^p_w) -> Y and the
/// pointwise maximal-function estimates (asserted only on exact models).
ConvolutionReport convolution_relation_check(const ComplexFunction& f1, const ComplexFunction& f2,
                                             const QuasiNormSpec& y, const PWeight& w,
                                             bool twisted = false);

struct EmbeddingReport {
  double max_ratio = 0.0;
  bool finite = true;
};

/// max over samples of ||F||_{L^{p_to}_w} / ||F||_{W^L(L^{p_from}_w)}.
EmbeddingReport embedding_constant_check(const std::vector<ComplexFunction>& samples, double p_from,
                                         double p_to, const PWeight& w);

/// One CSV row per carrier point: c0, c1, re, im.
void write_csv(const ComplexFunction& f, const std::string& path);
void write_csv(const RealFunction& f, const std::string& path);

}  // namespace coorbit
