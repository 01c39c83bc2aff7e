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

#include "coorbit/counterexamples.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace coorbit {

std::vector<RealLineRow> realline_counterexample(const std::vector<double>& t_list, double half_width,
                                                 double step) {
  if (t_list.empty()) throw InvalidParameter("empty list of shifts");
  const double t_max = *std::max_element(t_list.begin(), t_list.end());
  if (!(t_max + 2.0 < half_width)) {
    std::ostringstream os;
    os << "domain half width " << half_width << " too small for T = " << t_max;
    throw TruncationError(os.str());
  }
  const ModelPtr model = build_real_line(half_width, step);
  Eigen::VectorXd v(model->size()), w(model->size());
  for (Index x = 0; x < model->size(); ++x) {
    v(x) = std::exp(-model->coords(x)(0));
    w(x) = std::exp(model->coords(x)(0));
  }
  const QuasiNormSpec yv{1.0, v, Flavor::left}, yw{1.0, w, Flavor::left};
  const double edge = 1e-9 * step;

  std::vector<RealLineRow> rows;
  for (double t : t_list) {
    if (!(t > 0.0)) throw InvalidParameter("shift T must be positive");
    RealFunction f(model);
    for (Index x = 0; x < model->size(); ++x) {
      const double c = model->coords(x)(0);
      if (c > t + edge && c < t + 1.0 - edge) f.values(x) = 1.0;
    }
    const RealFunction g = involution(f);
    const RealFunction conv = convolve(f, g);
    RealLineRow row;
    row.t = t;
    row.conv_at_zero = conv(model->identity());
    row.norm_f = amalgam_norm(f, yv);
    row.norm_g = amalgam_norm(involution(g), yv);
    row.norm_conv = amalgam_norm(conv, yw);
    row.ratio = row.norm_conv / (row.norm_f * row.norm_g);
    rows.push_back(row);
  }
  return rows;
}

void AffineQuadrature::validate() const {
  if (!(alpha > 1.0)) throw InvalidParameter("alpha must exceed 1");
  if (!(beta > 0.0 && beta < 1.0)) throw InvalidParameter("beta must lie in (0, 1)");
  if (!(log_step > 0.0 && z_step > 0.0)) throw InvalidParameter("quadrature steps must be positive");
  if (!(log_half_width > 10.0 * log_step && z_half_width > 10.0 * z_step))
    throw InvalidParameter("quadrature window too small for its step");
}

AffineQuadrature AffineQuadrature::halved() const {
  AffineQuadrature out = *this;
  out.log_step /= 2.0;
  out.z_step /= 2.0;
  return out;
}

double affine_profile(double a, double alpha, double beta) {
  return std::min(std::pow(a, alpha), std::pow(a, -beta));
}

namespace {

// Trapezoid rule for int e^{-|z|} e^{-|z - t|} dz.
double overlap_kernel(double t, const AffineQuadrature& q) {
  const auto n = static_cast<Index>(std::floor(q.z_half_width / q.z_step));
  double sum = 0.0;
  for (Index k = -n; k <= n; ++k) {
    const double z = static_cast<double>(k) * q.z_step;
    const double wt = (k == -n || k == n) ? 0.5 : 1.0;
    sum += wt * std::exp(-std::abs(z) - std::abs(z - t));
  }
  return sum * q.z_step;
}

double scale_integral(double x, double a, const AffineQuadrature& q, double kernel_at_zero) {
  const auto n = static_cast<Index>(std::floor(q.log_half_width / q.log_step));
  double sum = 0.0;
  for (Index k = -n; k <= n; ++k) {
    const double s = static_cast<double>(k) * q.log_step;
    const double inv_b = std::exp(-s);
    const double wt = (k == -n || k == n) ? 0.5 : 1.0;
    const double kern = x == 0.0 ? kernel_at_zero : overlap_kernel(x * inv_b, q);
    sum += wt * affine_profile(inv_b, q.alpha, q.beta) * affine_profile(a * inv_b, q.alpha, q.beta) * kern;
  }
  return sum * q.log_step;
}

}  // namespace

double affine_self_convolution(double x, double a, const AffineQuadrature& q) {
  q.validate();
  if (!(a > 0.0)) throw InvalidPoint("scale must be positive");
  return scale_integral(x, a, q, overlap_kernel(0.0, q));
}

double affine_partial_norm(double b_max, const AffineQuadrature& q) {
  q.validate();
  if (!(b_max > 1.0)) throw InvalidParameter("upper scale must exceed 1");
  const double ds = q.log_step;
  const auto top = static_cast<Index>(std::floor(std::log(b_max) / ds + 1e-9));
  const double reach = std::log(2.0) / ds;
  const auto spread = static_cast<Index>(std::ceil(reach)) - 1;
  if (static_cast<double>(top + spread) * ds > q.log_half_width)
    throw TruncationError("scale window too small for the requested upper scale");
  const double k0 = overlap_kernel(0.0, q);
  std::unordered_map<Index, double> cache;
  auto conv_at = [&](Index i) {
    auto it = cache.find(i);
    if (it != cache.end()) return it->second;
    const double v = scale_integral(0.0, std::exp(static_cast<double>(i) * ds), q, k0);
    cache.emplace(i, v);
    return v;
  };
  double sum = 0.0;
  for (Index j = 0; j <= top; ++j) {
    double m = 0.0;
    for (Index i = j - spread; i <= j + spread; ++i)
      if (std::abs(static_cast<double>(i - j)) < reach) m = std::max(m, conv_at(i));
    const double b = std::exp(static_cast<double>(j) * ds);
    const double wt = (j == 0 || j == top) ? 0.5 : 1.0;
    sum += wt * 2.0 * (1.0 + b) * m;
  }
  return sum * ds;
}

double affine_sup(const AffineQuadrature& q) {
  q.validate();
  const auto nz = static_cast<Index>(std::floor(q.z_half_width / q.z_step));
  const auto ns = static_cast<Index>(std::floor(q.log_half_width / q.log_step));
  double best_x = 0.0, best_a = 0.0;
  for (Index k = -nz; k <= nz; ++k) best_x = std::max(best_x, std::exp(-std::abs(static_cast<double>(k) * q.z_step)));
  for (Index k = -ns; k <= ns; ++k)
    best_a = std::max(best_a, affine_profile(std::exp(static_cast<double>(k) * q.log_step), q.alpha, q.beta));
  return best_x * best_a;
}

std::vector<InDiagnosticRow> in_diagnostic(const GroupModel& model, const std::vector<Index>& points) {
  std::vector<InDiagnosticRow> rows;
  for (Index x : points) {
    model.check_point(x);
    const Eigen::Vector2d c = model.coords(x);
    rows.push_back({x, c(0), c(1), measure_QxQ(model, x)});
  }
  return rows;
}

}  // namespace coorbit
