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

#include "coorbit/amalgam.hpp"

#include <fstream>
#include <iomanip>

namespace coorbit {

void require_same_model(const ModelPtr& a, const ModelPtr& b) {
  if (!a || !b || a.get() != b.get()) throw IncompatibleOperands("operands live on different models");
}

ComplexFunction translate_left_twisted(const ComplexFunction& f, Index y) {
  const GroupModel& m = *f.model;
  m.check_point(y);
  const Index yi = m.inv(y);
  ComplexFunction out(f.model);
  if (yi == kAbsent) return out;
  for (Index x = 0; x < m.size(); ++x) {
    const Index z = m.mul(yi, x);
    if (z != kAbsent) out.values(x) = m.cocycle(y, z) * f.values(z);
  }
  return out;
}

double lpw_norm_values(const GroupModel& model, const Eigen::VectorXd& abs_values, double p,
                       const Eigen::VectorXd& weight) {
  if (abs_values.size() != model.size()) throw IncompatibleOperands("values differ from carrier size");
  const bool weighted = weight.size() != 0;
  if (weighted && weight.size() != model.size())
    throw IncompatibleOperands("weight differs from carrier size");
  if (!(p > 0.0)) throw InvalidParameter("exponent must be positive");
  const Eigen::ArrayXd fw = weighted ? (abs_values.array() * weight.array()).eval() : abs_values.array().eval();
  if (std::isinf(p)) return fw.size() ? fw.maxCoeff() : 0.0;
  const double sum = (fw.pow(p) * model.haar_weights().array()).sum();
  return std::pow(sum, 1.0 / p);
}

RealFunction indicator(const ModelPtr& model, const std::vector<Index>& set) {
  RealFunction out(model);
  for (Index x : set) {
    model->check_point(x);
    out.values(x) = 1.0;
  }
  return out;
}

RealFunction indicator_q(const ModelPtr& model) { return indicator(model, model->q_neighborhood()); }

RealFunction normalized_delta(const ModelPtr& model, Index x) {
  model->check_point(x);
  RealFunction out(model);
  out.values(x) = 1.0 / model->haar(x);
  return out;
}

ComplexFunction to_complex(const RealFunction& f) {
  return ComplexFunction(f.model, f.values.cast<Complex>());
}

ConvolutionReport convolution_relation_check(const ComplexFunction& f1, const ComplexFunction& f2,
                                             const QuasiNormSpec& y, const PWeight& w, bool twisted) {
  require_same_model(f1.model, f2.model);
  require_same_model(f1.model, w.model());
  ConvolutionReport rep;
  const ComplexFunction conv = twisted ? twisted_convolve(f1, f2) : convolve(f1, f2);
  rep.lhs = lpw_norm(conv, y.as(Flavor::plain));
  rep.left_factor = amalgam_norm(f1, y.as(Flavor::left));
  rep.right_factor = amalgam_norm(f2, QuasiNormSpec{w.p(), w.values(), Flavor::right});
  rep.rhs_product = rep.left_factor * rep.right_factor;
  rep.empirical_constant = rep.rhs_product > 0.0 ? rep.lhs / rep.rhs_product : 0.0;

  const RealFunction a1 = abs(f1), a2 = abs(f2);
  const RealFunction left_lhs = maximal_left(conv);
  const RealFunction left_rhs = convolve(a1, maximal_left(f2));
  const RealFunction right_lhs = maximal_right(conv);
  const RealFunction right_rhs = convolve(maximal_right(f1), a2);
  rep.max_left_excess = (left_lhs.values - left_rhs.values).maxCoeff();
  rep.max_right_excess = (right_lhs.values - right_rhs.values).maxCoeff();
  if (f1.model->is_exact()) {
    const double scale = 1e-12 * (1.0 + left_rhs.values.maxCoeff() + right_rhs.values.maxCoeff());
    rep.pointwise_ok = rep.max_left_excess <= scale && rep.max_right_excess <= scale;
  }
  return rep;
}

EmbeddingReport embedding_constant_check(const std::vector<ComplexFunction>& samples, double p_from,
                                         double p_to, const PWeight& w) {
  if (!(p_from <= p_to)) throw InvalidParameter("embedding needs p_from <= p_to");
  EmbeddingReport rep;
  for (const auto& f : samples) {
    require_same_model(f.model, w.model());
    const double den = amalgam_norm(f, QuasiNormSpec{p_from, w.values(), Flavor::left});
    const double num = lpw_norm(f, QuasiNormSpec{p_to, w.values(), Flavor::plain});
    if (den == 0.0) {
      if (num > 0.0) rep.finite = false;
      continue;
    }
    rep.max_ratio = std::max(rep.max_ratio, num / den);
  }
  rep.finite = rep.finite && std::isfinite(rep.max_ratio);
  return rep;
}

namespace {

template <typename Scalar>
void write_csv_impl(const GridFunction<Scalar>& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "c0,c1,re,im\n" << std::setprecision(17);
  for (Index x = 0; x < f.size(); ++x) {
    const Eigen::Vector2d c = f.model->coords(x);
    const Complex v(f.values(x));
    out << c(0) << ',' << c(1) << ',' << v.real() << ',' << v.imag() << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace

void write_csv(const ComplexFunction& f, const std::string& path) { write_csv_impl(f, path); }
void write_csv(const RealFunction& f, const std::string& path) { write_csv_impl(f, path); }

}  // namespace coorbit
