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

#include "coorbit/group_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "coorbit/errors.hpp"

namespace coorbit {

namespace {

constexpr double kCoordTol = 1e-9;

Index wrap(long long v, int n) {
  long long r = v % n;
  return static_cast<Index>(r < 0 ? r + n : r);
}

int cyclic_distance(Index k, int n) {
  const auto kk = static_cast<int>(k);
  return std::min(kk, n - kk);
}

}  // namespace

Index GroupModel::mul(Index x, Index y) const {
  switch (kind_) {
    case ModelKind::cyclic: {
      const Index k = (x / n_ + y / n_) % n_;
      const Index l = (x % n_ + y % n_) % n_;
      return k * n_ + l;
    }
    case ModelKind::line: {
      const Index j = (x - mx_) + (y - mx_);
      return (j < -mx_ || j > mx_) ? kAbsent : j + mx_;
    }
    case ModelKind::affine: {
      const Index r1 = x / nx_, r2 = y / nx_;
      const Index r = r1 + r2 + ma_lo_;  // (m1 - lo) + (m2 - lo) + lo - lo
      if (r < 0 || r > ma_hi_ - ma_lo_) return kAbsent;
      const double j1 = static_cast<double>(x % nx_ - mx_);
      const double j2 = static_cast<double>(y % nx_ - mx_);
      const auto j = static_cast<Index>(std::llround(j1 + a_pow_(r1) * j2));
      if (j < -mx_ || j > mx_) return kAbsent;
      return r * nx_ + j + mx_;
    }
  }
  return kAbsent;
}

Index GroupModel::inv(Index x) const {
  switch (kind_) {
    case ModelKind::cyclic:
      return wrap(-(x / n_), n_) * n_ + wrap(-(x % n_), n_);
    case ModelKind::line:
      return 2 * mx_ - x;
    case ModelKind::affine: {
      const Index row = x / nx_;
      const Index r = -(row + ma_lo_) - ma_lo_;
      if (r < 0 || r > ma_hi_ - ma_lo_) return kAbsent;
      const double j1 = static_cast<double>(x % nx_ - mx_);
      const auto j = static_cast<Index>(std::llround(-j1 / a_pow_(row)));
      if (j < -mx_ || j > mx_) return kAbsent;
      return r * nx_ + j + mx_;
    }
  }
  return kAbsent;
}

Complex GroupModel::cocycle(Index x, Index y) const {
  if (kind_ != ModelKind::cyclic) return {1.0, 0.0};
  // pi(k,l) f(t) = e^{2 pi i l t / N} f(t - k) gives sigma = e^{-2 pi i k l' / N}
  const long long m = (static_cast<long long>(x / n_) * (y % n_)) % n_;
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(m) / n_;
  return {std::cos(angle), std::sin(angle)};
}

Index GroupModel::locate(double c0, double c1) const {
  switch (kind_) {
    case ModelKind::cyclic:
      return wrap(std::llround(c0), n_) * n_ + wrap(std::llround(c1), n_);
    case ModelKind::line: {
      const auto j = static_cast<Index>(std::llround(c0 / step_));
      return (j < -mx_ || j > mx_) ? kAbsent : j + mx_;
    }
    case ModelKind::affine: {
      if (!(c1 > 0.0)) return kAbsent;
      const auto m = static_cast<Index>(std::llround(std::log(c1) / std::log(ratio_)));
      const auto j = static_cast<Index>(std::llround(c0 / step_));
      if (m < ma_lo_ || m > ma_hi_ || j < -mx_ || j > mx_) return kAbsent;
      return (m - ma_lo_) * nx_ + j + mx_;
    }
  }
  return kAbsent;
}

void GroupModel::check_point(Index x) const {
  if (x < 0 || x >= size()) {
    std::ostringstream os;
    os << "point index " << x << " outside carrier of size " << size();
    throw InvalidPoint(os.str());
  }
}

std::string GroupModel::name() const {
  switch (kind_) {
    case ModelKind::cyclic: return "cyclic";
    case ModelKind::line: return "line";
    case ModelKind::affine: return "affine";
  }
  return "unknown";
}

nlohmann::json GroupModel::parameters() const {
  switch (kind_) {
    case ModelKind::cyclic:
      return {{"model", "cyclic"}, {"N", n_}};
    case ModelKind::line:
      return {{"model", "line"}, {"half_width", half_width_}, {"step", step_}};
    case ModelKind::affine:
      return {{"model", "affine"},
              {"x_half_width", affine_params_.x_half_width},
              {"x_step", affine_params_.x_step},
              {"a_min", affine_params_.a_min},
              {"a_max", affine_params_.a_max},
              {"a_ratio", affine_params_.a_ratio}};
  }
  return {};
}

void GroupModel::finalize_q() {
  const Index n = size();
  in_q_.assign(static_cast<std::size_t>(n), 0);
  q_measure_ = 0.0;
  for (Index x = 0; x < n; ++x) {
    const Eigen::Vector2d c = coords(x);
    bool inside = false;
    switch (kind_) {
      case ModelKind::cyclic: {
        const int dk = cyclic_distance(static_cast<Index>(c(0)), n_);
        const int dl = cyclic_distance(static_cast<Index>(c(1)), n_);
        inside = dk <= 1 && dl <= 1;
        break;
      }
      case ModelKind::line:
        inside = std::abs(c(0)) < 1.0 - kCoordTol;
        break;
      case ModelKind::affine:
        inside = std::abs(c(0)) < 1.0 - kCoordTol && c(1) > 0.5 * (1.0 + kCoordTol) &&
                 c(1) < 2.0 * (1.0 - kCoordTol);
        break;
    }
    if (inside) {
      in_q_[static_cast<std::size_t>(x)] = 1;
      q_.push_back(x);
      q_measure_ += haar_(x);
    }
  }
}

ModelPtr build_cyclic_phase_space(int n) {
  if (n < 1) throw InvalidParameter("cyclic phase space needs N >= 1");
  auto model = std::shared_ptr<GroupModel>(new GroupModel());
  model->kind_ = ModelKind::cyclic;
  model->n_ = n;
  const Index size = static_cast<Index>(n) * n;
  model->coords_.resize(size, 2);
  for (Index x = 0; x < size; ++x) {
    model->coords_(x, 0) = static_cast<double>(x / n);
    model->coords_(x, 1) = static_cast<double>(x % n);
  }
  model->haar_ = Eigen::VectorXd::Constant(size, 1.0 / n);
  model->modular_ = Eigen::VectorXd::Ones(size);
  model->identity_ = 0;
  model->finalize_q();
  return model;
}

ModelPtr build_real_line(double half_width, double step) {
  if (!(step > 0.0) || !(half_width > 0.0) || step > half_width)
    throw InvalidParameter("real line needs half_width > 0 and 0 < step <= half_width");
  auto model = std::shared_ptr<GroupModel>(new GroupModel());
  model->kind_ = ModelKind::line;
  model->step_ = step;
  model->half_width_ = half_width;
  model->mx_ = static_cast<Index>(std::floor(half_width / step + kCoordTol));
  model->nx_ = 2 * model->mx_ + 1;
  model->coords_.resize(model->nx_, 2);
  for (Index x = 0; x < model->nx_; ++x) {
    model->coords_(x, 0) = static_cast<double>(x - model->mx_) * step;
    model->coords_(x, 1) = 0.0;
  }
  model->haar_ = Eigen::VectorXd::Constant(model->nx_, step);
  model->modular_ = Eigen::VectorXd::Ones(model->nx_);
  model->identity_ = model->mx_;
  model->finalize_q();
  return model;
}

ModelPtr build_affine_grid(const AffineGridParams& params) {
  if (!(params.a_min > 0.0) || !(params.a_min < 1.0) || !(params.a_max > 1.0) ||
      params.a_min >= params.a_max)
    throw InvalidParameter("affine grid needs 0 < a_min < 1 < a_max");
  if (!(params.a_ratio > 1.0)) throw InvalidParameter("affine grid needs a_ratio > 1");
  if (!(params.x_step > 0.0) || !(params.x_half_width >= params.x_step))
    throw InvalidParameter("affine grid needs 0 < x_step <= x_half_width");

  auto model = std::shared_ptr<GroupModel>(new GroupModel());
  model->kind_ = ModelKind::affine;
  model->affine_params_ = params;
  model->step_ = params.x_step;
  model->ratio_ = params.a_ratio;
  model->half_width_ = params.x_half_width;
  const double lr = std::log(params.a_ratio);
  model->ma_lo_ = static_cast<Index>(std::ceil(std::log(params.a_min) / lr - kCoordTol));
  model->ma_hi_ = static_cast<Index>(std::floor(std::log(params.a_max) / lr + kCoordTol));
  model->mx_ = static_cast<Index>(std::floor(params.x_half_width / params.x_step + kCoordTol));
  model->nx_ = 2 * model->mx_ + 1;

  const Index rows = model->ma_hi_ - model->ma_lo_ + 1;
  const Index size = rows * model->nx_;
  model->a_pow_.resize(rows);
  for (Index r = 0; r < rows; ++r)
    model->a_pow_(r) = std::pow(params.a_ratio, static_cast<double>(r + model->ma_lo_));
  model->coords_.resize(size, 2);
  model->haar_.resize(size);
  model->modular_.resize(size);
  for (Index r = 0; r < rows; ++r) {
    const double a = model->a_pow_(r);
    for (Index j = 0; j < model->nx_; ++j) {
      const Index x = r * model->nx_ + j;
      model->coords_(x, 0) = static_cast<double>(j - model->mx_) * params.x_step;
      model->coords_(x, 1) = a;
      model->haar_(x) = params.x_step * lr / a;
      model->modular_(x) = 1.0 / a;
    }
  }
  model->identity_ = (-model->ma_lo_) * model->nx_ + model->mx_;
  model->finalize_q();
  return model;
}

ModelPtr build_model(const nlohmann::json& config) {
  const std::string kind = config.value("model", std::string{});
  try {
    if (kind == "cyclic") return build_cyclic_phase_space(config.at("N").get<int>());
    if (kind == "line")
      return build_real_line(config.at("half_width").get<double>(), config.at("step").get<double>());
    if (kind == "affine") {
      AffineGridParams p;
      p.x_half_width = config.value("x_half_width", p.x_half_width);
      p.x_step = config.value("x_step", p.x_step);
      p.a_min = config.value("a_min", p.a_min);
      p.a_max = config.value("a_max", p.a_max);
      p.a_ratio = config.value("a_ratio", p.a_ratio);
      return build_affine_grid(p);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("model config: ") + e.what());
  }
  throw InvalidParameter("unknown model kind '" + kind + "'");
}

Neighborhood block_neighborhood(const GroupModel& model, int lo, int hi) {
  if (model.kind() != ModelKind::cyclic) throw InvalidParameter("block neighborhood needs a cyclic model");
  if (lo > 0 || hi < 0) throw InvalidParameter("block neighborhood must contain the identity");
  std::vector<char> seen(static_cast<std::size_t>(model.size()), 0);
  Neighborhood out;
  for (int k = lo; k <= hi; ++k)
    for (int l = lo; l <= hi; ++l) {
      const Index x = model.locate(k, l);
      if (!seen[static_cast<std::size_t>(x)]) {
        seen[static_cast<std::size_t>(x)] = 1;
        out.push_back(x);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

Neighborhood interval_neighborhood(const GroupModel& model, double radius) {
  if (model.kind() != ModelKind::line) throw InvalidParameter("interval neighborhood needs a line model");
  Neighborhood out;
  for (Index x = 0; x < model.size(); ++x)
    if (std::abs(model.coords(x)(0)) < radius - kCoordTol) out.push_back(x);
  if (out.empty()) out.push_back(model.identity());
  return out;
}

Neighborhood full_neighborhood(const GroupModel& model) {
  Neighborhood out(static_cast<std::size_t>(model.size()));
  for (Index x = 0; x < model.size(); ++x) out[static_cast<std::size_t>(x)] = x;
  return out;
}

double default_weight_tolerance(const GroupModel& model) {
  return model.is_exact() ? 1e-12 : 1e-8;
}

PWeightReport validate_p_weight(const GroupModel& model, const Eigen::VectorXd& w, double p,
                                double tol) {
  if (w.size() != model.size()) throw InvalidWeight("weight length differs from carrier size");
  if (!(p > 0.0) || p > 1.0) throw InvalidParameter("p must lie in (0, 1]");
  if (!(w.array() > 0.0).all() || !w.allFinite()) throw InvalidWeight("weight must be positive and finite");
  if (tol < 0.0) tol = default_weight_tolerance(model);

  PWeightReport rep;
  const Index n = model.size();
  rep.min_value = w.minCoeff();
  rep.w1 = rep.min_value >= 1.0 - tol;

  double worst = 0.0;
  for (Index x = 0; x < n; ++x)
    for (Index y = 0; y < n; ++y) {
      const Index z = model.mul(x, y);
      if (z == kAbsent) continue;
      worst = std::max(worst, w(z) / (w(x) * w(y)));
    }
  rep.max_submultiplicative_ratio = worst;
  rep.w2 = worst <= 1.0 + tol;

  double dev = 0.0;
  for (Index x = 0; x < n; ++x) {
    const Index xi = model.inv(x);
    if (xi == kAbsent) continue;
    const double mirrored = w(xi) * std::pow(model.modular(xi), 1.0 / p);
    dev = std::max(dev, std::abs(w(x) - mirrored) / w(x));
  }
  rep.max_symmetry_deviation = dev;
  rep.w3 = dev <= tol;
  return rep;
}

PWeight::PWeight(ModelPtr model, Eigen::VectorXd values, double p, std::string id)
    : model_(std::move(model)), values_(std::move(values)), p_(p), id_(std::move(id)) {
  if (!model_) throw InvalidParameter("weight needs a model");
  const PWeightReport rep = validate_p_weight(*model_, values_, p_);
  if (!rep.pass()) {
    std::ostringstream os;
    os << "not a " << p_ << "-weight: min=" << rep.min_value
       << " submult=" << rep.max_submultiplicative_ratio
       << " symmetry=" << rep.max_symmetry_deviation;
    throw InvalidWeight(os.str());
  }
}

PWeight PWeight::unit(ModelPtr model, double p) {
  const Index n = model->size();
  return PWeight(std::move(model), Eigen::VectorXd::Ones(n), p, "unit");
}

PWeight symmetrize_weight(ModelPtr model, const Eigen::VectorXd& w0, double p, std::string id) {
  if (w0.size() != model->size()) throw InvalidWeight("weight length differs from carrier size");
  const double tol = default_weight_tolerance(*model);
  if (!(w0.array() >= 1.0 - tol).all()) throw InvalidWeight("raw weight must be >= 1");
  const PWeightReport rep = validate_p_weight(*model, w0, p);
  if (!rep.w2) throw InvalidWeight("raw weight is not submultiplicative");
  Eigen::VectorXd w = w0;
  for (Index x = 0; x < model->size(); ++x) {
    const Index xi = model->inv(x);
    if (xi == kAbsent) continue;
    w(x) = std::max(w0(x), w0(xi) * std::pow(model->modular(xi), 1.0 / p));
  }
  return PWeight(std::move(model), std::move(w), p, std::move(id));
}

Eigen::VectorXd polynomial_weight(const GroupModel& model, double s) {
  if (model.kind() != ModelKind::cyclic) throw InvalidParameter("polynomial weight needs a cyclic model");
  const int n = model.cyclic_order();
  Eigen::VectorXd w(model.size());
  for (Index x = 0; x < model.size(); ++x)
    w(x) = std::pow(1.0 + cyclic_distance(x / n, n) + cyclic_distance(x % n, n), s);
  return w;
}

double measure_QxQ(const GroupModel& model, Index x) {
  model.check_point(x);
  const auto& q = model.q_neighborhood();
  std::vector<char> hit(static_cast<std::size_t>(model.size()), 0);
  const Eigen::Vector2d cx = model.coords(x);
  for (Index q1 : q) {
    const Eigen::Vector2d c1 = model.coords(q1);
    for (Index q2 : q) {
      Index z = kAbsent;
      if (model.kind() == ModelKind::cyclic) {
        z = model.mul(model.mul(q1, x), q2);
      } else {
        const Eigen::Vector2d c2 = model.coords(q2);
        if (model.kind() == ModelKind::line) {
          z = model.locate(c1(0) + cx(0) + c2(0));
        } else {
          z = model.locate(c1(0) + c1(1) * cx(0) + c1(1) * cx(1) * c2(0), c1(1) * cx(1) * c2(1));
        }
      }
      if (z != kAbsent) hit[static_cast<std::size_t>(z)] = 1;
    }
  }
  double total = 0.0;
  for (Index z = 0; z < model.size(); ++z)
    if (hit[static_cast<std::size_t>(z)]) total += model.haar(z);
  return total;
}

}  // namespace coorbit
