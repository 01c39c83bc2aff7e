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

#include "coorbit/sampling.hpp"

#include <sstream>

#include "coorbit/rng.hpp"

namespace coorbit {

namespace {

std::size_t at(Index x) { return static_cast<std::size_t>(x); }

void require_identity(const GroupModel& model, const Neighborhood& u) {
  if (std::find(u.begin(), u.end(), model.identity()) == u.end())
    throw InvalidParameter("neighborhood must contain the identity");
}

}  // namespace

SampleSet::SampleSet(ModelPtr model, std::vector<Index> points)
    : model_(std::move(model)), points_(std::move(points)) {
  if (!model_) throw InvalidParameter("sample set needs a model");
  std::vector<char> seen(at(model_->size()), 0);
  for (Index x : points_) {
    model_->check_point(x);
    if (seen[at(x)]) {
      std::ostringstream os;
      os << "duplicate sample point " << x;
      throw InvalidPoint(os.str());
    }
    seen[at(x)] = 1;
  }
}

SampleSet cyclic_lattice(const ModelPtr& model, int step) {
  if (model->kind() != ModelKind::cyclic) throw InvalidParameter("lattice needs a cyclic model");
  const int n = model->cyclic_order();
  if (step < 1 || n % step != 0) throw InvalidParameter("lattice step must divide N");
  std::vector<Index> pts;
  for (int k = 0; k < n; k += step)
    for (int l = 0; l < n; l += step) pts.push_back(model->locate(k, l));
  return SampleSet(model, std::move(pts));
}

SampleSet full_sample(const ModelPtr& model) { return SampleSet(model, full_neighborhood(*model)); }

double DisjointCover::cell_measure(Index i) const {
  double s = 0.0;
  for (Index x : cells[at(i)]) s += sample.model()->haar(x);
  return s;
}

Eigen::VectorXd DisjointCover::measures() const {
  Eigen::VectorXd out(static_cast<Index>(cells.size()));
  for (Index i = 0; i < out.size(); ++i) out(i) = cell_measure(i);
  return out;
}

Neighborhood product_set(const GroupModel& model, const Neighborhood& u, const Neighborhood& v) {
  std::vector<char> hit(at(model.size()), 0);
  for (Index a : u)
    for (Index b : v) {
      const Index z = model.mul(a, b);
      if (z != kAbsent) hit[at(z)] = 1;
    }
  Neighborhood out;
  for (Index z = 0; z < model.size(); ++z)
    if (hit[at(z)]) out.push_back(z);
  return out;
}

Neighborhood inverse_set(const GroupModel& model, const Neighborhood& u) {
  std::vector<char> hit(at(model.size()), 0);
  for (Index a : u) {
    const Index z = model.inv(a);
    if (z != kAbsent) hit[at(z)] = 1;
  }
  Neighborhood out;
  for (Index z = 0; z < model.size(); ++z)
    if (hit[at(z)]) out.push_back(z);
  return out;
}

int rel_separation(const SampleSet& sample) {
  if (sample.empty()) return 0;
  const GroupModel& m = *sample.model();
  std::vector<char> is_sample(at(m.size()), 0);
  for (Index x : sample.points()) is_sample[at(x)] = 1;
  std::vector<char> seen(at(m.size()), 0);
  int best = 0;
  for (Index x = 0; x < m.size(); ++x) {
    int count = 0;
    std::vector<Index> touched;
    for (Index q : m.q_neighborhood()) {
      const Index z = m.mul(x, q);
      if (z == kAbsent || seen[at(z)]) continue;
      seen[at(z)] = 1;
      touched.push_back(z);
      if (is_sample[at(z)]) ++count;
    }
    for (Index z : touched) seen[at(z)] = 0;
    best = std::max(best, count);
  }
  return best;
}

std::vector<char> reachable_mask(const SampleSet& sample) {
  const GroupModel& m = *sample.model();
  std::vector<char> mask(at(m.size()), m.is_exact() ? 1 : 0);
  if (m.is_exact() || sample.empty()) return mask;
  Eigen::Vector2d lo = m.coords(sample[0]), hi = lo;
  for (Index x : sample.points()) {
    lo = lo.cwiseMin(m.coords(x));
    hi = hi.cwiseMax(m.coords(x));
  }
  const double slack = 1e-9;
  for (Index x = 0; x < m.size(); ++x) {
    const Eigen::Vector2d c = m.coords(x);
    mask[at(x)] = (c.array() >= lo.array() - slack * (1.0 + lo.array().abs())).all() &&
                  (c.array() <= hi.array() + slack * (1.0 + hi.array().abs())).all();
  }
  return mask;
}

namespace {

std::vector<char> covered_by(const SampleSet& sample, const Neighborhood& u) {
  const GroupModel& m = *sample.model();
  std::vector<char> hit(at(m.size()), 0);
  for (Index lam : sample.points())
    for (Index v : u) {
      const Index z = m.mul(lam, v);
      if (z != kAbsent) hit[at(z)] = 1;
    }
  return hit;
}

Index first_uncovered(const SampleSet& sample, const Neighborhood& u) {
  const auto hit = covered_by(sample, u);
  const auto mask = reachable_mask(sample);
  for (Index x = 0; x < sample.model()->size(); ++x)
    if (mask[at(x)] && !hit[at(x)]) return x;
  return kAbsent;
}

}  // namespace

bool is_U_dense(const SampleSet& sample, const Neighborhood& u) {
  require_identity(*sample.model(), u);
  return first_uncovered(sample, u) == kAbsent;
}

bool is_U_separated(const SampleSet& sample, const Neighborhood& u) {
  const GroupModel& m = *sample.model();
  require_identity(m, u);
  std::vector<Index> owner(at(m.size()), kAbsent);
  for (Index i = 0; i < sample.size(); ++i)
    for (Index v : u) {
      const Index z = m.mul(sample[i], v);
      if (z == kAbsent) continue;
      if (owner[at(z)] != kAbsent && owner[at(z)] != i) return false;
      owner[at(z)] = i;
    }
  return true;
}

DisjointCover build_cover(const SampleSet& sample, const Neighborhood& u) {
  const GroupModel& m = *sample.model();
  require_identity(m, u);
  const Index missing = first_uncovered(sample, u);
  if (missing != kAbsent) {
    const Eigen::Vector2d c = m.coords(missing);
    std::ostringstream os;
    os << "sample is not U-dense: point " << missing << " at (" << c(0) << ", " << c(1)
       << ") is uncovered";
    throw NotDense(os.str());
  }
  DisjointCover cover{sample, {}};
  cover.cells.resize(at(sample.size()));
  std::vector<char> taken(at(m.size()), 0);
  for (Index i = 0; i < sample.size(); ++i) {
    auto& cell = cover.cells[at(i)];
    for (Index v : u) {
      const Index z = m.mul(sample[i], v);
      if (z == kAbsent || taken[at(z)]) continue;
      taken[at(z)] = 1;
      cell.push_back(z);
    }
    std::sort(cell.begin(), cell.end());
  }
  return cover;
}

SampleSet max_separated_subset(const ModelPtr& model, const Neighborhood& u) {
  const GroupModel& m = *model;
  require_identity(m, u);
  std::vector<char> occupied(at(m.size()), 0);
  std::vector<Index> picked;
  std::vector<Index> cell;
  for (Index x = 0; x < m.size(); ++x) {
    cell.clear();
    bool free = true;
    for (Index v : u) {
      const Index z = m.mul(x, v);
      if (z == kAbsent) continue;
      if (occupied[at(z)]) {
        free = false;
        break;
      }
      cell.push_back(z);
    }
    if (!free) continue;
    for (Index z : cell) occupied[at(z)] = 1;
    picked.push_back(x);
  }
  return SampleSet(model, std::move(picked));
}

ShiftedSeriesReport shifted_series_check(const RealFunction& f1, const RealFunction& f2,
                                         const SampleSet& sample, Index max_pairs, std::uint64_t seed) {
  require_same_model(f1.model, f2.model);
  require_same_model(f1.model, sample.model());
  if ((f1.values.array() < 0.0).any() || (f2.values.array() < 0.0).any())
    throw InvalidParameter("shifted series check needs nonnegative functions");
  const GroupModel& m = *f1.model;
  const Index n = m.size();
  const double factor = rel_separation(sample) / m.q_measure();
  const RealFunction kernel = convolve(maximal_left(f2), maximal_right(f1));

  ShiftedSeriesReport rep;
  auto check = [&](Index x, Index y) {
    const Index yi = m.inv(y);
    if (yi == kAbsent) return;
    const Index yx = m.mul(yi, x);
    if (yx == kAbsent) return;
    double lhs = 0.0;
    for (Index lam : sample.points()) {
      const Index li = m.inv(lam);
      if (li == kAbsent) continue;
      const Index a = m.mul(li, x);
      const Index b = m.mul(yi, lam);
      if (a == kAbsent || b == kAbsent) continue;
      lhs += f1.values(a) * f2.values(b);
    }
    const double rhs = factor * kernel.values(yx);
    rep.max_excess = std::max(rep.max_excess, lhs - rhs);
    if (rhs > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
    ++rep.pairs_checked;
  };
  if (m.is_exact()) {
    for (Index x = 0; x < n; ++x)
      for (Index y = 0; y < n; ++y) check(x, y);
  } else {
    auto rng = make_rng(seed, 0x5e41e5);
    std::uniform_int_distribution<Index> pick(0, n - 1);
    for (Index k = 0; k < max_pairs; ++k) check(pick(rng), pick(rng));
  }
  const double scale = 1e-12 * (1.0 + kernel.values.maxCoeff() * factor);
  rep.holds = rep.max_excess <= scale;
  return rep;
}

}  // namespace coorbit
