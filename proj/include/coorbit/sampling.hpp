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

#include <cstdint>
#include <vector>

#include "coorbit/amalgam.hpp"

namespace coorbit {

/// Ordered, duplicate-free list of carrier points.
class SampleSet {
 public:
  SampleSet() = default;
  /// Throws InvalidPoint on out-of-range or repeated indices.
  SampleSet(ModelPtr model, std::vector<Index> points);

  const ModelPtr& model() const { return model_; }
  const std::vector<Index>& points() const { return points_; }
  Index size() const { return static_cast<Index>(points_.size()); }
  Index operator[](Index i) const { return points_[static_cast<std::size_t>(i)]; }
  bool empty() const { return points_.empty(); }

 private:
  ModelPtr model_;
  std::vector<Index> points_;
};

/// (step Z_N) x (step Z_N) on a cyclic model, in carrier order.
SampleSet cyclic_lattice(const ModelPtr& model, int step);
/// Every carrier point.
SampleSet full_sample(const ModelPtr& model);

/// Partition of the (reachable) carrier with cells U_i inside lambda_i U.
struct DisjointCover {
  SampleSet sample;
  std::vector<std::vector<Index>> cells;

  double cell_measure(Index i) const;
  Eigen::VectorXd measures() const;
};

/// {u v : u in U, v in V} over defined products.
Neighborhood product_set(const GroupModel& model, const Neighborhood& u, const Neighborhood& v);
/// {u^{-1} : u in U} over defined inverses.
Neighborhood inverse_set(const GroupModel& model, const Neighborhood& u);

/// sup_x #{i : lambda_i in xQ}
int rel_separation(const SampleSet& sample);

/// Points on which density is asserted: the whole carrier on exact models,
/// otherwise the coordinate bounding box of the sample.
std::vector<char> reachable_mask(const SampleSet& sample);

bool is_U_dense(const SampleSet& sample, const Neighborhood& u);
bool is_U_separated(const SampleSet& sample, const Neighborhood& u);

/// Greedy cover in list order. Throws NotDense naming an uncovered point.
DisjointCover build_cover(const SampleSet& sample, const Neighborhood& u);

/// Greedy U-separated family scanned in carrier order.
SampleSet max_separated_subset(const ModelPtr& model, const Neighborhood& u);

struct ShiftedSeriesReport {
  double max_ratio = 0.0;   // lhs / rhs where rhs > 0
  double max_excess = 0.0;  // max of lhs - rhs
  Index pairs_checked = 0;
  bool holds = true;
};

/// Checks sum_i F1(lambda_i^{-1} x) F2(y^{-1} lambda_i) <= rel/mu(Q) (M^L F2 * M^R F1)(y^{-1} x)
/// at every pair on exact models, or at max_pairs random pairs otherwise.
ShiftedSeriesReport shifted_series_check(const RealFunction& f1, const RealFunction& f2,
                                         const SampleSet& sample, Index max_pairs = 20000,
                                         std::uint64_t seed = 7);

}  // namespace coorbit
