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

#include "coorbit/cd_matrix.hpp"

#include <sstream>

namespace coorbit {

CDMatrix::CDMatrix(SampleSet r, SampleSet c, CMatrix e, std::optional<Envelope> env)
    : rows(std::move(r)), cols(std::move(c)), entries(std::move(e)), envelope(std::move(env)) {
  require_same_model(rows.model(), cols.model());
  if (entries.rows() != rows.size() || entries.cols() != cols.size())
    throw IncompatibleOperands("matrix shape differs from its index sets");
  if (envelope) require_same_model(envelope->phi.model, rows.model());
}

EnvelopeCheck verify_envelope(const CDMatrix& a, const RealFunction& phi, double tol) {
  require_same_model(phi.model, a.rows.model());
  const GroupModel& m = *phi.model;
  EnvelopeCheck out;
  for (Index i = 0; i < a.rows.size(); ++i) {
    const Index li = m.inv(a.rows[i]);
    for (Index j = 0; j < a.cols.size(); ++j) {
      const Index gj = m.inv(a.cols[j]);
      const Index z1 = gj == kAbsent ? kAbsent : m.mul(gj, a.rows[i]);
      const Index z2 = li == kAbsent ? kAbsent : m.mul(li, a.cols[j]);
      if (z1 == kAbsent && z2 == kAbsent) {
        ++out.unbinned;
        continue;
      }
      double bound = kInfinity;
      if (z1 != kAbsent) bound = std::min(bound, phi.values(z1));
      if (z2 != kAbsent) bound = std::min(bound, phi.values(z2));
      const double excess = std::abs(a.entries(i, j)) - bound;
      out.max_excess = std::max(out.max_excess, excess);
      if (excess > tol) out.holds = false;
    }
  }
  return out;
}

RealFunction minimal_envelope(const CDMatrix& a, bool strict) {
  const ModelPtr& model = a.rows.model();
  const GroupModel& m = *model;
  RealFunction phi0(model);
  for (Index j = 0; j < a.cols.size(); ++j) {
    const Index gj = m.inv(a.cols[j]);
    for (Index i = 0; i < a.rows.size(); ++i) {
      const double v = std::abs(a.entries(i, j));
      const Index z = gj == kAbsent ? kAbsent : m.mul(gj, a.rows[i]);
      if (z == kAbsent) {
        if (strict && v > 0.0) {
          std::ostringstream os;
          os << "relative position of entry (" << i << ", " << j << ") has no carrier bin";
          throw CoverageWarning(os.str());
        }
        continue;
      }
      phi0.values(z) = std::max(phi0.values(z), v);
    }
  }
  RealFunction phi = phi0;
  phi.values = phi0.values.cwiseMax(involution(phi0).values);
  return phi;
}

CDMatrix with_minimal_envelope(CDMatrix a, double p, Eigen::VectorXd weight, std::string weight_id) {
  a.envelope = Envelope{minimal_envelope(a), p, std::move(weight), std::move(weight_id)};
  return a;
}

SchurBounds schur_bounds(const CDMatrix& a) {
  if (!a.envelope) throw NoCertificate("matrix carries no envelope");
  const RealFunction& phi = a.envelope->phi;
  const GroupModel& m = *phi.model;
  const double wl1 = lpw_norm(maximal_left(phi), QuasiNormSpec::lebesgue(1.0));
  SchurBounds out;
  out.row_sum_bound = rel_separation(a.cols) / m.q_measure() * wl1;
  out.col_sum_bound = rel_separation(a.rows) / m.q_measure() * wl1;
  out.op_bound_l2 = std::sqrt(out.row_sum_bound * out.col_sum_bound);
  if (a.entries.size() > 0) {
    const Eigen::MatrixXd mag = a.entries.cwiseAbs();
    out.measured_row_sum = mag.rowwise().sum().maxCoeff();
    out.measured_col_sum = mag.colwise().sum().maxCoeff();
    out.measured_l2 = spectral_norm(a.entries);
  }
  return out;
}

RealFunction product_envelope(const RealFunction& theta, const RealFunction& phi, int rel_middle) {
  require_same_model(theta.model, phi.model);
  const double factor = rel_middle / theta.model->q_measure();
  RealFunction h = convolve(maximal_left(theta), maximal_right(phi));
  h.values += convolve(maximal_left(phi), maximal_right(theta)).values;
  h.values *= factor;
  h.values = h.values.cwiseMax(involution(h).values);
  return h;
}

CDMatrix product_with_envelope(const CDMatrix& a, const CDMatrix& b) {
  require_same_model(a.rows.model(), b.rows.model());
  if (a.cols.points() != b.rows.points()) throw IncompatibleOperands("inner index sets differ");
  if (!a.envelope || !b.envelope) throw NoCertificate("product needs envelopes on both factors");
  Envelope env = *a.envelope;
  env.phi = product_envelope(a.envelope->phi, b.envelope->phi, rel_separation(a.cols));
  return CDMatrix(a.rows, b.cols, a.entries * b.entries, std::move(env));
}

MatrixHolomorphicResult matrix_holomorphic(const CDMatrix& a, HoloFunction phi, double tail_tol) {
  if (a.rows.points() != a.cols.points()) throw IncompatibleOperands("holomorphic calculus needs a square index set");
  const HolomorphicResult series = holomorphic_apply(a.entries, phi, 1.0, tail_tol);

  const Index n = a.entries.rows();
  const CDMatrix id(a.rows, a.cols, CMatrix::Identity(n, n));
  const CDMatrix b(a.rows, a.cols, a.entries - id.entries);
  const RealFunction theta = minimal_envelope(b);
  const int rel = rel_separation(a.rows);
  const auto coeff = series_coefficients(phi, series.terms);

  RealFunction psi = minimal_envelope(id);
  psi.values *= std::abs(coeff[0]);
  RealFunction theta_n = theta;
  double qn = series.contraction;
  for (int k = 1; k < series.terms; ++k) {
    if (k > 1) {
      theta_n = product_envelope(theta_n, theta, rel);
      qn *= series.contraction;
    }
    theta_n.values = theta_n.values.cwiseMin(qn);
    psi.values += std::abs(coeff[static_cast<std::size_t>(k)]) * theta_n.values;
  }
  psi.values.array() += series.tail_bound;

  Envelope env;
  env.phi = std::move(psi);
  if (a.envelope) {
    env.p = a.envelope->p;
    env.weight = a.envelope->weight;
    env.weight_id = a.envelope->weight_id;
  }
  return {CDMatrix(a.rows, a.cols, series.value, std::move(env)), series.terms, series.contraction,
          series.tail_bound};
}

nlohmann::json to_json(const CDMatrix& a) {
  nlohmann::json j;
  j["rows"] = a.rows.points();
  j["cols"] = a.cols.points();
  std::vector<std::vector<double>> re, im;
  for (Index i = 0; i < a.entries.rows(); ++i) {
    std::vector<double> r, c;
    for (Index k = 0; k < a.entries.cols(); ++k) {
      r.push_back(a.entries(i, k).real());
      c.push_back(a.entries(i, k).imag());
    }
    re.push_back(std::move(r));
    im.push_back(std::move(c));
  }
  j["entries"] = {{"re", re}, {"im", im}};
  if (a.envelope) {
    const auto& v = a.envelope->phi.values;
    j["envelope"] = std::vector<double>(v.data(), v.data() + v.size());
    j["context"] = {{"p", a.envelope->p}, {"weight_id", a.envelope->weight_id}};
  } else {
    j["envelope"] = nullptr;
  }
  return j;
}

}  // namespace coorbit
