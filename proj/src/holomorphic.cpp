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

#include "coorbit/holomorphic.hpp"

#include <cmath>
#include <sstream>

#include "coorbit/errors.hpp"

namespace coorbit {

std::string to_string(HoloFunction phi) {
  return phi == HoloFunction::inverse ? "inverse" : "inverse_sqrt";
}

HoloFunction holo_function_from_string(const std::string& name) {
  if (name == "inverse") return HoloFunction::inverse;
  if (name == "inverse_sqrt") return HoloFunction::inverse_sqrt;
  throw InvalidParameter("unknown function '" + name + "'");
}

namespace {

double next_coefficient(HoloFunction phi, double a, int n) {
  if (phi == HoloFunction::inverse) return -a;
  return a * (-0.5 - n) / (n + 1);
}

}  // namespace

std::vector<double> series_coefficients(HoloFunction phi, int count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  double a = 1.0;
  for (int n = 0; n < count; ++n) {
    out.push_back(a);
    a = next_coefficient(phi, a, n);
  }
  return out;
}

SeriesPlan plan_series(HoloFunction phi, double q, double tail_tol) {
  if (!(q < 1.0)) {
    std::ostringstream os;
    os << "||S - I|| = " << q << " is not below 1";
    throw NotContractive(os.str());
  }
  if (!(tail_tol > 0.0)) throw InvalidParameter("tail tolerance must be positive");
  SeriesPlan plan;
  plan.contraction = q;
  if (q == 0.0) return plan;
  // |a_n| is nonincreasing for both functions, so |a_n| q^{n+1} / (1 - q)
  // bounds everything after the n-th term.
  double a = 1.0;
  double qn = 1.0;
  for (int n = 0; n < 100000; ++n) {
    const double tail = std::abs(a) * qn * q / (1.0 - q);
    if (tail <= tail_tol) {
      plan.terms = n + 1;
      plan.tail_bound = tail;
      return plan;
    }
    a = next_coefficient(phi, a, n);
    qn *= q;
  }
  throw NotContractive("series did not reach the tail tolerance");
}

double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

HolomorphicResult holomorphic_apply(const CMatrix& s, HoloFunction phi, double eps_bound,
                                    double tail_tol) {
  if (s.rows() != s.cols()) throw InvalidParameter("holomorphic calculus needs a square matrix");
  const Eigen::Index n = s.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  const CMatrix b = s - id;
  const double q = spectral_norm(b);
  if (q > eps_bound || !(q < 1.0)) {
    std::ostringstream os;
    os << "||S - I|| = " << q << " exceeds the contraction bound " << std::min(eps_bound, 1.0);
    throw NotContractive(os.str());
  }
  const SeriesPlan plan = plan_series(phi, q, tail_tol);
  const auto coeff = series_coefficients(phi, plan.terms);
  CMatrix r = coeff.back() * id;
  for (int k = plan.terms - 2; k >= 0; --k) r = b * r + coeff[static_cast<std::size_t>(k)] * id;
  return {std::move(r), plan.terms, q, plan.tail_bound};
}

CMatrix hermitian_function(const CMatrix& s, HoloFunction phi) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s);
  if (es.info() != Eigen::Success) throw NotAFrame("eigendecomposition failed");
  const Eigen::VectorXd ev = es.eigenvalues();
  if (ev.size() && !(ev.minCoeff() > 0.0)) throw NotAFrame("matrix is not positive definite");
  const Eigen::VectorXd f =
      phi == HoloFunction::inverse ? ev.cwiseInverse().eval() : ev.cwiseSqrt().cwiseInverse().eval();
  return es.eigenvectors() * f.cast<std::complex<double>>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace coorbit
