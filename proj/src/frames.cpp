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

#include "coorbit/frames.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace coorbit {

namespace {

constexpr double kUnitaryTol = 1e-10;
constexpr double kSingularTol = 1e-12;

Index cyclic_dist(Index t, Index n) { return std::min(t, n - t); }

/// Columns pi(x) g for every carrier point.
CMatrix orbit(const Representation& rep, const CVector& g) {
  const Index n = rep.model()->size();
  CMatrix p(rep.dimension(), n);
  for (Index x = 0; x < n; ++x) p.col(x) = rep.apply(x, g);
  return p;
}

void require_dimension(const Representation& rep, const CVector& v) {
  if (v.size() != rep.dimension()) throw IncompatibleOperands("vector dimension differs from representation");
}

/// Largest column norm of m - I.
double basis_residual(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - CMatrix::Identity(m.rows(), m.cols())).colwise().norm().maxCoeff();
}

double max_entry_residual(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

CMatrix apply_function(const CMatrix& s, HoloFunction phi, SolveMethod method, double tail_tol,
                       AtomFamily& family) {
  const Index n = s.rows();
  family.contraction = spectral_norm(s - CMatrix::Identity(n, n));
  const bool series =
      method == SolveMethod::series || (method == SolveMethod::automatic && family.contraction < 1.0);
  if (series) {
    HolomorphicResult r = holomorphic_apply(s, phi, 1.0, tail_tol);
    family.series_terms = r.terms;
    return std::move(r.value);
  }
  family.series_terms = 0;
  return hermitian_function(s, phi);
}

}  // namespace

Representation::Representation(ModelPtr model, std::vector<CMatrix> action)
    : model_(std::move(model)), action_(std::move(action)) {
  if (!model_) throw InvalidParameter("representation needs a model");
  if (static_cast<Index>(action_.size()) != model_->size())
    throw InvalidParameter("representation needs one matrix per carrier point");
  dim_ = action_.empty() ? 0 : action_.front().rows();
  if (dim_ == 0) throw InvalidParameter("representation needs positive dimension");
  const CMatrix id = CMatrix::Identity(dim_, dim_);
  for (const auto& u : action_) {
    if (u.rows() != dim_ || u.cols() != dim_) throw InvalidParameter("representation matrices must be square");
    if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > kUnitaryTol)
      throw InvalidParameter("representation matrix is not unitary");
  }
  if ((action_[static_cast<std::size_t>(model_->identity())] - id).cwiseAbs().maxCoeff() > kUnitaryTol)
    throw InvalidParameter("identity must act trivially");
}

std::shared_ptr<const Representation> Representation::gabor(const ModelPtr& model) {
  if (model->kind() != ModelKind::cyclic) throw InvalidParameter("Gabor representation needs a cyclic model");
  const int n = model->cyclic_order();
  std::vector<CMatrix> action;
  action.reserve(static_cast<std::size_t>(model->size()));
  for (Index x = 0; x < model->size(); ++x) {
    const Index k = x / n, l = x % n;
    CMatrix u = CMatrix::Zero(n, n);
    for (Index t = 0; t < n; ++t) {
      const double angle = 2.0 * std::numbers::pi * static_cast<double>((l * t) % n) / n;
      u(t, (t - k + n) % n) = Complex(std::cos(angle), std::sin(angle));
    }
    action.push_back(std::move(u));
  }
  return std::make_shared<const Representation>(model, std::move(action));
}

CVector gaussian_window(Index n) {
  if (n < 1) throw InvalidParameter("window length must be positive");
  CVector g(n);
  for (Index t = 0; t < n; ++t) {
    const double d = static_cast<double>(cyclic_dist(t, n));
    g(t) = std::exp(-std::numbers::pi * d * d / static_cast<double>(n));
  }
  return g / g.norm();
}

CVector boxcar_window(Index n, Index half_width) {
  if (n < 1 || half_width < 0) throw InvalidParameter("invalid boxcar parameters");
  CVector g = CVector::Zero(n);
  for (Index t = 0; t < n; ++t)
    if (cyclic_dist(t, n) <= half_width) g(t) = 1.0;
  return g / g.norm();
}

CVector window_by_id(const std::string& id, Index n) {
  if (id == "gaussian") return gaussian_window(n);
  if (id == "boxcar") return boxcar_window(n, std::max<Index>(1, n / 4));
  throw InvalidParameter("unknown window '" + id + "'");
}

ComplexFunction voice_transform(const Representation& rep, const CVector& g, const CVector& f) {
  require_dimension(rep, g);
  require_dimension(rep, f);
  if (g.norm() == 0.0) throw InvalidWindow("window must be nonzero");
  return ComplexFunction(rep.model(), orbit(rep, g).adjoint() * f);
}

AdmissibilityReport check_admissible(const Representation& rep, const CVector& g, double tol) {
  require_dimension(rep, g);
  if (g.norm() == 0.0) throw InvalidWindow("window must be nonzero");
  const CMatrix p = orbit(rep, g);
  const CMatrix a = p * rep.model()->haar_weights().cast<Complex>().asDiagonal() * p.adjoint();
  AdmissibilityReport out;
  out.constant = a.trace().real() / static_cast<double>(rep.dimension());
  out.spread = spectral_norm(a - out.constant * CMatrix::Identity(a.rows(), a.cols()));
  if (out.spread > tol * std::max(1.0, out.constant)) {
    std::ostringstream os;
    os << "admissibility constant depends on f (spread " << out.spread << ")";
    throw ReducibilityWarning(os.str());
  }
  out.is_admissible = std::abs(out.constant - 1.0) <= tol;
  return out;
}

CVector normalize_admissible(const Representation& rep, const CVector& g) {
  const AdmissibilityReport r = check_admissible(rep, g);
  return g / std::sqrt(r.constant);
}

double reproducing_check(const Representation& rep, const CVector& g, const CVector& h, const CVector& f) {
  const ComplexFunction vhf = voice_transform(rep, h, f);
  const ComplexFunction conv = twisted_convolve(voice_transform(rep, g, f), voice_transform(rep, h, g));
  return (vhf.values - conv.values).cwiseAbs().maxCoeff();
}

CMatrix atoms_at(const Representation& rep, const CVector& g, const SampleSet& sample) {
  require_dimension(rep, g);
  require_same_model(rep.model(), sample.model());
  CMatrix a(rep.dimension(), sample.size());
  for (Index i = 0; i < sample.size(); ++i) a.col(i) = rep.apply(sample[i], g);
  return a;
}

MoleculeCertificate fit_envelope(const Representation& rep, const CVector& g, const CMatrix& atoms,
                                 const SampleSet& sample, const PWeight& w) {
  require_dimension(rep, g);
  require_same_model(rep.model(), sample.model());
  require_same_model(rep.model(), w.model());
  if (atoms.cols() != sample.size()) throw IncompatibleOperands("atoms and sample differ in length");
  const ModelPtr& model = rep.model();
  const GroupModel& m = *model;
  const Eigen::MatrixXd v = (orbit(rep, g).adjoint() * atoms).cwiseAbs();

  RealFunction phi0(model);
  for (Index i = 0; i < sample.size(); ++i)
    for (Index z = 0; z < m.size(); ++z) {
      const Index x = m.mul(sample[i], z);
      if (x != kAbsent) phi0.values(z) = std::max(phi0.values(z), v(x, i));
    }
  MoleculeCertificate cert;
  cert.envelope = phi0;
  cert.envelope.values = phi0.values.cwiseMax(involution(phi0).values);
  cert.p = w.p();
  cert.weight = w.values();
  cert.weight_id = w.id();
  cert.amalgam_value = amalgam_norm(cert.envelope, QuasiNormSpec{w.p(), w.values(), Flavor::two_sided});
  for (Index i = 0; i < sample.size(); ++i) {
    const Index li = m.inv(sample[i]);
    if (li == kAbsent) continue;
    for (Index x = 0; x < m.size(); ++x) {
      const Index z = m.mul(li, x);
      if (z != kAbsent) cert.max_violation = std::max(cert.max_violation, v(x, i) - cert.envelope.values(z));
    }
  }
  return cert;
}

std::pair<double, double> frame_bounds(const CMatrix& s) {
  if (s.rows() == 0) return {0.0, 0.0};
  Eigen::SelfAdjointEigenSolver<CMatrix> es(s);
  if (es.info() != Eigen::Success) throw Error("Hermitian eigensolve failed");
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  for (Index k = 0; k < vals.size(); ++k) {
    const double res = (s * vecs.col(k) - vals(k) * vecs.col(k)).norm();
    if (res > 1e-9 * scale) throw Error("eigenpair residual above 1e-9");
  }
  return {vals.minCoeff(), vals.maxCoeff()};
}

FrameSystem build_frame(RepPtr rep, const CVector& g, const SampleSet& sample, Eigen::VectorXd tau) {
  require_dimension(*rep, g);
  if (tau.size() != sample.size()) throw IncompatibleOperands("tau and sample differ in length");
  if ((tau.array() < 0.0).any()) throw InvalidParameter("tau must be nonnegative");
  FrameSystem fs;
  fs.atoms = atoms_at(*rep, g, sample);
  fs.frame_operator = fs.atoms * tau.cast<Complex>().asDiagonal() * fs.atoms.adjoint();
  fs.frame_operator = (0.5 * (fs.frame_operator + fs.frame_operator.adjoint())).eval();
  std::tie(fs.lower, fs.upper) = frame_bounds(fs.frame_operator);
  fs.rep = std::move(rep);
  fs.window = g;
  fs.sample = sample;
  fs.tau = std::move(tau);
  return fs;
}

FrameSystem build_almost_tight_frame(RepPtr rep, const CVector& g, const SampleSet& sample,
                                     const Neighborhood& u) {
  if (sample.empty()) return build_frame(std::move(rep), g, sample, Eigen::VectorXd());
  const DisjointCover cover = build_cover(sample, u);
  return build_frame(std::move(rep), g, sample, cover.measures());
}

AtomFamily dual_frame(const FrameSystem& fs, const PWeight& w, SolveMethod method, double tail_tol) {
  if (!(fs.lower > kSingularTol)) throw NotAFrame("lower frame bound vanishes");
  AtomFamily out;
  const CMatrix scaled = fs.atoms * fs.tau.cast<Complex>().asDiagonal();
  if (method == SolveMethod::direct) {
    out.contraction = spectral_norm(fs.frame_operator - CMatrix::Identity(fs.frame_operator.rows(), fs.frame_operator.cols()));
    out.atoms = fs.frame_operator.llt().solve(scaled);
  } else {
    out.atoms = apply_function(fs.frame_operator, HoloFunction::inverse, method, tail_tol, out) * scaled;
  }
  out.error = basis_residual(out.atoms * fs.atoms.adjoint());
  if (out.error > 1e-9) {
    std::ostringstream os;
    os << "dual reconstruction error " << out.error << " above 1e-9";
    throw NotAFrame(os.str());
  }
  out.certificate = fit_envelope(*fs.rep, fs.window, out.atoms, fs.sample, w);
  return out;
}

AtomFamily parseval_frame(const FrameSystem& fs, const PWeight& w, SolveMethod method, double tail_tol) {
  if (!(fs.lower > kSingularTol)) throw NotAFrame("lower frame bound vanishes");
  AtomFamily out;
  const CMatrix scaled = fs.atoms * fs.tau.cwiseSqrt().cast<Complex>().asDiagonal();
  if (method == SolveMethod::direct) {
    out.contraction = spectral_norm(fs.frame_operator - CMatrix::Identity(fs.frame_operator.rows(), fs.frame_operator.cols()));
    out.atoms = hermitian_function(fs.frame_operator, HoloFunction::inverse_sqrt) * scaled;
  } else {
    out.atoms = apply_function(fs.frame_operator, HoloFunction::inverse_sqrt, method, tail_tol, out) * scaled;
  }
  out.error = spectral_norm(out.atoms * out.atoms.adjoint() - CMatrix::Identity(fs.atoms.rows(), fs.atoms.rows()));
  if (out.error > 1e-8) {
    std::ostringstream os;
    os << "Parseval frame operator deviates from I by " << out.error;
    throw NotAFrame(os.str());
  }
  out.certificate = fit_envelope(*fs.rep, fs.window, out.atoms, fs.sample, w);
  return out;
}

CDMatrix gramian(const Representation& rep, const CVector& g, const SampleSet& sample) {
  const CMatrix a = atoms_at(rep, g, sample);
  CDMatrix gram(sample, sample, a.adjoint() * a);
  return with_minimal_envelope(std::move(gram));
}

std::pair<double, double> riesz_bounds(const CDMatrix& gram) { return frame_bounds(gram.entries); }

namespace {

void require_riesz(const CMatrix& gram) {
  if (gram.rows() == 0) return;
  const auto [lo, hi] = frame_bounds(gram);
  (void)hi;
  if (!(lo > kSingularTol)) {
    std::ostringstream os;
    os << "Gramian is singular (smallest eigenvalue " << lo << ")";
    throw NotRiesz(os.str());
  }
}

}  // namespace

AtomFamily biorthogonal_system(const Representation& rep, const CVector& g, const SampleSet& sample,
                               SolveMethod method, double tail_tol) {
  const CMatrix a = atoms_at(rep, g, sample);
  const CMatrix gram = a.adjoint() * a;
  require_riesz(gram);
  AtomFamily out;
  if (method == SolveMethod::direct) {
    out.atoms = a * gram.llt().solve(CMatrix::Identity(gram.rows(), gram.cols()));
  } else {
    out.atoms = a * apply_function(gram, HoloFunction::inverse, method, tail_tol, out);
  }
  out.error = max_entry_residual(a.adjoint() * out.atoms);
  return out;
}

AtomFamily orthonormalize(const Representation& rep, const CVector& g, const SampleSet& sample,
                          SolveMethod method, double tail_tol) {
  const CMatrix a = atoms_at(rep, g, sample);
  const CMatrix gram = a.adjoint() * a;
  require_riesz(gram);
  AtomFamily out;
  if (method == SolveMethod::direct) {
    out.atoms = a * hermitian_function(gram, HoloFunction::inverse_sqrt);
  } else {
    out.atoms = a * apply_function(gram, HoloFunction::inverse_sqrt, method, tail_tol, out);
  }
  out.error = max_entry_residual(out.atoms.adjoint() * out.atoms);
  return out;
}

KernelEnvelopeReport frame_kernel_envelope_check(const FrameSystem& fs, const PWeight& w) {
  const Representation& rep = *fs.rep;
  const GroupModel& m = *rep.model();
  const CMatrix scaled = fs.atoms * fs.tau.cwiseSqrt().cast<Complex>().asDiagonal();
  const MoleculeCertificate cert = fit_envelope(rep, fs.window, scaled, fs.sample, w);
  const CMatrix v = orbit(rep, fs.window).adjoint() * scaled;
  const CMatrix h = v * v.adjoint();
  const double factor = fs.sample.empty() ? 0.0 : rel_separation(fs.sample) / m.q_measure();
  const RealFunction kernel = convolve(maximal_left(cert.envelope), maximal_right(cert.envelope));

  KernelEnvelopeReport out;
  const double tol = 1e-12 * (1.0 + factor * kernel.values.maxCoeff());
  for (Index y = 0; y < m.size(); ++y) {
    const Index yi = m.inv(y);
    if (yi == kAbsent) continue;
    for (Index x = 0; x < m.size(); ++x) {
      const Index z = m.mul(yi, x);
      if (z == kAbsent) continue;
      const double lhs = std::abs(h(x, y));
      const double rhs = factor * kernel.values(z);
      out.max_excess = std::max(out.max_excess, lhs - rhs);
      if (rhs > 0.0) out.max_ratio = std::max(out.max_ratio, lhs / rhs);
      ++out.pairs_checked;
    }
  }
  out.holds = out.max_excess <= tol;
  return out;
}

DualMajorant dual_majorant(const FrameSystem& fs, double tail_tol) {
  const Representation& rep = *fs.rep;
  const ModelPtr& model = rep.model();
  const GroupModel& m = *model;
  const CVector& g = fs.window;
  const RealFunction phi = abs(voice_transform(rep, g, g));
  const double beta = g.squaredNorm();
  const double tau_max = fs.tau.size() ? fs.tau.maxCoeff() : 0.0;
  const double factor = fs.sample.empty() ? 0.0 : rel_separation(fs.sample) / m.q_measure();

  RealFunction theta = convolve(maximal_left(phi), maximal_right(phi));
  theta.values *= factor * tau_max;
  theta.values = theta.values.cwiseMax(involution(theta).values);

  const Index d = fs.frame_operator.rows();
  const double eps = spectral_norm(fs.frame_operator - CMatrix::Identity(d, d));
  const SeriesPlan plan = plan_series(HoloFunction::inverse, eps, tail_tol);

  RealFunction psi1(model);
  psi1.values = (phi.values + theta.values).cwiseMin(eps * beta);
  DualMajorant out;
  out.contraction = eps;
  out.terms = plan.terms;
  out.tail = plan.tail_bound * beta;
  out.psi = phi;
  RealFunction psi_n = psi1;
  double bound_n = eps * beta;
  for (int k = 1; k < plan.terms; ++k) {
    if (k > 1) {
      psi_n = convolve(psi_n, psi1);
      bound_n *= eps;
      psi_n.values = psi_n.values.cwiseMin(bound_n);
    }
    out.psi.values += psi_n.values;
  }
  out.psi.values.array() += out.tail;
  out.psi.values = out.psi.values.cwiseMax(involution(out.psi).values);
  return out;
}

nlohmann::json frame_report_json(const FrameSystem& fs, const std::string& lattice, const std::string& tau_policy) {
  nlohmann::json j;
  j["lattice"] = lattice;
  j["tau_policy"] = tau_policy;
  j["bounds"] = {fs.lower, fs.upper};
  if (fs.dual) {
    j["neumann_terms"] = fs.dual->series_terms;
    j["reconstruction_error"] = fs.dual->error;
    if (fs.dual->certificate)
      j["envelope"] = {{"p", fs.dual->certificate->p},
                       {"w-id", fs.dual->certificate->weight_id},
                       {"amalgam_value", fs.dual->certificate->amalgam_value}};
  }
  return j;
}

}  // namespace coorbit
