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

#include "coorbit/coorbit_ops.hpp"

#include <random>
#include <sstream>

#include "coorbit/rng.hpp"

namespace coorbit {

namespace {

constexpr double kCertificateTol = 1e-9;

void require_certificate(const MoleculeFamily& family) {
  const auto& cert = family.certificate;
  if (family.atoms.cols() != family.sample.size())
    throw NoCertificate("molecule family and sample differ in length");
  if (!cert.envelope.model || cert.envelope.model.get() != family.sample.model().get())
    throw NoCertificate("certificate envelope lives on another model");
  if (!(cert.max_violation <= kCertificateTol)) {
    std::ostringstream os;
    os << "certificate violated by " << cert.max_violation;
    throw NoCertificate(os.str());
  }
}

RealFunction sequence_function(const CVector& c, const SampleSet& sample, const Neighborhood& base_set) {
  if (c.size() != sample.size()) throw IncompatibleOperands("coefficient length differs from sample size");
  const GroupModel& m = *sample.model();
  RealFunction f(sample.model());
  for (Index i = 0; i < sample.size(); ++i) {
    const double a = std::abs(c(i));
    if (a == 0.0) continue;
    for (Index q : base_set) {
      const Index z = m.mul(sample[i], q);
      if (z != kAbsent) f.values(z) += a;
    }
  }
  return f;
}

MoleculeFamily family_of(const CoorbitContext& ctx, const PWeight& w, const SampleSet& sample, CMatrix atoms) {
  MoleculeFamily fam{sample, std::move(atoms), {}};
  fam.certificate = fit_envelope(*ctx.rep, ctx.window, fam.atoms, sample, w);
  return fam;
}

}  // namespace

double sequence_norm(const CVector& c, const SequenceSpaceSpec& spec) {
  return sequence_norm_with_base(c, spec, spec.sample.model()->q_neighborhood());
}

double sequence_norm_with_base(const CVector& c, const SequenceSpaceSpec& spec, const Neighborhood& base_set) {
  return lpw_norm(sequence_function(c, spec.sample, base_set), spec.base.as(Flavor::plain));
}

CoorbitContext make_context(RepPtr rep, CVector window, QuasiNormSpec y) {
  const AdmissibilityReport adm = check_admissible(*rep, window);
  if (!adm.is_admissible) {
    std::ostringstream os;
    os << "window is not admissible (constant " << adm.constant << ")";
    throw InvalidWindow(os.str());
  }
  return {std::move(rep), std::move(window), y.as(Flavor::plain)};
}

double coorbit_norm(const CoorbitContext& ctx, const CVector& f) {
  return amalgam_norm(voice_transform(*ctx.rep, ctx.window, f), ctx.y.as(Flavor::left));
}

RatioRange window_independence_ratio(const CoorbitContext& ctx, const CVector& h,
                                     const std::vector<CVector>& samples) {
  const CoorbitContext other = make_context(ctx.rep, h, ctx.y);
  RatioRange out;
  for (const auto& f : samples) {
    const double den = coorbit_norm(other, f);
    if (den == 0.0) continue;
    out.add(coorbit_norm(ctx, f) / den);
  }
  return out;
}

RatioRange wiener_vs_plain_ratio(const CoorbitContext& ctx, const std::vector<CVector>& samples) {
  RatioRange out;
  for (const auto& f : samples) {
    const ComplexFunction v = voice_transform(*ctx.rep, ctx.window, f);
    const double den = lpw_norm(v, ctx.y);
    if (den == 0.0) continue;
    out.add(amalgam_norm(v, ctx.y.as(Flavor::left)) / den);
  }
  return out;
}

double wiener_vs_plain_bound_l1(const CoorbitContext& ctx) {
  const ComplexFunction vgg = voice_transform(*ctx.rep, ctx.window, ctx.window);
  return lpw_norm(maximal_left(vgg), QuasiNormSpec::lebesgue(1.0, ctx.y.weight));
}

CVector coefficient_operator(const MoleculeFamily& family, const CVector& f) {
  require_certificate(family);
  if (f.size() != family.atoms.rows()) throw IncompatibleOperands("vector dimension differs from atoms");
  return family.atoms.adjoint() * f;
}

CVector reconstruction_operator(const MoleculeFamily& family, const CVector& c) {
  require_certificate(family);
  if (c.size() != family.atoms.cols()) throw IncompatibleOperands("coefficient length differs from atoms");
  return family.atoms * c;
}

std::vector<CVector> basis_and_random(Index dim, Index random, std::uint64_t seed, std::uint64_t stream) {
  std::vector<CVector> out;
  for (Index k = 0; k < dim; ++k) out.push_back(CVector::Unit(dim, k));
  for (Index k = 0; k < random; ++k) {
    auto rng = make_rng(seed, stream, static_cast<std::uint64_t>(k));
    out.push_back(random_complex_vector(rng, dim));
  }
  return out;
}

OperatorNorms measure_operator_norms(const CoorbitContext& ctx, const MoleculeFamily& family,
                                     const std::vector<CVector>& f_samples,
                                     const std::vector<CVector>& c_samples) {
  const SequenceSpaceSpec yd{ctx.y, family.sample};
  OperatorNorms out;
  for (const auto& f : f_samples) {
    const double den = coorbit_norm(ctx, f);
    if (den > 0.0) out.coefficient = std::max(out.coefficient, sequence_norm(coefficient_operator(family, f), yd) / den);
  }
  for (const auto& c : c_samples) {
    const double den = sequence_norm(c, yd);
    if (den > 0.0)
      out.reconstruction = std::max(out.reconstruction, coorbit_norm(ctx, reconstruction_operator(family, c)) / den);
  }
  return out;
}

nlohmann::json CalibratedConstants::to_json() const {
  return {{"coefficient", coefficient}, {"reconstruction", reconstruction}, {"safety", safety}, {"families", families}};
}

CMatrix random_convolution_operator(const Representation& rep, int radius, std::uint64_t seed) {
  const GroupModel& m = *rep.model();
  if (m.kind() != ModelKind::cyclic) throw InvalidParameter("convolution operators need a cyclic model");
  auto rng = make_rng(seed, 0xc0417);
  std::normal_distribution<double> normal;
  CMatrix t = CMatrix::Zero(rep.dimension(), rep.dimension());
  for (Index x : block_neighborhood(m, -radius, radius))
    t += Complex(normal(rng), normal(rng)) * m.haar(x) * rep(x);
  return t;
}

CalibratedConstants calibrate_constants(const CoorbitContext& ctx, const PWeight& w, std::uint64_t seed,
                                        double safety) {
  const ModelPtr& model = ctx.rep->model();
  const Index dim = ctx.rep->dimension();
  std::vector<SampleSet> lattices;
  const int n = model->cyclic_order();
  for (int step : {1, 2})
    if (n % step == 0) lattices.push_back(cyclic_lattice(model, step));
  {
    auto rng = make_rng(seed, 0xca11b, 99);
    std::vector<Index> pts;
    std::bernoulli_distribution keep(0.5);
    for (Index x = 0; x < model->size(); ++x)
      if (keep(rng)) pts.push_back(x);
    if (pts.empty()) pts.push_back(model->identity());
    lattices.emplace_back(model, std::move(pts));
  }

  const auto f_samples = basis_and_random(dim, 16, seed, 0xca11b1);
  CalibratedConstants out;
  out.safety = safety;
  double worst_c = 0.0, worst_d = 0.0;
  std::uint64_t counter = 0;
  auto consider = [&](const SampleSet& sample, CMatrix atoms) {
    const MoleculeFamily fam = family_of(ctx, w, sample, std::move(atoms));
    const double scale = rel_separation(sample) * fam.certificate.amalgam_value;
    if (scale == 0.0) return;
    const auto c_samples = basis_and_random(sample.size(), 16, seed, 0xca11b2 + counter);
    const OperatorNorms norms = measure_operator_norms(ctx, fam, f_samples, c_samples);
    worst_c = std::max(worst_c, norms.coefficient / scale);
    worst_d = std::max(worst_d, norms.reconstruction / scale);
    ++out.families;
  };
  for (const auto& sample : lattices) {
    const CMatrix base = atoms_at(*ctx.rep, ctx.window, sample);
    for (double delta : {0.0, 0.2, 0.5}) {
      CMatrix atoms = base;
      for (Index i = 0; i < sample.size(); ++i) {
        auto rng = make_rng(seed, 0xca11b3 + counter, static_cast<std::uint64_t>(i));
        CVector r = random_complex_vector(rng, dim);
        atoms.col(i) = ctx.rep->apply(sample[i], ctx.window + delta * r / r.norm());
      }
      consider(sample, std::move(atoms));
      ++counter;
    }
    for (int radius : {1, 2}) {
      const CMatrix t = random_convolution_operator(*ctx.rep, radius, mix64(seed + counter));
      consider(sample, t * base);
      ++counter;
    }
    const CMatrix s = base * base.adjoint();
    if (spectral_norm(s) > 0.0 && frame_bounds(s).first > 1e-9) {
      consider(sample, s.llt().solve(base));
      ++counter;
    }
  }
  out.coefficient = safety * worst_c;
  out.reconstruction = safety * worst_d;
  return out;
}

BoundCheck coefficient_bound_check(const CoorbitContext& ctx, const MoleculeFamily& family,
                                   const CalibratedConstants& k, std::uint64_t seed) {
  const auto f_samples = basis_and_random(ctx.rep->dimension(), 32, seed, 0xc0ef);
  const OperatorNorms norms = measure_operator_norms(ctx, family, f_samples, {});
  BoundCheck out;
  out.measured = norms.coefficient;
  out.bound = k.coefficient * rel_separation(family.sample) * family.certificate.amalgam_value;
  out.pass = out.measured <= out.bound;
  return out;
}

EmbeddingFactorReport embedding_check(const CoorbitContext& ctx_y, const CoorbitContext& ctx_z,
                                      const FrameSystem& fs, const AtomFamily& dual, Index random_samples,
                                      std::uint64_t seed) {
  const Index dim = ctx_y.rep->dimension();
  const SequenceSpaceSpec yd{ctx_y.y, fs.sample}, zd{ctx_z.y, fs.sample};
  const auto f_samples = basis_and_random(dim, random_samples, seed, 0xe3b0);
  std::vector<CVector> c_samples = basis_and_random(fs.sample.size(), random_samples, seed, 0xe3b1);

  EmbeddingFactorReport out;
  for (const auto& f : f_samples) {
    const double ny = coorbit_norm(ctx_y, f);
    if (ny == 0.0) continue;
    const CVector c = fs.atoms.adjoint() * f;
    out.coefficient_norm = std::max(out.coefficient_norm, sequence_norm(c, yd) / ny);
    out.coorbit_constant = std::max(out.coorbit_constant, coorbit_norm(ctx_z, f) / ny);
    c_samples.push_back(c);
  }
  for (const auto& c : c_samples) {
    const double ny = sequence_norm(c, yd), nz = sequence_norm(c, zd);
    if (ny > 0.0) out.sequence_constant = std::max(out.sequence_constant, nz / ny);
    if (nz > 0.0) out.reconstruction_norm = std::max(out.reconstruction_norm, coorbit_norm(ctx_z, dual.atoms * c) / nz);
  }
  out.product = out.reconstruction_norm * out.sequence_constant * out.coefficient_norm;
  out.pass = out.coorbit_constant <= out.product * (1.0 + 1e-6);
  return out;
}

OperatorExtensionReport extend_operator_check(const CoorbitContext& ctx, const PWeight& w, const CMatrix& t,
                                              const FrameSystem& fs, const AtomFamily& dual,
                                              const CalibratedConstants& k, Index random_samples,
                                              std::uint64_t seed) {
  if (!dual.certificate) throw NoCertificate("dual atoms carry no certificate");
  const Index dim = ctx.rep->dimension();
  if (t.rows() != dim || t.cols() != dim) throw IncompatibleOperands("operator dimension differs from representation");
  const MoleculeFamily images = family_of(ctx, w, fs.sample, t * fs.atoms);
  OperatorExtensionReport out;
  out.envelope_norm = images.certificate.amalgam_value;
  const double rel = rel_separation(fs.sample);
  out.constant = k.reconstruction * k.coefficient * rel * rel * dual.certificate->amalgam_value;
  out.bound = out.constant * out.envelope_norm;
  for (const auto& f : basis_and_random(dim, random_samples, seed, 0x0e7e)) {
    const double den = coorbit_norm(ctx, f);
    if (den > 0.0) out.measured = std::max(out.measured, coorbit_norm(ctx, t * f) / den);
  }
  out.pass = out.measured <= out.bound;
  return out;
}

}  // namespace coorbit
