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

#include <cmath>
#include <numbers>

#include <doctest.h>

#include "coorbit/errors.hpp"
#include "coorbit/frames.hpp"
#include "coorbit/rng.hpp"

using namespace coorbit;

namespace {

CVector random_vector(Index n, std::uint64_t index) {
  auto rng = make_rng(17, 0xf4, index);
  return random_complex_vector(rng, n);
}

double max_abs(const CMatrix& a) { return a.cwiseAbs().maxCoeff(); }

// Power iteration oracle for the largest eigenvalue of a Hermitian PSD matrix.
double power_top(const CMatrix& s, int iterations = 4000) {
  CVector v = random_vector(s.rows(), 999);
  v.normalize();
  double lambda = 0.0;
  for (int k = 0; k < iterations; ++k) {
    CVector u = s * v;
    lambda = u.norm();
    if (lambda == 0.0) return 0.0;
    v = u / lambda;
  }
  return std::real(v.dot(s * v));
}

struct Gabor8 {
  ModelPtr model = build_cyclic_phase_space(8);
  RepPtr rep = Representation::gabor(model);
  CVector g = gaussian_window(8);
  PWeight unit = PWeight::unit(model, 1.0);
};

}  // namespace

TEST_CASE("Gabor representation: identity, unitarity and the cocycle relation") {
  const auto m = build_cyclic_phase_space(4);
  const auto rep = Representation::gabor(m);
  CHECK(max_abs((*rep)(m->identity()) - CMatrix::Identity(4, 4)) == 0.0);
  double worst = 0.0;
  for (Index x = 0; x < m->size(); ++x) {
    worst = std::max(worst, max_abs((*rep)(x).adjoint() * (*rep)(x) - CMatrix::Identity(4, 4)));
    for (Index y = 0; y < m->size(); ++y)
      worst = std::max(worst, max_abs((*rep)(x) * (*rep)(y) - m->cocycle(x, y) * (*rep)(m->mul(x, y))));
  }
  CHECK(worst < 1e-12);

  // pi(k, l) f(t) = e^{2 pi i l t / N} f(t - k)
  const CVector f = random_vector(4, 1);
  const CVector pf = rep->apply(m->locate(1, 3), f);
  for (int t = 0; t < 4; ++t)
    CHECK(std::abs(pf(t) - std::polar(1.0, 2.0 * std::numbers::pi * 3.0 * t / 4.0) * f((t + 3) % 4)) < 1e-12);

  std::vector<CMatrix> bad(static_cast<std::size_t>(m->size()), CMatrix::Identity(4, 4));
  bad[1] *= 2.0;
  CHECK_THROWS_AS(Representation(m, bad), InvalidParameter);
}

TEST_CASE("windows") {
  for (Index n : {4, 8, 9}) {
    CHECK(gaussian_window(n).norm() == doctest::Approx(1.0));
    CHECK(boxcar_window(n, 1).norm() == doctest::Approx(1.0));
  }
  const CVector g = gaussian_window(8);
  CHECK(std::abs(g(1) - g(7)) < 1e-15);
  CHECK(std::abs(g(0)) > std::abs(g(1)));
  CHECK_THROWS_AS(window_by_id("triangle", 8), InvalidParameter);
}

TEST_CASE("voice transform") {
  const auto m = build_cyclic_phase_space(4);
  const auto rep = Representation::gabor(m);
  const CVector g = random_vector(4, 2);
  CHECK(std::abs(voice_transform(*rep, g, g)(m->identity()) - g.squaredNorm()) < 1e-12);

  const CVector f = random_vector(4, 3);
  const ComplexFunction vf = voice_transform(*rep, g, f);
  for (Index x = 0; x < m->size(); ++x) {
    const ComplexFunction lhs = voice_transform(*rep, g, rep->apply(x, f));
    const ComplexFunction rhs = translate_left_twisted(vf, x);
    CHECK((lhs.values - rhs.values).cwiseAbs().maxCoeff() < 1e-12);
  }

  const CVector gn = g.normalized();
  const ComplexFunction v = voice_transform(*rep, gn, f);
  double energy = 0.0;
  for (Index x = 0; x < m->size(); ++x) energy += m->haar(x) * std::norm(v(x));
  CHECK(energy == doctest::Approx(f.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("check_admissible") {
  const auto m = build_cyclic_phase_space(4);
  const auto rep = Representation::gabor(m);
  const CVector g = random_vector(4, 4).normalized();
  const AdmissibilityReport r = check_admissible(*rep, g);
  CHECK(r.is_admissible);
  CHECK(r.constant == doctest::Approx(1.0).epsilon(1e-12));
  const AdmissibilityReport s = check_admissible(*rep, Complex(2.0, -1.0) * g);
  CHECK(s.constant == doctest::Approx(5.0).epsilon(1e-12));
  CHECK_FALSE(s.is_admissible);
  CHECK(check_admissible(*rep, normalize_admissible(*rep, Complex(2.0, -1.0) * g)).is_admissible);
  CHECK_THROWS_AS(check_admissible(*rep, CVector::Zero(4)), InvalidWindow);
}

TEST_CASE("reproducing formula") {
  const auto m4 = build_cyclic_phase_space(4);
  const auto r4 = Representation::gabor(m4);
  const CVector g = random_vector(4, 5).normalized();
  CHECK(reproducing_check(*r4, g, g, g) <= 1e-10);
  CHECK(reproducing_check(*r4, g, random_vector(4, 6), CVector::Zero(4)) == 0.0);

  const Gabor8 s;
  for (std::uint64_t k = 0; k < 3; ++k)
    CHECK(reproducing_check(*s.rep, s.g, random_vector(8, 10 + k), random_vector(8, 20 + k)) <= 1e-10);
}

TEST_CASE("frame bounds") {
  const auto [a, b] = frame_bounds(CMatrix::Identity(3, 3));
  CHECK(a == doctest::Approx(1.0));
  CHECK(b == doctest::Approx(1.0));
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 0.5;
  d(1, 1) = 2.0;
  const auto [lo, hi] = frame_bounds(d);
  CHECK(lo == doctest::Approx(0.5));
  CHECK(hi == doctest::Approx(2.0));
}

TEST_CASE("almost tight frames on the cyclic model") {
  const auto m = build_cyclic_phase_space(4);
  const auto rep = Representation::gabor(m);
  const CVector g = random_vector(4, 7).normalized();
  const FrameSystem tight = build_almost_tight_frame(rep, g, full_sample(m), {m->identity()});
  CHECK(max_abs(tight.frame_operator - CMatrix::Identity(4, 4)) <= 1e-10);
  CHECK(tight.lower == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(tight.upper == doctest::Approx(1.0).epsilon(1e-10));

  const FrameSystem empty = build_frame(rep, g, SampleSet(m, {}), Eigen::VectorXd());
  CHECK(max_abs(empty.frame_operator) == 0.0);
  CHECK(empty.lower == 0.0);

  const Gabor8 s;
  const FrameSystem fs = build_almost_tight_frame(s.rep, s.g, cyclic_lattice(s.model, 2), block_neighborhood(*s.model, 0, 1));
  CHECK(fs.lower > 0.0);
  CHECK(fs.upper == doctest::Approx(power_top(fs.frame_operator)).epsilon(1e-6));
  const CMatrix shifted = fs.upper * CMatrix::Identity(8, 8) - fs.frame_operator;
  CHECK(fs.lower == doctest::Approx(fs.upper - power_top(shifted)).epsilon(1e-6));
  double rmin = 1e300, rmax = 0.0;
  for (std::uint64_t k = 0; k < 1000; ++k) {
    const CVector v = random_vector(8, 1000 + k);
    const double q = std::real(v.dot(fs.frame_operator * v)) / v.squaredNorm();
    rmin = std::min(rmin, q);
    rmax = std::max(rmax, q);
  }
  CHECK(rmin >= fs.lower - 1e-12);
  CHECK(rmax <= fs.upper + 1e-12);

  CHECK_THROWS_AS(build_almost_tight_frame(s.rep, s.g, cyclic_lattice(s.model, 4), block_neighborhood(*s.model, 0, 1)),
                  NotDense);
}

TEST_CASE("property: B/A decreases to 1 along cover refinement") {
  const Gabor8 s;
  double previous = 1e300;
  for (int step : {8, 4, 2, 1}) {
    const FrameSystem fs =
        build_almost_tight_frame(s.rep, s.g, cyclic_lattice(s.model, step), block_neighborhood(*s.model, 0, step - 1));
    // Fewer than N atoms cannot span C^N; those steps count as infinite.
    const double cond = fs.lower > 1e-12 ? fs.upper / fs.lower : 1e300;
    if (step >= 4) CHECK(cond == 1e300);
    CHECK(cond <= previous + 1e-3);
    previous = cond;
  }
  CHECK(previous == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("power series coefficients and planning") {
  const std::vector<double> inv = series_coefficients(HoloFunction::inverse, 5);
  const std::vector<double> isq = series_coefficients(HoloFunction::inverse_sqrt, 5);
  const double expected_inv[] = {1.0, -1.0, 1.0, -1.0, 1.0};
  // binom(-1/2, n)
  const double expected_isq[] = {1.0, -0.5, 0.375, -0.3125, 35.0 / 128.0};
  for (int n = 0; n < 5; ++n) {
    CHECK(inv[static_cast<std::size_t>(n)] == expected_inv[n]);
    CHECK(isq[static_cast<std::size_t>(n)] == doctest::Approx(expected_isq[n]).epsilon(1e-15));
  }
  const SeriesPlan plan = plan_series(HoloFunction::inverse, 0.5, 1e-10);
  CHECK(plan.tail_bound <= 1e-10);
  CHECK(plan.terms == 35);
  CHECK_THROWS_AS(plan_series(HoloFunction::inverse, 1.0, 1e-10), NotContractive);
  CHECK(holo_function_from_string(to_string(HoloFunction::inverse_sqrt)) == HoloFunction::inverse_sqrt);
  CHECK_THROWS_AS(holo_function_from_string("log"), InvalidParameter);
}

TEST_CASE("holomorphic_apply") {
  const HolomorphicResult id = holomorphic_apply(CMatrix::Identity(3, 3), HoloFunction::inverse);
  CHECK(id.terms == 1);
  CHECK(max_abs(id.value - CMatrix::Identity(3, 3)) == 0.0);

  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = 0.8;
  d(1, 1) = 1.2;
  const double tol = 1e-12;
  const HolomorphicResult r = holomorphic_apply(d, HoloFunction::inverse, 0.999, tol);
  CHECK(std::abs(r.value(0, 0) - 1.25) <= tol);
  CHECK(std::abs(r.value(1, 1) - 1.0 / 1.2) <= tol);

  const Gabor8 s;
  const FrameSystem fs = build_almost_tight_frame(s.rep, s.g, cyclic_lattice(s.model, 2), block_neighborhood(*s.model, 0, 1));
  const CMatrix& sop = fs.frame_operator;
  const HolomorphicResult half = holomorphic_apply(sop, HoloFunction::inverse_sqrt, 0.999, tol);
  const HolomorphicResult full = holomorphic_apply(sop, HoloFunction::inverse, 0.999, tol);
  const CMatrix eye = CMatrix::Identity(8, 8);
  CHECK(spectral_norm(half.value * half.value * sop - eye) <= 10 * tol);
  CHECK(spectral_norm(full.value * sop - eye) <= 10 * tol);
  CHECK(spectral_norm(half.value * half.value - full.value) <= 10 * tol);
  CHECK(spectral_norm(full.value - hermitian_function(sop, HoloFunction::inverse)) <= 10 * tol);

  CHECK_THROWS_AS(holomorphic_apply(3.0 * eye, HoloFunction::inverse), NotContractive);
}

TEST_CASE("dual frames") {
  const auto m = build_cyclic_phase_space(4);
  const auto rep = Representation::gabor(m);
  const CVector g = random_vector(4, 8).normalized();
  const SampleSet all = full_sample(m);
  const double c = 3.0;
  const FrameSystem tight = build_frame(rep, g, all, Eigen::VectorXd::Constant(16, c / 4.0));
  const AtomFamily td = dual_frame(tight, PWeight::unit(m, 1.0));
  CHECK(max_abs(td.atoms - (1.0 / 4.0) * tight.atoms) <= 1e-12);

  const Gabor8 s;
  const FrameSystem fs = build_almost_tight_frame(s.rep, s.g, cyclic_lattice(s.model, 2), block_neighborhood(*s.model, 0, 1));
  const AtomFamily series = dual_frame(fs, s.unit, SolveMethod::series);
  const AtomFamily direct = dual_frame(fs, s.unit, SolveMethod::direct);
  CHECK(series.series_terms > 0);
  CHECK(direct.series_terms == 0);
  CHECK(max_abs(series.atoms - direct.atoms) <= 1e-9);
  CHECK(series.error <= 1e-9);
  const CMatrix eye = CMatrix::Identity(8, 8);
  // f = sum <f, a_i> h_i and f = sum <f, h_i> a_i on the whole basis.
  CHECK(max_abs(series.atoms * fs.atoms.adjoint() - eye) <= 1e-9);
  CHECK(max_abs(fs.atoms * series.atoms.adjoint() - eye) <= 1e-9);
  REQUIRE(series.certificate.has_value());
  CHECK(series.certificate->max_violation == 0.0);

  const FrameSystem zero = build_frame(s.rep, s.g, SampleSet(s.model, {}), Eigen::VectorXd());
  CHECK_THROWS_AS(dual_frame(zero, s.unit), NotAFrame);
  const FrameSystem far = build_frame(s.rep, s.g, cyclic_lattice(s.model, 2), Eigen::VectorXd::Constant(16, 2.0));
  CHECK_THROWS_AS(dual_frame(far, s.unit, SolveMethod::series), NotContractive);
  CHECK(dual_frame(far, s.unit).error <= 1e-9);
}

TEST_CASE("dual atoms are dominated by the series majorant") {
  const Gabor8 s;
  const FrameSystem fs = build_almost_tight_frame(s.rep, s.g, cyclic_lattice(s.model, 2), block_neighborhood(*s.model, 0, 1));
  const AtomFamily dual = dual_frame(fs, s.unit, SolveMethod::series);
  const DualMajorant maj = dual_majorant(fs);
  CHECK(maj.contraction < 1.0);
  CHECK(maj.psi.values.isApprox(involution(maj.psi).values));
  const GroupModel& m = *s.model;
  double excess = -1e300;
  for (Index i = 0; i < fs.sample.size(); ++i) {
    const ComplexFunction v = voice_transform(*s.rep, s.g, dual.atoms.col(i));
    const Index li = m.inv(fs.sample[i]);
    for (Index x = 0; x < m.size(); ++x)
      excess = std::max(excess, std::abs(v(x)) - fs.tau(i) * maj.psi(m.mul(li, x)));
  }
  CHECK(excess <= 1e-8);
}

TEST_CASE("Parseval frames") {
  const Gabor8 s;
  const FrameSystem fs = build_almost_tight_frame(s.rep, s.g, cyclic_lattice(s.model, 2), block_neighborhood(*s.model, 0, 1));
  const AtomFamily par = parseval_frame(fs, s.unit);
  const CMatrix eye = CMatrix::Identity(8, 8);
  CHECK(max_abs(par.atoms * par.atoms.adjoint() - eye) <= 1e-8);
  const auto [a, b] = frame_bounds(par.atoms * par.atoms.adjoint());
  CHECK(a == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(b == doctest::Approx(1.0).epsilon(1e-8));

  const FrameSystem again = build_frame(s.rep, s.g, fs.sample, Eigen::VectorXd::Ones(fs.sample.size()));
  FrameSystem already = again;
  already.atoms = par.atoms;
  already.frame_operator = par.atoms * par.atoms.adjoint();
  already.lower = already.upper = 1.0;
  CHECK(max_abs(parseval_frame(already, s.unit).atoms - par.atoms) <= 1e-8);
}

TEST_CASE("Gramian, biorthogonal and orthonormal systems") {
  const Gabor8 s;
  const SampleSet one(s.model, {5});
  const CDMatrix g1 = gramian(*s.rep, s.g, one);
  CHECK(std::abs(g1.entries(0, 0) - s.g.squaredNorm()) < 1e-12);
  const AtomFamily b1 = biorthogonal_system(*s.rep, s.g, one);
  CHECK(max_abs(b1.atoms.col(0) - atoms_at(*s.rep, s.g, one).col(0) / s.g.squaredNorm()) < 1e-12);

  const SampleSet sep = cyclic_lattice(s.model, 4);
  const CDMatrix gram = gramian(*s.rep, s.g, sep);
  const CMatrix a = atoms_at(*s.rep, s.g, sep);
  CHECK(max_abs(gram.entries - a.adjoint() * a) < 1e-12);
  const auto [lo, hi] = riesz_bounds(gram);
  CHECK(lo > 0.0);
  CHECK(hi >= lo);

  const AtomFamily bio = biorthogonal_system(*s.rep, s.g, sep);
  CHECK(bio.error <= 1e-9);
  CHECK(max_abs(bio.atoms.adjoint() * a - CMatrix::Identity(4, 4)) <= 1e-9);

  // Moment problem: <sum_j c_j h_j, a_i> = c_i.
  const CVector c = random_vector(4, 40);
  const CVector h = bio.atoms * c;
  CHECK((a.adjoint() * h - c).cwiseAbs().maxCoeff() <= 1e-9);

  const AtomFamily ortho = orthonormalize(*s.rep, s.g, sep);
  CHECK(max_abs(ortho.atoms.adjoint() * ortho.atoms - CMatrix::Identity(4, 4)) <= 1e-9);

  // |G_{i,i'}| <= (|V_g g| * |V_g g|)(lambda_i'^{-1} lambda_i)
  const RealFunction vgg = abs(voice_transform(*s.rep, s.g, s.g));
  const RealFunction env = convolve(vgg, vgg);
  const GroupModel& m = *s.model;
  for (Index i = 0; i < sep.size(); ++i)
    for (Index j = 0; j < sep.size(); ++j)
      CHECK(std::abs(gram.entries(i, j)) <= env(m.mul(m.inv(sep[j]), sep[i])) + 1e-12);

  CHECK_THROWS_AS(biorthogonal_system(*s.rep, s.g, full_sample(s.model)), NotRiesz);
}

TEST_CASE("fit_envelope") {
  const Gabor8 s;
  const SampleSet lat = cyclic_lattice(s.model, 2);
  const MoleculeCertificate cert = fit_envelope(*s.rep, s.g, atoms_at(*s.rep, s.g, lat), lat, s.unit);
  const RealFunction vgg = abs(voice_transform(*s.rep, s.g, s.g));
  RealFunction sym(s.model, vgg.values.cwiseMax(involution(vgg).values));
  CHECK((cert.envelope.values - sym.values).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(cert.amalgam_value ==
        doctest::Approx(amalgam_norm(sym, QuasiNormSpec{1.0, {}, Flavor::two_sided})).epsilon(1e-12));
  CHECK(cert.max_violation == 0.0);

  const MoleculeCertificate zero = fit_envelope(*s.rep, s.g, CMatrix::Zero(8, lat.size()), lat, s.unit);
  CHECK(zero.envelope.values.maxCoeff() == 0.0);
  CHECK_THROWS(fit_envelope(*s.rep, s.g, CMatrix::Zero(8, 3), lat, s.unit));
}

TEST_CASE("frame kernel envelope") {
  const Gabor8 s;
  const FrameSystem full = build_almost_tight_frame(s.rep, s.g, full_sample(s.model), {s.model->identity()});
  const KernelEnvelopeReport r = frame_kernel_envelope_check(full, s.unit);
  CHECK(r.holds);
  CHECK(r.pairs_checked == 64 * 64);

  const FrameSystem one = build_frame(s.rep, s.g, SampleSet(s.model, {9}), Eigen::VectorXd::Ones(1));
  CHECK(frame_kernel_envelope_check(one, s.unit).holds);
  const FrameSystem zero = build_frame(s.rep, s.g, cyclic_lattice(s.model, 2), Eigen::VectorXd::Zero(16));
  const KernelEnvelopeReport z = frame_kernel_envelope_check(zero, s.unit);
  CHECK(z.holds);
  CHECK(z.max_excess <= 0.0);
}
