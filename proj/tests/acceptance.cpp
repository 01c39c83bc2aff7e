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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "coorbit/errors.hpp"
#include "coorbit/experiments.hpp"
#include "coorbit/rng.hpp"

using namespace coorbit;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double metric(const Report& r, const std::string& name) {
  const Metric* m = r.find(name);
  if (!m) throw Error("report '" + r.command + "' has no metric '" + name + "'");
  return m->value;
}

std::string tag(const char* key, double v) {
  std::ostringstream os;
  os << "[" << key << "=" << v << "]";
  return os.str();
}

double max_abs(const CMatrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

CVector random_vector(Index n, std::uint64_t stream, std::uint64_t index) {
  auto rng = make_rng(2024, stream, index);
  return random_complex_vector(rng, n);
}

// Rayleigh-quotient oracle: power iteration on a Hermitian PSD matrix.
double rayleigh_top(const CMatrix& s) {
  CVector v = random_vector(s.rows(), 0x7a, 0).normalized();
  for (int k = 0; k < 20000; ++k) {
    const CVector u = s * v;
    const double n = u.norm();
    if (n == 0.0) return 0.0;
    v = u / n;
  }
  return std::real(v.dot(s * v));
}

std::pair<double, double> rayleigh_bounds(const CMatrix& s) {
  const double top = rayleigh_top(s);
  const CMatrix shifted = top * CMatrix::Identity(s.rows(), s.cols()) - s;
  return {top - rayleigh_top(shifted), top};
}

// ---------------------------------------------------------------------------

void criterion1(Outcome& o) {
  RealLineConfig c;  // T in {1,2,3}, [-12, 12], step 0.005
  const Report r = run_counterexample_realline(c);
  double worst_conv = 0.0, worst_norm = 0.0;
  for (double t : c.t_list) {
    worst_conv = std::max(worst_conv, std::abs(metric(r, "conv_at_zero" + tag("T", t)) - 1.0));
    worst_norm = std::max(worst_norm, metric(r, "norm_f" + tag("T", t)) / (std::numbers::e * std::exp(-t) * 1.05));
  }
  const double growth = metric(r, "ratio" + tag("T", 3.0)) / metric(r, "ratio" + tag("T", 1.0));
  o.require(worst_conv <= 0.01, "(f*g)(0) = 1 +- 0.01");
  o.require(worst_norm <= 1.0, "||f|| <= e e^{-T} 1.05");
  o.require(std::abs(growth / std::exp(4.0) - 1.0) <= 0.10, "R(3)/R(1) = e^4 +- 10%");
  o.detail << "max|(f*g)(0)-1|=" << worst_conv << " max ||f||/bound=" << worst_norm << " R(3)/R(1)=" << growth;
}

void criterion2(Outcome& o) {
  AffineConfig c;  // alpha = 2, beta = 1/2
  const Report r = run_counterexample_affine(c);
  double worst = kInfinity;
  for (double a : {1.0, 2.0, 4.0, 8.0})
    worst = std::min(worst, metric(r, "self_convolution" + tag("a", a)) / (0.95 * std::pow(a, -0.5)));
  const double ratio = metric(r, "partial_norm" + tag("B", 64.0)) / metric(r, "partial_norm" + tag("B", 16.0));
  o.require(worst >= 1.0, "(f^v * f)(0,a) >= 0.95 a^{-1/2}");
  o.require(ratio >= 1.8, "norm(64)/norm(16) >= 1.8");
  o.detail << "min value/bound=" << worst << " growth=" << ratio;
}

void criterion3(Outcome& o) {
  const double tol = 1e-10;
  double cocycle = 0.0, rep_rel = 0.0, intertwine = 0.0, reproduce = 0.0, involution_dual = 0.0, commute = 0.0;
  for (int n : {4, 8}) {
    const ModelPtr m = build_cyclic_phase_space(n);
    const RepPtr rep = Representation::gabor(m);
    const Index size = m->size();
    for (Index x = 0; x < size; ++x)
      for (Index y = 0; y < size; ++y) {
        const Index xy = m->mul(x, y);
        rep_rel = std::max(rep_rel, max_abs((*rep)(x) * (*rep)(y) - m->cocycle(x, y) * (*rep)(xy)));
        for (Index z = 0; z < size; ++z)
          cocycle = std::max(cocycle, std::abs(m->cocycle(x, m->mul(y, z)) * m->cocycle(y, z) -
                                               m->cocycle(xy, z) * m->cocycle(x, y)));
      }
    const CVector g = random_vector(n, 0x31, static_cast<std::uint64_t>(n)).normalized();
    for (std::uint64_t k = 0; k < 3; ++k) {
      const CVector f = random_vector(n, 0x32, k);
      const CVector h = random_vector(n, 0x33, k);
      const ComplexFunction vf = voice_transform(*rep, g, f);
      for (Index x = 0; x < size; ++x) {
        const ComplexFunction lhs = voice_transform(*rep, g, rep->apply(x, f));
        intertwine = std::max(intertwine, (lhs.values - translate_left_twisted(vf, x).values).cwiseAbs().maxCoeff());
      }
      reproduce = std::max(reproduce, reproducing_check(*rep, g, h, f));

      auto rng = make_rng(2024, 0x34, k);
      const ComplexFunction big(m, random_complex_vector(rng, size));
      involution_dual = std::max(
          involution_dual, (involution(maximal_left(big)).values - maximal_right(involution(big)).values).cwiseAbs().maxCoeff());
      const RealFunction ml = maximal_left(big);
      for (Index x = 0; x < size; ++x)
        commute = std::max(commute,
                           (maximal_left(translate_left(big, x)).values - translate_left(ml, x).values).cwiseAbs().maxCoeff());
    }
  }
  o.require(cocycle <= tol, "cocycle identity");
  o.require(rep_rel <= tol, "pi(x)pi(y) = sigma pi(xy)");
  o.require(intertwine <= tol, "intertwining");
  o.require(reproduce <= tol, "reproducing formula");
  o.require(involution_dual <= tol, "(M^L F)^v = M^R F^v");
  o.require(commute <= tol, "M^L L_x = L_x M^L");
  o.detail << "cocycle=" << cocycle << " rep=" << rep_rel << " intertwine=" << intertwine
           << " reproduce=" << reproduce << " involution=" << involution_dual << " commute=" << commute;
}

void criterion4(Outcome& o) {
  double residual = 0.0;
  for (int n : {4, 8}) {
    const ModelPtr m = build_cyclic_phase_space(n);
    const RepPtr rep = Representation::gabor(m);
    const FrameSystem fs = build_almost_tight_frame(rep, gaussian_window(n), full_sample(m), {m->identity()});
    residual = std::max(residual, max_abs(fs.frame_operator - CMatrix::Identity(n, n)));
  }
  const ModelPtr m = build_cyclic_phase_space(8);
  const RepPtr rep = Representation::gabor(m);
  const CVector g = gaussian_window(8);
  double previous = kInfinity;
  bool monotone = true;
  std::ostringstream curve;
  for (int block : {8, 4, 2, 1}) {
    const FrameSystem fs = build_almost_tight_frame(rep, g, cyclic_lattice(m, block), block_neighborhood(*m, 0, block - 1));
    const double ratio = fs.lower > 1e-12 ? fs.upper / fs.lower : kInfinity;
    if (!std::isinf(previous)) monotone = monotone && ratio <= previous + 1e-3;
    previous = ratio;
    curve << " " << ratio;
  }
  o.require(residual <= 1e-10, "full-lattice S = I");
  o.require(monotone, "B/A monotone under refinement");
  o.require(std::abs(previous - 1.0) <= 1e-10, "finest cover is tight");
  o.detail << "||S-I||_max=" << residual << " B/A:" << curve.str();
}

void criterion5(Outcome& o) {
  const ModelPtr m = build_cyclic_phase_space(8);
  const RepPtr rep = Representation::gabor(m);
  const CVector g = gaussian_window(8);
  const PWeight w = PWeight::unit(m, 1.0);
  const FrameSystem fs = build_almost_tight_frame(rep, g, cyclic_lattice(m, 2), block_neighborhood(*m, 0, 1));
  const AtomFamily series = dual_frame(fs, w, SolveMethod::series);
  const AtomFamily direct = dual_frame(fs, w, SolveMethod::direct);
  const double diff = max_abs(series.atoms - direct.atoms);
  const double recon = max_abs(series.atoms * fs.atoms.adjoint() - CMatrix::Identity(8, 8));
  const DualMajorant maj = dual_majorant(fs);
  double excess = -kInfinity;
  for (Index i = 0; i < fs.sample.size(); ++i) {
    const ComplexFunction v = voice_transform(*rep, g, series.atoms.col(i));
    const Index li = m->inv(fs.sample[i]);
    for (Index x = 0; x < m->size(); ++x)
      excess = std::max(excess, std::abs(v(x)) - fs.tau(i) * maj.psi(m->mul(li, x)));
  }
  o.require(series.series_terms > 0, "series path used");
  o.require(diff <= 1e-9, "series duals = direct duals");
  o.require(recon <= 1e-9, "reconstruction on the basis");
  o.require(excess <= 1e-8, "majorant domination");
  o.detail << "||S-I||=" << series.contraction << " terms=" << series.series_terms << " series-direct=" << diff
           << " reconstruction=" << recon << " majorant excess=" << excess;
}

void criterion6(Outcome& o) {
  const ModelPtr m = build_cyclic_phase_space(8);
  const RepPtr rep = Representation::gabor(m);
  const CVector g = gaussian_window(8);
  const SampleSet sep = cyclic_lattice(m, 4);
  const AtomFamily bio = biorthogonal_system(*rep, g, sep);
  const AtomFamily ortho = orthonormalize(*rep, g, sep);
  const CMatrix atoms = atoms_at(*rep, g, sep);
  const double bio_dev = max_abs(bio.atoms.adjoint() * atoms - CMatrix::Identity(sep.size(), sep.size()));
  const double ortho_dev = max_abs(ortho.atoms.adjoint() * ortho.atoms - CMatrix::Identity(sep.size(), sep.size()));
  const CDMatrix gram = gramian(*rep, g, sep);
  const auto [lo, hi] = riesz_bounds(gram);
  const auto [rlo, rhi] = rayleigh_bounds(gram.entries);
  o.require(bio_dev <= 1e-9, "biorthogonality");
  o.require(ortho_dev <= 1e-9, "orthonormalization");
  o.require(std::abs(lo - rlo) <= 1e-6 && std::abs(hi - rhi) <= 1e-6, "Riesz bounds vs Rayleigh oracle");
  o.detail << "biorthogonality=" << bio_dev << " orthonormality=" << ortho_dev << " bounds=(" << lo << ", " << hi
           << ") oracle=(" << rlo << ", " << rhi << ")";
}

CMatrix localized(const GroupModel& m, const SampleSet& r, const SampleSet& c, std::uint64_t index) {
  auto rng = make_rng(2024, 0x70, index);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  const int n = m.cyclic_order();
  CMatrix a(r.size(), c.size());
  for (Index i = 0; i < r.size(); ++i)
    for (Index j = 0; j < c.size(); ++j) {
      const Eigen::Vector2d z = m.coords(m.mul(m.inv(c[j]), r[i]));
      const double d = std::min(z(0), n - z(0)) + std::min(z(1), n - z(1));
      a(i, j) = std::polar(uni(rng) * std::exp(-d), 2.0 * std::numbers::pi * uni(rng));
    }
  return a;
}

SampleSet random_subset(const ModelPtr& m, std::uint64_t index) {
  auto rng = make_rng(2024, 0x71, index);
  const Eigen::VectorXd u = random_uniform_vector(rng, m->size());
  std::vector<Index> pts;
  for (Index x = 0; x < m->size(); ++x)
    if (u(x) < 0.5) pts.push_back(x);
  if (pts.empty()) pts.push_back(0);
  return SampleSet(m, pts);
}

void criterion7(Outcome& o) {
  const ModelPtr m = build_cyclic_phase_space(8);
  int violations = 0;
  double product_excess = -kInfinity;
  for (std::uint64_t s = 0; s < 50; ++s) {
    const SampleSet r = random_subset(m, 3 * s), mid = random_subset(m, 3 * s + 1), c = random_subset(m, 3 * s + 2);
    const CDMatrix a = with_minimal_envelope(CDMatrix(r, mid, localized(*m, r, mid, 2 * s)));
    const SchurBounds b = schur_bounds(a);
    const double exact = Eigen::JacobiSVD<CMatrix>(a.entries).singularValues()(0);
    if (exact > b.op_bound_l2) ++violations;
    const CDMatrix bm = with_minimal_envelope(CDMatrix(mid, c, localized(*m, mid, c, 2 * s + 1)));
    const CDMatrix ab = product_with_envelope(a, bm);
    product_excess = std::max(product_excess, verify_envelope(ab, ab.envelope->phi).max_excess);
  }
  const RepPtr rep = Representation::gabor(m);
  const CDMatrix gram = gramian(*rep, gaussian_window(8), cyclic_lattice(m, 4));
  const double tail_tol = 1e-12;
  const MatrixHolomorphicResult inv = matrix_holomorphic(gram, HoloFunction::inverse, tail_tol);
  const double diff = max_abs(inv.matrix.entries - gram.entries.inverse());
  const EnvelopeCheck env = verify_envelope(inv.matrix, inv.matrix.envelope->phi, tail_tol);
  o.require(violations == 0, "Schur bound >= spectral norm");
  o.require(product_excess <= 0.0, "product envelope max_excess = 0");
  o.require(diff <= 1e-9, "series inverse = direct inverse");
  o.require(env.holds, "propagated envelope valid within tail_tol");
  o.detail << "schur violations=" << violations << "/50 product max_excess=" << product_excess
           << " inverse diff=" << diff << " envelope excess=" << env.max_excess;
}

void criterion8(Outcome& o) {
  const ModelPtr m = build_cyclic_phase_space(8);
  const SampleSet lat = cyclic_lattice(m, 2);
  const Index pairs = 1000;
  Index failures = 0, checks = 0;
  double worst = 0.0;
  // Relative slack for floating-point summation order only.
  const double slack = 1e-12;
  for (double p : {1.0 / 3.0, 0.5, 1.0}) {
    const PWeight w = symmetrize_weight(m, polynomial_weight(*m, 1.0), p);
    const QuasiNormSpec base = QuasiNormSpec::with(p, w, Flavor::plain);
    const SequenceSpaceSpec seq{base, lat};
    for (Index k = 0; k < pairs; ++k) {
      auto rng = make_rng(2024, 0x80, static_cast<std::uint64_t>(k) + static_cast<std::uint64_t>(p * 1e6));
      const ComplexFunction f(m, random_complex_vector(rng, m->size()));
      const ComplexFunction h(m, random_complex_vector(rng, m->size()));
      const ComplexFunction sum(m, f.values + h.values);
      for (Flavor fl : {Flavor::plain, Flavor::left, Flavor::right, Flavor::two_sided}) {
        const QuasiNormSpec y = base.as(fl);
        const double lhs = std::pow(amalgam_norm(sum, y), p);
        const double rhs = std::pow(amalgam_norm(f, y), p) + std::pow(amalgam_norm(h, y), p);
        worst = std::max(worst, lhs / rhs);
        ++checks;
        if (lhs > rhs * (1.0 + slack)) ++failures;
      }
      const CVector a = random_complex_vector(rng, lat.size()), b = random_complex_vector(rng, lat.size());
      const double lhs = std::pow(sequence_norm(a + b, seq), p);
      const double rhs = std::pow(sequence_norm(a, seq), p) + std::pow(sequence_norm(b, seq), p);
      worst = std::max(worst, lhs / rhs);
      ++checks;
      if (lhs > rhs * (1.0 + slack)) ++failures;
    }
  }
  o.require(failures == 0, "p-triangle inequality");
  o.detail << "checks=" << checks << " failures=" << failures << " max lhs/rhs=" << worst;
}

void criterion9(Outcome& o) {
  const Report r = run_coorbit_embed(CoorbitEmbedConfig{});
  const Metric* emb = r.find("coorbit_embedding_constant");
  o.require(emb && emb->pass && *emb->pass, "embedding constant <= ||D|| ||i|| ||C|| (1 + 1e-6)");
  int operators = 0, failed = 0;
  double worst = 0.0;
  for (const auto& mt : r.metrics)
    if (mt.name.rfind("operator_bound[", 0) == 0) {
      ++operators;
      if (!mt.pass || !*mt.pass) ++failed;
      if (mt.bound) worst = std::max(worst, mt.value / *mt.bound);
    }
  o.require(operators > 0 && failed == 0, "operator extension within calibrated bound");
  if (emb) o.detail << "embedding=" << emb->value << " <= " << emb->bound.value_or(kInfinity);
  o.detail << " operators=" << operators << " failed=" << failed << " max measured/bound=" << worst;
}

void criterion10(Outcome& o) {
  const ModelPtr cyc = build_cyclic_phase_space(8);
  double lo = kInfinity, hi = 0.0;
  for (Index x = 0; x < cyc->size(); ++x) {
    const double v = measure_QxQ(*cyc, x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double cyc_spread = hi - lo;

  const double step = 0.01;
  const ModelPtr line = build_real_line(6.0, step);
  double line_dev = 0.0;
  for (double x : {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0})
    line_dev = std::max(line_dev, std::abs(measure_QxQ(*line, line->locate(x)) - 4.0));

  AffineGridParams ap;
  ap.x_half_width = 4.0;
  ap.x_step = 0.05;
  ap.a_min = 1.0 / 128.0;
  ap.a_max = 4.0;
  ap.a_ratio = 1.05;
  const ModelPtr aff = build_affine_grid(ap);
  const double first = measure_QxQ(*aff, aff->locate(0.0, 1.0));
  const double last = measure_QxQ(*aff, aff->locate(0.0, 1.0 / 16.0));
  o.require(cyc_spread <= 1e-12, "cyclic constant");
  // The grid measure of Q x Q on the line is 4 - 3h; the tolerance is that quadrature error.
  o.require(line_dev <= 3.0 * step + 1e-12, "line constant 4 within quadrature tolerance");
  o.require(last / first >= 3.0, "affine growth >= 3x from a = 1 to 1/16");
  o.detail << "cyclic spread=" << cyc_spread << " line |mu-4|=" << line_dev << " affine growth=" << last / first;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0 means no runtime limit
    std::function<void(Outcome&)> run;
  };
  const Criterion criteria[] = {
      {1, "real-line counterexample", 5.0, criterion1},
      {2, "affine counterexample", 30.0, criterion2},
      {3, "exact Gabor identities", 5.0, criterion3},
      {4, "almost-tight frames", 5.0, criterion4},
      {5, "dual frames of molecules", 10.0, criterion5},
      {6, "Riesz machinery", 0.0, criterion6},
      {7, "CD-matrix soundness", 0.0, criterion7},
      {8, "quasi-norm structure", 0.0, criterion8},
      {9, "coorbit factorizations", 0.0, criterion9},
      {10, "IN diagnostic", 0.0, criterion10},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_s > 0.0 && secs > c.limit_s) o.require(false, "runtime limit exceeded");
    std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << ") " << std::fixed;
    std::cout.precision(2);
    std::cout << secs << "s";
    if (c.limit_s > 0.0) std::cout << " / " << c.limit_s << "s";
    std::cout.unsetf(std::ios::fixed);
    std::cout.precision(6);
    std::cout << ": " << o.detail.str() << std::endl;
    if (!o.ok) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
