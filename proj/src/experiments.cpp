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

#include "coorbit/experiments.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "coorbit/rng.hpp"

namespace coorbit {

using nlohmann::json;

namespace {

template <typename T>
T read(const json& j, const char* key, const T& fallback) {
  try {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
  } catch (const json::exception& e) {
    throw InvalidParameter(std::string("config key '") + key + "': " + e.what());
  }
}

std::string label(const std::string& name, const std::string& key, double v) {
  std::ostringstream os;
  os << name << '[' << key << '=' << v << ']';
  return os.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParameter(what);
}

void validate_cyclic(int n, double p, double s) {
  require(n >= 2, "N must be at least 2");
  require(p > 0.0 && p <= 1.0, "p must lie in (0, 1]");
  require(s >= 0.0, "weight exponent must be nonnegative");
}

PWeight poly_weight(const ModelPtr& model, double s, double p) {
  std::ostringstream id;
  id << "poly(" << s << ")";
  return PWeight(model, polynomial_weight(*model, s), p, id.str());
}

double max_abs_entry(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// {(k, l) : k = ok mod sk, l = ol mod sl}
SampleSet cyclic_sublattice(const ModelPtr& model, int sk, int sl, int ok, int ol) {
  std::vector<Index> pts;
  const int n = model->cyclic_order();
  for (int k = ok; k < n; k += sk)
    for (int l = ol; l < n; l += sl) pts.push_back(model->locate(k, l));
  return SampleSet(model, std::move(pts));
}

// Compares pass flags of two reports metric by metric.
void require_same_flags(const Report& coarse, const Report& fine, double rel_tol) {
  for (const auto& m : coarse.metrics) {
    const Metric* other = fine.find(m.name);
    if (!other) continue;
    if (m.pass != other->pass)
      throw ResolutionError("pass flag of '" + m.name + "' flips at half step");
    if (rel_tol > 0.0 && std::isfinite(m.value) && std::isfinite(other->value)) {
      const double scale = std::max(std::abs(m.value), std::abs(other->value));
      if (scale > 0.0 && std::abs(m.value - other->value) > rel_tol * scale) {
        std::ostringstream os;
        os << "'" << m.name << "' moves from " << m.value << " to " << other->value << " at half step";
        throw ResolutionError(os.str());
      }
    }
  }
}

}  // namespace

// ---- configs -------------------------------------------------------------

RealLineConfig RealLineConfig::from_json(const json& j) {
  RealLineConfig c;
  c.t_list = read(j, "T_list", c.t_list);
  c.half_width = read(j, "half_width", c.half_width);
  c.step = read(j, "step", c.step);
  c.resolution_check = read(j, "resolution_check", c.resolution_check);
  require(!c.t_list.empty(), "T_list must not be empty");
  require(c.step > 0.0 && c.step < 0.5, "step must lie in (0, 0.5)");
  return c;
}

json RealLineConfig::to_json() const {
  return {{"T_list", t_list}, {"half_width", half_width}, {"step", step}, {"resolution_check", resolution_check}};
}

AffineConfig AffineConfig::from_json(const json& j) {
  AffineConfig c;
  auto& q = c.quadrature;
  q.alpha = read(j, "alpha", q.alpha);
  q.beta = read(j, "beta", q.beta);
  q.log_step = read(j, "log_step", q.log_step);
  q.log_half_width = read(j, "log_half_width", q.log_half_width);
  q.z_step = read(j, "z_step", q.z_step);
  q.z_half_width = read(j, "z_half_width", q.z_half_width);
  c.a_list = read(j, "a_list", c.a_list);
  c.b_list = read(j, "B_list", c.b_list);
  c.resolution_check = read(j, "resolution_check", c.resolution_check);
  q.validate();
  require(!c.a_list.empty(), "a_list must not be empty");
  for (double a : c.a_list) require(a >= 1.0, "a_list entries must be at least 1");
  require(c.b_list.size() >= 2, "B_list needs two entries");
  return c;
}

json AffineConfig::to_json() const {
  const auto& q = quadrature;
  return {{"alpha", q.alpha},       {"beta", q.beta},       {"log_step", q.log_step},
          {"log_half_width", q.log_half_width}, {"z_step", q.z_step}, {"z_half_width", q.z_half_width},
          {"a_list", a_list},       {"B_list", b_list},     {"resolution_check", resolution_check}};
}

GaborConfig GaborConfig::from_json(const json& j) {
  GaborConfig c;
  c.n = read(j, "N", c.n);
  c.lattice_steps = read(j, "lattice_steps", c.lattice_steps);
  c.window = read(j, "window", c.window);
  c.eps_target = read(j, "eps_target", c.eps_target);
  c.p = read(j, "p", c.p);
  c.weight_exponent = read(j, "weight_exponent", c.weight_exponent);
  c.refinement_blocks = read(j, "refinement_blocks", c.refinement_blocks);
  c.seed = read(j, "seed", c.seed);
  validate_cyclic(c.n, c.p, c.weight_exponent);
  require(c.eps_target > 0.0 && c.eps_target <= 1.0, "eps_target must lie in (0, 1]");
  for (int s : c.lattice_steps) require(s >= 1 && c.n % s == 0, "lattice steps must divide N");
  for (int b : c.refinement_blocks) require(b >= 1 && c.n % b == 0, "refinement blocks must divide N");
  return c;
}

json GaborConfig::to_json() const {
  return {{"N", n}, {"lattice_steps", lattice_steps}, {"window", window}, {"eps_target", eps_target},
          {"p", p}, {"weight_exponent", weight_exponent}, {"refinement_blocks", refinement_blocks},
          {"seed", seed}};
}

RieszConfig RieszConfig::from_json(const json& j) {
  RieszConfig c;
  c.n = read(j, "N", c.n);
  c.separation = read(j, "separation", c.separation);
  c.window = read(j, "window", c.window);
  c.p = read(j, "p", c.p);
  c.weight_exponent = read(j, "weight_exponent", c.weight_exponent);
  c.seed = read(j, "seed", c.seed);
  validate_cyclic(c.n, c.p, c.weight_exponent);
  require(c.separation >= 1 && c.n % c.separation == 0, "separation must divide N");
  return c;
}

json RieszConfig::to_json() const {
  return {{"N", n}, {"separation", separation}, {"window", window}, {"p", p},
          {"weight_exponent", weight_exponent}, {"seed", seed}};
}

InDiagnosticConfig InDiagnosticConfig::from_json(const json& j) {
  InDiagnosticConfig c;
  if (j.contains("model")) c.model = j.at("model");
  c.points = read(j, "points", c.points);
  c.growth_factor = read(j, "growth_factor", c.growth_factor);
  require(c.growth_factor >= 1.0, "growth_factor must be at least 1");
  return c;
}

json InDiagnosticConfig::to_json() const {
  return {{"model", model}, {"points", points}, {"growth_factor", growth_factor}};
}

CoorbitNormConfig CoorbitNormConfig::from_json(const json& j) {
  CoorbitNormConfig c;
  c.n = read(j, "N", c.n);
  c.p = read(j, "p", c.p);
  c.weight_exponent = read(j, "weight_exponent", c.weight_exponent);
  c.window = read(j, "window", c.window);
  c.alt_window = read(j, "alt_window", c.alt_window);
  c.samples = read(j, "samples", c.samples);
  c.seed = read(j, "seed", c.seed);
  validate_cyclic(c.n, c.p, c.weight_exponent);
  require(c.samples >= 1, "samples must be positive");
  return c;
}

json CoorbitNormConfig::to_json() const {
  return {{"N", n}, {"p", p}, {"weight_exponent", weight_exponent}, {"window", window},
          {"alt_window", alt_window}, {"samples", samples}, {"seed", seed}};
}

CoorbitEmbedConfig CoorbitEmbedConfig::from_json(const json& j) {
  CoorbitEmbedConfig c;
  c.n = read(j, "N", c.n);
  c.lattice_step = read(j, "lattice_step", c.lattice_step);
  c.window = read(j, "window", c.window);
  c.y_p = read(j, "y_p", c.y_p);
  c.y_weight_exponent = read(j, "y_weight_exponent", c.y_weight_exponent);
  c.z_p = read(j, "z_p", c.z_p);
  c.z_weight_exponent = read(j, "z_weight_exponent", c.z_weight_exponent);
  c.samples = read(j, "samples", c.samples);
  c.random_operators = read(j, "random_operators", c.random_operators);
  c.seed = read(j, "seed", c.seed);
  validate_cyclic(c.n, c.y_p, c.y_weight_exponent);
  validate_cyclic(c.n, c.z_p, c.z_weight_exponent);
  require(c.n % 2 == 0, "N must be even");
  require(c.lattice_step >= 1 && c.n % c.lattice_step == 0, "lattice_step must divide N");
  require(c.samples >= 1 && c.random_operators >= 0, "sample counts must be nonnegative");
  return c;
}

json CoorbitEmbedConfig::to_json() const {
  return {{"N", n}, {"lattice_step", lattice_step}, {"window", window}, {"y_p", y_p},
          {"y_weight_exponent", y_weight_exponent}, {"z_p", z_p}, {"z_weight_exponent", z_weight_exponent},
          {"samples", samples}, {"random_operators", random_operators}, {"seed", seed}};
}

// ---- counterexamples -----------------------------------------------------

namespace {

Report realline_report(const RealLineConfig& cfg) {
  const double e = std::numbers::e;
  Report r;
  r.command = "counterexample realline";
  r.parameters = cfg.to_json();
  const auto rows = realline_counterexample(cfg.t_list, cfg.half_width, cfg.step);
  Curve norms{"norm_f", {}}, ratios{"ratio", {}};
  for (const auto& row : rows) {
    const double upper = e * std::exp(-row.t) * 1.05;
    r.metrics.push_back(within(label("conv_at_zero", "T", row.t), row.conv_at_zero, 1.0, 2.0 * cfg.step));
    r.metrics.push_back(at_most(label("norm_f", "T", row.t), row.norm_f, upper));
    r.metrics.push_back(at_most(label("norm_g", "T", row.t), row.norm_g, upper));
    r.metrics.push_back(at_least(label("norm_conv", "T", row.t), row.norm_conv, (e - 1.0 / e) * 0.95));
    r.metrics.push_back(measured(label("ratio", "T", row.t), row.ratio));
    norms.points.push_back({row.t, row.norm_f, upper, row.norm_f <= upper});
    ratios.points.push_back({row.t, row.ratio, std::nullopt, std::nullopt});
  }
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double expected = std::exp(2.0 * (rows[k].t - rows[0].t));
    std::ostringstream name;
    name << "ratio_growth[T=" << rows[k].t << "/T=" << rows[0].t << ']';
    r.metrics.push_back(within(name.str(), rows[k].ratio / rows[0].ratio, expected, 0.1 * expected));
  }
  r.curves = {norms, ratios};
  return r;
}

Report affine_report(const AffineConfig& cfg) {
  const auto& q = cfg.quadrature;
  Report r;
  r.command = "counterexample affine";
  r.parameters = cfg.to_json();
  r.metrics.push_back(at_most("sup_f", affine_sup(q), 1.0));
  Curve lower{"lower_bound", {}}, partial{"partial_norm", {}};
  for (double a : cfg.a_list) {
    const double v = affine_self_convolution(0.0, a, q);
    const double bound = 0.95 * std::pow(a, -q.beta) / (2.0 * q.beta);
    r.metrics.push_back(at_least(label("self_convolution", "a", a), v, bound));
    lower.points.push_back({a, v, bound, v >= bound});
  }
  std::vector<double> norms;
  for (double b : cfg.b_list) {
    norms.push_back(affine_partial_norm(b, q));
    r.metrics.push_back(measured(label("partial_norm", "B", b), norms.back()));
    partial.points.push_back({b, norms.back(), std::nullopt, std::nullopt});
  }
  const double b0 = cfg.b_list.front(), b1 = cfg.b_list.back();
  const double expected = (std::pow(b1, 1.0 - q.beta) - 1.0) / (std::pow(b0, 1.0 - q.beta) - 1.0);
  r.metrics.push_back(at_least("partial_norm_growth", norms.back() / norms.front(), 0.8 * expected));
  r.metrics.push_back(measured("partial_norm_growth_asymptotic", expected));
  r.curves = {lower, partial};
  return r;
}

}  // namespace

Report run_counterexample_realline(const RealLineConfig& config) {
  Report r = realline_report(config);
  if (config.resolution_check) {
    RealLineConfig fine = config;
    fine.step /= 2.0;
    fine.resolution_check = false;
    require_same_flags(r, realline_report(fine), 0.0);
    r.metrics.push_back(flag("resolution_stable", true));
  }
  return r;
}

Report run_counterexample_affine(const AffineConfig& config) {
  Report r = affine_report(config);
  if (config.resolution_check) {
    AffineConfig fine = config;
    fine.quadrature = config.quadrature.halved();
    fine.resolution_check = false;
    require_same_flags(r, affine_report(fine), 0.05);
    r.metrics.push_back(flag("resolution_stable", true));
  }
  return r;
}

// ---- frames --------------------------------------------------------------

double majorant_excess(const FrameSystem& fs, const AtomFamily& dual, const RealFunction& psi) {
  const GroupModel& m = *fs.rep->model();
  double excess = -kInfinity;
  for (Index i = 0; i < fs.sample.size(); ++i) {
    const ComplexFunction v = voice_transform(*fs.rep, fs.window, dual.atoms.col(i));
    const Index li = m.inv(fs.sample[i]);
    for (Index x = 0; x < m.size(); ++x) {
      const Index z = m.mul(li, x);
      if (z == kAbsent) continue;
      excess = std::max(excess, std::abs(v(x)) - fs.tau(i) * psi(z));
    }
  }
  return excess;
}

Report run_gabor_suite(const GaborConfig& cfg) {
  const ModelPtr model = build_cyclic_phase_space(cfg.n);
  const RepPtr rep = Representation::gabor(model);
  const CVector g = window_by_id(cfg.window, cfg.n);
  const PWeight w = poly_weight(model, cfg.weight_exponent, cfg.p);
  Report r;
  r.command = "gabor frame";
  r.parameters = cfg.to_json();
  r.seed = cfg.seed;

  for (int step : cfg.lattice_steps) {
    const SampleSet sample = cyclic_lattice(model, step);
    const FrameSystem fs = build_almost_tight_frame(rep, g, sample, block_neighborhood(*model, 0, step - 1));
    const Index d = fs.frame_operator.rows();
    const double eps = spectral_norm(fs.frame_operator - CMatrix::Identity(d, d));
    r.metrics.push_back(measured(label("lower_bound", "step", step), fs.lower));
    r.metrics.push_back(measured(label("upper_bound", "step", step), fs.upper));
    r.metrics.push_back(measured(label("eps", "step", step), eps));
    if (step == 1) r.metrics.push_back(at_most("full_lattice_identity_residual", eps, 1e-10));
    if (!(fs.lower > 1e-12)) {
      r.metrics.push_back(measured(label("is_frame", "step", step), 0.0));
      continue;
    }
    const SolveMethod method = eps < cfg.eps_target ? SolveMethod::series : SolveMethod::direct;
    const AtomFamily dual = dual_frame(fs, w, method);
    r.metrics.push_back(at_most(label("reconstruction_error", "step", step), dual.error, 1e-9));
    r.metrics.push_back(measured(label("neumann_terms", "step", step), dual.series_terms));
    r.metrics.push_back(measured(label("dual_envelope_norm", "step", step), dual.certificate->amalgam_value));
    if (eps < 1.0) {
      const AtomFamily series = method == SolveMethod::series ? dual : dual_frame(fs, w, SolveMethod::series);
      const AtomFamily direct = dual_frame(fs, w, SolveMethod::direct);
      r.metrics.push_back(at_most(label("series_vs_direct", "step", step),
                                  max_abs_entry(series.atoms - direct.atoms), 1e-9));
      const DualMajorant maj = dual_majorant(fs);
      r.metrics.push_back(at_most(label("majorant_excess", "step", step), majorant_excess(fs, series, maj.psi), 1e-8));
    }
    const KernelEnvelopeReport kernel = frame_kernel_envelope_check(fs, w);
    r.metrics.push_back(flag(label("kernel_envelope", "step", step), kernel.holds));
    const AtomFamily parseval = parseval_frame(fs, w, method);
    r.metrics.push_back(at_most(label("parseval_error", "step", step), parseval.error, 1e-8));
  }

  Curve refinement{"refinement_condition", {}};
  double previous = kInfinity;
  bool monotone = true;
  for (int block : cfg.refinement_blocks) {
    const SampleSet sample = cyclic_lattice(model, block);
    const FrameSystem fs = build_almost_tight_frame(rep, g, sample, block_neighborhood(*model, 0, block - 1));
    const double ratio = fs.lower > 1e-12 ? fs.upper / fs.lower : kInfinity;
    const bool ok = refinement.points.empty() || std::isinf(previous) || ratio <= previous + 1e-3;
    monotone = monotone && ok;
    refinement.points.push_back({static_cast<double>(block), ratio, std::nullopt, ok});
    previous = ratio;
  }
  r.metrics.push_back(flag("refinement_monotone", monotone));
  r.curves.push_back(std::move(refinement));
  return r;
}

Report run_riesz_suite(const RieszConfig& cfg) {
  const ModelPtr model = build_cyclic_phase_space(cfg.n);
  const RepPtr rep = Representation::gabor(model);
  const CVector g = window_by_id(cfg.window, cfg.n);
  const PWeight w = poly_weight(model, cfg.weight_exponent, cfg.p);
  const SampleSet sample = cyclic_lattice(model, cfg.separation);
  Report r;
  r.command = "gabor riesz";
  r.parameters = cfg.to_json();
  r.seed = cfg.seed;

  const CDMatrix gram = gramian(*rep, g, sample);
  const auto [lo, hi] = riesz_bounds(gram);
  const CMatrix atoms = atoms_at(*rep, g, sample);
  Eigen::JacobiSVD<CMatrix> svd(atoms);
  const auto& sv = svd.singularValues();
  const double oracle_lo = sv.minCoeff() * sv.minCoeff(), oracle_hi = sv.maxCoeff() * sv.maxCoeff();
  r.metrics.push_back(within("riesz_lower", lo, oracle_lo, 1e-6));
  r.metrics.push_back(within("riesz_upper", hi, oracle_hi, 1e-6));

  const SchurBounds schur = schur_bounds(gram);
  r.metrics.push_back(at_least("schur_l2_bound", schur.op_bound_l2, spectral_norm(gram.entries) * (1.0 - 1e-12)));

  const AtomFamily bio = biorthogonal_system(*rep, g, sample);
  r.metrics.push_back(at_most("biorthogonality_deviation", bio.error, 1e-9));
  r.metrics.push_back(measured("biorthogonal_terms", bio.series_terms));
  const CMatrix id = CMatrix::Identity(sample.size(), sample.size());
  r.metrics.push_back(at_most("moment_identity_residual", max_abs_entry(atoms.adjoint() * bio.atoms - id), 1e-9));
  const AtomFamily ortho = orthonormalize(*rep, g, sample);
  r.metrics.push_back(at_most("orthonormalization_deviation", ortho.error, 1e-9));
  if (bio.contraction < 1.0) {
    const AtomFamily direct = biorthogonal_system(*rep, g, sample, SolveMethod::direct);
    const AtomFamily series = biorthogonal_system(*rep, g, sample, SolveMethod::series);
    r.metrics.push_back(at_most("series_vs_direct", max_abs_entry(series.atoms - direct.atoms), 1e-9));
  }
  const MoleculeCertificate cert = fit_envelope(*rep, g, bio.atoms, sample, w);
  r.metrics.push_back(measured("biorthogonal_envelope_norm", cert.amalgam_value));
  r.metrics.push_back(at_most("biorthogonal_envelope_violation", cert.max_violation, 1e-12));
  return r;
}

// ---- IN diagnostic -------------------------------------------------------

Report run_in_diagnostic(const InDiagnosticConfig& cfg) {
  const ModelPtr model = build_model(cfg.model);
  std::vector<Index> points;
  if (cfg.points.empty()) {
    switch (model->kind()) {
      case ModelKind::cyclic:
        for (Index x = 0; x < model->size(); ++x) points.push_back(x);
        break;
      case ModelKind::line:
        for (double c : {-2.0, -1.0, 0.0, 1.0, 2.0}) points.push_back(model->locate(c));
        break;
      case ModelKind::affine:
        for (double a : {1.0, 0.5, 0.25, 0.125, 0.0625}) points.push_back(model->locate(0.0, a));
        break;
    }
  } else {
    for (const auto& c : cfg.points) points.push_back(model->locate(c[0], c[1]));
  }
  for (Index x : points)
    if (x == kAbsent) throw InvalidPoint("diagnostic point is not on the carrier");

  const auto rows = in_diagnostic(*model, points);
  Report r;
  r.command = "diagnostic in-group";
  r.parameters = cfg.to_json();
  r.parameters["model_resolved"] = model->parameters();
  Curve curve{"measure_QxQ", {}};
  double lo = kInfinity, hi = -kInfinity;
  for (const auto& row : rows) {
    const double param = model->kind() == ModelKind::affine ? row.c1 : row.c0;
    curve.points.push_back({param, row.measure, std::nullopt, std::nullopt});
    lo = std::min(lo, row.measure);
    hi = std::max(hi, row.measure);
  }
  switch (model->kind()) {
    case ModelKind::cyclic:
      r.metrics.push_back(within("measure_spread", hi - lo, 0.0, 1e-12));
      break;
    case ModelKind::line:
      r.metrics.push_back(within("measure_spread", hi - lo, 0.0, 1e-9));
      r.metrics.push_back(within("measure_value", hi, 4.0, 3.0 * model->step() + 1e-12));
      break;
    case ModelKind::affine: {
      bool increasing = true;
      for (std::size_t k = 1; k < rows.size(); ++k) increasing = increasing && rows[k].measure > rows[k - 1].measure;
      r.metrics.push_back(flag("strictly_increasing", increasing));
      r.metrics.push_back(at_least("growth", rows.back().measure / rows.front().measure, cfg.growth_factor));
      break;
    }
  }
  r.curves.push_back(std::move(curve));
  return r;
}

// ---- coorbit -------------------------------------------------------------

Report run_coorbit_norm(const CoorbitNormConfig& cfg) {
  const ModelPtr model = build_cyclic_phase_space(cfg.n);
  const RepPtr rep = Representation::gabor(model);
  const CVector g = window_by_id(cfg.window, cfg.n);
  const CVector h = window_by_id(cfg.alt_window, cfg.n);
  const PWeight w = poly_weight(model, cfg.weight_exponent, cfg.p);
  const CoorbitContext ctx = make_context(rep, g, QuasiNormSpec::with(cfg.p, w, Flavor::plain));
  const auto samples = basis_and_random(cfg.n, cfg.samples, cfg.seed, 0x5a);
  Report r;
  r.command = "coorbit norm";
  r.parameters = cfg.to_json();
  r.seed = cfg.seed;

  {
    const CoorbitContext l2 = make_context(rep, g, QuasiNormSpec::lebesgue(2.0));
    RatioRange range;
    for (const auto& f : samples) range.add(coorbit_norm(l2, f) / f.norm());
    const double cap = std::sqrt(static_cast<double>(model->q_neighborhood().size()));
    r.metrics.push_back(at_least("l2_ratio_min", range.min, 1.0 - 1e-12));
    r.metrics.push_back(at_most("l2_ratio_max", range.max, cap * (1.0 + 1e-12)));
  }
  {
    double worst = 0.0;
    for (Index x = 0; x < model->size(); ++x)
      for (const auto& f : samples) {
        const double base = coorbit_norm(ctx, f);
        if (base > 0.0) worst = std::max(worst, coorbit_norm(ctx, rep->apply(x, f)) / (w(x) * base));
      }
    r.metrics.push_back(at_most("translation_covariance_ratio", worst, 1.0 + 1e-12));
  }
  {
    const RatioRange self = window_independence_ratio(ctx, g, samples);
    r.metrics.push_back(within("same_window_ratio_min", self.min, 1.0, 1e-12));
    r.metrics.push_back(within("same_window_ratio_max", self.max, 1.0, 1e-12));
    const Index x0 = model->locate(1, 2);
    const RatioRange shifted = window_independence_ratio(ctx, rep->apply(x0, g), samples);
    r.metrics.push_back(at_least("shifted_window_ratio_min", shifted.min, (1.0 - 1e-12) / w(x0)));
    r.metrics.push_back(at_most("shifted_window_ratio_max", shifted.max, w(x0) * (1.0 + 1e-12)));
    const RatioRange alt = window_independence_ratio(ctx, h, samples);
    r.metrics.push_back(flag("alt_window_ratio_finite", alt.finite()));
    r.metrics.push_back(measured("alt_window_ratio_min", alt.min));
    r.metrics.push_back(measured("alt_window_ratio_max", alt.max));
  }
  {
    const RatioRange plain = wiener_vs_plain_ratio(ctx, samples);
    r.metrics.push_back(flag("wiener_vs_plain_finite", plain.finite()));
    r.metrics.push_back(measured("wiener_vs_plain_min", plain.min));
    r.metrics.push_back(measured("wiener_vs_plain_max", plain.max));
    r.metrics.push_back(measured("wiener_vs_plain_at_window", wiener_vs_plain_ratio(ctx, {g}).max));
    const PWeight w1 = poly_weight(model, cfg.weight_exponent, 1.0);
    const CoorbitContext l1 = make_context(rep, g, QuasiNormSpec::with(1.0, w1, Flavor::plain));
    const RatioRange r1 = wiener_vs_plain_ratio(l1, samples);
    r.metrics.push_back(at_most("wiener_vs_plain_l1_max", r1.max, wiener_vs_plain_bound_l1(l1) * (1.0 + 1e-12)));
  }
  return r;
}

Report run_coorbit_embed(const CoorbitEmbedConfig& cfg) {
  const ModelPtr model = build_cyclic_phase_space(cfg.n);
  const RepPtr rep = Representation::gabor(model);
  const CVector g = window_by_id(cfg.window, cfg.n);
  const PWeight wy = poly_weight(model, cfg.y_weight_exponent, cfg.y_p);
  const PWeight wz = poly_weight(model, cfg.z_weight_exponent, cfg.z_p);
  const CoorbitContext ctx_y = make_context(rep, g, QuasiNormSpec::with(cfg.y_p, wy, Flavor::plain));
  const CoorbitContext ctx_z = make_context(rep, g, QuasiNormSpec::with(cfg.z_p, wz, Flavor::plain));
  Report r;
  r.command = "coorbit embed";
  r.parameters = cfg.to_json();
  r.seed = cfg.seed;

  const SampleSet sample = cyclic_lattice(model, cfg.lattice_step);
  const FrameSystem fs =
      build_almost_tight_frame(rep, g, sample, block_neighborhood(*model, 0, cfg.lattice_step - 1));
  const AtomFamily dual = dual_frame(fs, wy);
  r.metrics.push_back(at_most("dual_reconstruction_error", dual.error, 1e-9));

  const EmbeddingFactorReport same = embedding_check(ctx_y, ctx_y, fs, dual, cfg.samples, cfg.seed);
  r.metrics.push_back(within("same_space_coorbit_constant", same.coorbit_constant, 1.0, 1e-12));
  r.metrics.push_back(within("same_space_sequence_constant", same.sequence_constant, 1.0, 1e-12));

  const EmbeddingFactorReport emb = embedding_check(ctx_y, ctx_z, fs, dual, cfg.samples, cfg.seed);
  r.metrics.push_back(measured("coefficient_norm", emb.coefficient_norm));
  r.metrics.push_back(measured("sequence_embedding_constant", emb.sequence_constant));
  r.metrics.push_back(measured("reconstruction_norm", emb.reconstruction_norm));
  r.metrics.push_back(at_most("coorbit_embedding_constant", emb.coorbit_constant, emb.product * (1.0 + 1e-6)));

  const CalibratedConstants k = calibrate_constants(ctx_y, wy, mix64(cfg.seed ^ 0xca11b));
  r.metrics.push_back(measured("calibrated_coefficient_constant", k.coefficient));
  r.metrics.push_back(measured("calibrated_reconstruction_constant", k.reconstruction));
  r.parameters["calibration"] = k.to_json();

  struct Lambda {
    const char* name;
    int sk, sl, ok, ol;
  };
  const Lambda lambdas[] = {{"full", 1, 1, 0, 0},       {"lattice2", 2, 2, 0, 0}, {"shifted2", 2, 2, 1, 1},
                            {"columns2", 2, 1, 0, 0},   {"rows2", 1, 2, 0, 0}};
  for (const auto& lam : lambdas) {
    const SampleSet s = cyclic_sublattice(model, lam.sk, lam.sl, lam.ok, lam.ol);
    MoleculeFamily fam{s, atoms_at(*rep, g, s), {}};
    fam.certificate = fit_envelope(*rep, g, fam.atoms, s, wy);
    const BoundCheck b = coefficient_bound_check(ctx_y, fam, k, cfg.seed);
    r.metrics.push_back(at_most(std::string("coefficient_bound[") + lam.name + "]", b.measured, b.bound));
  }

  std::vector<std::pair<std::string, CMatrix>> ops;
  ops.emplace_back("identity", CMatrix::Identity(cfg.n, cfg.n));
  ops.emplace_back("translation", (*rep)(model->locate(1, 2)));
  for (int t = 0; t < cfg.random_operators; ++t)
    ops.emplace_back("convolution" + std::to_string(t),
                     random_convolution_operator(*rep, 1 + t % 2, mix64(cfg.seed + 0x0c0 + static_cast<std::uint64_t>(t))));
  for (const auto& [name, t] : ops) {
    const OperatorExtensionReport ext = extend_operator_check(ctx_y, wy, t, fs, dual, k, cfg.samples, cfg.seed);
    r.metrics.push_back(at_most("operator_bound[" + name + "]", ext.measured, ext.bound));
  }

  Curve divergence{"sequence_embedding_l1_to_lhalf", {}};
  const QuasiNormSpec l1 = QuasiNormSpec::lebesgue(1.0), lhalf = QuasiNormSpec::lebesgue(0.5);
  for (int step : {4, 2, 1}) {
    if (cfg.n % step != 0) continue;
    const SampleSet s = cyclic_lattice(model, step);
    const SequenceSpaceSpec from{l1, s}, to{lhalf, s};
    double worst = 0.0;
    for (const auto& c : basis_and_random(s.size(), cfg.samples, cfg.seed, 0xd1)) {
      const double den = sequence_norm(c, from);
      if (den > 0.0) worst = std::max(worst, sequence_norm(c, to) / den);
    }
    divergence.points.push_back({static_cast<double>(s.size()), worst, std::nullopt, std::nullopt});
  }
  r.curves.push_back(std::move(divergence));
  return r;
}

Report run_command(const std::string& group, const std::string& name, const json& config) {
  if (group == "counterexample" && name == "realline")
    return run_counterexample_realline(RealLineConfig::from_json(config));
  if (group == "counterexample" && name == "affine") return run_counterexample_affine(AffineConfig::from_json(config));
  if (group == "gabor" && name == "frame") return run_gabor_suite(GaborConfig::from_json(config));
  if (group == "gabor" && name == "riesz") return run_riesz_suite(RieszConfig::from_json(config));
  if (group == "diagnostic" && name == "in-group") return run_in_diagnostic(InDiagnosticConfig::from_json(config));
  if (group == "coorbit" && name == "norm") return run_coorbit_norm(CoorbitNormConfig::from_json(config));
  if (group == "coorbit" && name == "embed") return run_coorbit_embed(CoorbitEmbedConfig::from_json(config));
  throw InvalidParameter("unknown command '" + group + " " + name + "'");
}

}  // namespace coorbit
