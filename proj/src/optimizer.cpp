#include "qgate/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "qgate/propagator.hpp"

namespace qgate {

namespace {

constexpr double kAreaStep = 0.25;
constexpr double kPhiStep = 0.1;

double square(double v) { return v * v; }

std::vector<double> flatten(const ParameterVector& p) {
  std::vector<double> x;
  x.reserve(p.areas.size() + p.phis.size());
  x.insert(x.end(), p.areas.begin(), p.areas.end());
  x.insert(x.end(), p.phis.begin(), p.phis.end());
  return x;
}

ParameterVector unflatten(std::span<const double> x) {
  const std::size_t n = x.size() / 2;
  ParameterVector p;
  p.areas.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n));
  p.phis.assign(x.begin() + static_cast<std::ptrdiff_t>(n), x.end());
  return p;
}

int effective_max_iterations(const OptimizerConfig& cfg) {
  return cfg.max_iterations > 0 ? cfg.max_iterations : 400 * 2 * cfg.n_pulses;
}

}  // namespace

PulseSequence decode_parameters(const ParameterVector& p) {
  if (p.areas.size() != p.phis.size()) {
    throw std::invalid_argument("parameter vector needs one angle per area");
  }
  std::vector<Pulse> pulses;
  pulses.reserve(p.areas.size());
  for (std::size_t k = 0; k < p.areas.size(); ++k) {
    pulses.push_back({p.areas[k], make_structural_vector(p.phis[k])});
  }
  return PulseSequence(std::move(pulses));
}

ParameterVector encode_parameters(const PulseSequence& seq) {
  ParameterVector p;
  for (const Pulse& pl : seq.pulses()) {
    p.areas.push_back(pl.area);
    p.phis.push_back(polar_angle(pl.e));
  }
  return p;
}

void validate_config(const OptimizerConfig& cfg) {
  if (cfg.n_pulses < 1 || cfg.n_pulses > kMaxPulses) {
    throw std::invalid_argument("pulse count must be between 1 and 6");
  }
  if (cfg.n_starts < 1) throw std::invalid_argument("need at least one start");
  if (cfg.convergence_tol <= 0.0) throw std::invalid_argument("convergence tolerance must be positive");
  if (!(cfg.area_range[0] <= cfg.area_range[1])) {
    throw std::invalid_argument("area sampling range is inverted");
  }
  const double sigma = cfg.constraints.sigma;
  if (sigma < 0.0 || sigma >= 1.0) throw std::invalid_argument("sigma must lie in [0, 1)");
  if (cfg.constraints.mode != ConstraintMode::AbsB && std::asin(sigma) > std::acos(sigma)) {
    throw std::invalid_argument("no feasible structural angle: sigma exceeds 1/sqrt(2)");
  }
}

double constraint_penalty(const PulseSequence& seq, const ConstraintSpec& c) {
  double pen = 0.0;
  for (const Pulse& p : seq.pulses()) {
    pen += square(std::max(0.0, std::abs(p.area) - c.area_max));
    switch (c.mode) {
      case ConstraintMode::AbsB:
        pen += square(std::max(0.0, c.sigma - std::abs(p.e.b)));
        break;
      case ConstraintMode::Positive:
        pen += square(std::max(0.0, c.sigma - p.e.a));
        pen += square(std::max(0.0, c.sigma - p.e.b));
        break;
      case ConstraintMode::AbsBoth:
        pen += square(std::max(0.0, c.sigma - std::abs(p.e.a)));
        pen += square(std::max(0.0, c.sigma - std::abs(p.e.b)));
        break;
    }
  }
  return pen;
}

double objective_error(const ParameterVector& p, const OptimizerConfig& cfg) {
  const PulseSequence seq = decode_parameters(p);
  const FidelityResult f = fidelity(gate_diagonal(seq));
  return f.error + cfg.penalty_weight * constraint_penalty(seq, cfg.constraints);
}

double mechanism_guided_error(const ParameterVector& p, const OptimizerConfig& cfg) {
  if (!cfg.target_mechanism) {
    throw std::invalid_argument("mechanism-guided objective requires a target mechanism");
  }
  const PulseSequence seq = decode_parameters(p);
  const MechanismBuckets buckets = bucket_amplitudes(seq, SubsystemId::V);
  GateDiagonal g;
  g.uV = bucket_value(buckets, *cfg.target_mechanism);
  g.uA = return_amplitude(seq, SubsystemId::A);
  g.uB = return_amplitude(seq, SubsystemId::B);
  const FidelityResult f = fidelity(g);
  double err = f.error + cfg.penalty_weight * constraint_penalty(seq, cfg.constraints);
  if (cfg.mech_penalty_weight > 0.0) {
    const double others = std::abs(buckets.u0) + std::abs(buckets.u1) + std::abs(buckets.ud) +
                          std::abs(buckets.u2) - std::abs(g.uV);
    err += cfg.mech_penalty_weight * others;
  }
  return err;
}

SimplexResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                   std::vector<double> x0, const SimplexOptions& opt) {
  const std::size_t dim = x0.size();
  if (dim == 0 || opt.initial_steps.size() != dim) {
    throw std::invalid_argument("simplex needs one initial step per coordinate");
  }

  std::vector<std::vector<double>> verts(dim + 1, x0);
  for (std::size_t i = 0; i < dim; ++i) verts[i + 1][i] += opt.initial_steps[i];

  std::vector<double> fv(dim + 1);
  bool aborted = false;
  const auto eval = [&](std::span<const double> x) {
    const double v = f(x);
    if (!std::isfinite(v)) aborted = true;
    return v;
  };
  for (std::size_t i = 0; i <= dim; ++i) fv[i] = eval(verts[i]);

  std::vector<std::size_t> order(dim + 1);
  std::vector<double> centroid(dim), xr(dim), xe(dim), xc(dim);
  int iter = 0;
  bool converged = false;

  while (!aborted) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&fv](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[dim - 1];

    if (fv[worst] - fv[best] < opt.convergence_tol) {
      double diam = 0.0;
      for (std::size_t i = 1; i <= dim; ++i) {
        for (std::size_t d = 0; d < dim; ++d) {
          diam = std::max(diam, std::abs(verts[i][d] - verts[0][d]));
        }
      }
      if (diam < opt.x_tol) {
        converged = true;
        break;
      }
    }
    if (iter >= opt.max_iterations) break;
    ++iter;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += verts[i][d];
    }
    for (double& c : centroid) c /= static_cast<double>(dim);

    for (std::size_t d = 0; d < dim; ++d) xr[d] = centroid[d] + (centroid[d] - verts[worst][d]);
    const double fr = eval(xr);

    if (fr < fv[best]) {
      for (std::size_t d = 0; d < dim; ++d) xe[d] = centroid[d] + 2.0 * (centroid[d] - verts[worst][d]);
      const double fe = eval(xe);
      if (fe < fr) {
        verts[worst] = xe;
        fv[worst] = fe;
      } else {
        verts[worst] = xr;
        fv[worst] = fr;
      }
    } else if (fr < fv[second_worst]) {
      verts[worst] = xr;
      fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      if (outside) {
        for (std::size_t d = 0; d < dim; ++d) xc[d] = centroid[d] + 0.5 * (xr[d] - centroid[d]);
      } else {
        for (std::size_t d = 0; d < dim; ++d) xc[d] = centroid[d] - 0.5 * (centroid[d] - verts[worst][d]);
      }
      const double fc = eval(xc);
      if ((outside && fc <= fr) || (!outside && fc < fv[worst])) {
        verts[worst] = xc;
        fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= dim; ++i) {
          if (i == best) continue;
          for (std::size_t d = 0; d < dim; ++d) {
            verts[i][d] = verts[best][d] + 0.5 * (verts[i][d] - verts[best][d]);
          }
          fv[i] = eval(verts[i]);
        }
      }
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i <= dim; ++i) {
    if (fv[i] < fv[best]) best = i;
  }
  return SimplexResult{verts[best], fv[best], iter, converged && !aborted};
}

OptimizationOutcome nelder_mead(const std::function<double(const ParameterVector&)>& f,
                                const ParameterVector& x0, const OptimizerConfig& cfg) {
  const std::size_t n = x0.areas.size();
  SimplexOptions opt;
  opt.initial_steps.assign(n, kAreaStep);
  opt.initial_steps.insert(opt.initial_steps.end(), n, kPhiStep);
  opt.convergence_tol = cfg.convergence_tol;
  opt.max_iterations = effective_max_iterations(cfg);

  const auto flat = [&f](std::span<const double> x) { return f(unflatten(x)); };
  const SimplexResult r = nelder_mead_minimize(flat, flatten(x0), opt);

  OptimizationOutcome out;
  out.params = unflatten(r.x);
  out.error = r.fx;
  out.iterations = r.iterations;
  out.converged = r.converged;
  return out;
}

ParameterVector sample_start(const OptimizerConfig& cfg, Rng& rng) {
  const double sigma = cfg.constraints.sigma;
  ParameterVector p;
  p.areas.reserve(static_cast<std::size_t>(cfg.n_pulses));
  p.phis.reserve(static_cast<std::size_t>(cfg.n_pulses));
  for (int k = 0; k < cfg.n_pulses; ++k) {
    p.areas.push_back(rng.uniform(cfg.area_range[0], cfg.area_range[1]));
    double phi = 0.0;
    switch (cfg.constraints.mode) {
      case ConstraintMode::AbsB: {
        const double lo = std::asin(sigma);
        phi = rng.uniform(lo, kPi - lo);
        if (rng.next_double() < 0.5) phi = -phi;  // lower half-plane arc
        break;
      }
      case ConstraintMode::Positive:
        phi = rng.uniform(std::asin(sigma), std::acos(sigma));
        break;
      case ConstraintMode::AbsBoth: {
        const double in_arc = rng.uniform(std::asin(sigma), std::acos(sigma));
        switch (rng.uniform_int(0, 3)) {
          case 0: phi = in_arc; break;
          case 1: phi = kPi - in_arc; break;
          case 2: phi = -kPi + in_arc; break;
          default: phi = -in_arc; break;
        }
        break;
      }
    }
    p.phis.push_back(phi);
  }
  return p;
}

std::vector<OptimizationOutcome> run_multistart(const OptimizerConfig& cfg, int n_threads) {
  validate_config(cfg);
  const std::function<double(const ParameterVector&)> objective =
      cfg.target_mechanism
          ? std::function<double(const ParameterVector&)>(
                [&cfg](const ParameterVector& p) { return mechanism_guided_error(p, cfg); })
          : std::function<double(const ParameterVector&)>(
                [&cfg](const ParameterVector& p) { return objective_error(p, cfg); });

  std::vector<OptimizationOutcome> outcomes(static_cast<std::size_t>(cfg.n_starts));
  std::atomic<int> next{0};
  const auto worker = [&]() {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= cfg.n_starts) return;
      Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(i)));
      const ParameterVector x0 = sample_start(cfg, rng);
      OptimizationOutcome out = nelder_mead(objective, x0, cfg);
      out.start_index = i;
      outcomes[static_cast<std::size_t>(i)] = std::move(out);
    }
  };

  int threads = n_threads > 0 ? n_threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, cfg.n_starts));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  return outcomes;
}

}  // namespace qgate
