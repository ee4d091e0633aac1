#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qgate/core.hpp"
#include "qgate/pathways.hpp"
#include "qgate/rng.hpp"

namespace qgate {

/// Flat optimization variables: N_p signed areas followed by N_p structural
/// angles. The angle parameterization keeps every vector exactly unit-norm.
struct ParameterVector {
  std::vector<double> areas;
  std::vector<double> phis;
};

PulseSequence decode_parameters(const ParameterVector& p);
ParameterVector encode_parameters(const PulseSequence& seq);

struct OptimizerConfig {
  int n_pulses = 3;
  ConstraintSpec constraints;
  int n_starts = 1;
  std::uint64_t seed = 0;
  std::array<double, 2> area_range{0.1 * kPi, kDefaultAreaMax};
  int max_iterations = 0;  // 0 selects 400 * dimension
  double convergence_tol = 1e-12;
  double penalty_weight = 10.0;
  std::optional<MechanismClass> target_mechanism;
  // optional extra term for guided runs: weight * sum |non-target V buckets|
  double mech_penalty_weight = 0.0;
};

/// Throws std::invalid_argument on infeasible settings (sigma >= 1, empty
/// feasible arc, bad ranges, unsupported pulse count).
void validate_config(const OptimizerConfig& cfg);

/// Unweighted sum of squared constraint violations; zero on the feasible set.
double constraint_penalty(const PulseSequence& seq, const ConstraintSpec& c);

/// Gate error 1 - F plus penalty_weight times the squared violations.
double objective_error(const ParameterVector& p, const OptimizerConfig& cfg);

/// Same functional with uV replaced by the targeted V bucket amplitude, which
/// drives the remaining V pathway classes toward zero. Requires
/// cfg.target_mechanism.
double mechanism_guided_error(const ParameterVector& p, const OptimizerConfig& cfg);

struct SimplexOptions {
  std::vector<double> initial_steps;  // one per coordinate
  double convergence_tol = 1e-12;
  double x_tol = 1e-8;  // simplex diameter floor; guards against value ties
  int max_iterations = 1000;
};

struct SimplexResult {
  std::vector<double> x;
  double fx = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Nelder-Mead simplex minimization: reflection 1, expansion 2, contraction
/// 0.5, shrink 0.5; stops when the vertex value spread drops below
/// convergence_tol. A non-finite objective value aborts the run.
SimplexResult nelder_mead_minimize(const std::function<double(std::span<const double>)>& f,
                                   std::vector<double> x0, const SimplexOptions& opt);

struct OptimizationOutcome {
  ParameterVector params;
  double error = 0.0;  // objective value at params
  int iterations = 0;
  bool converged = false;
  int start_index = 0;
};

OptimizationOutcome nelder_mead(const std::function<double(const ParameterVector&)>& f,
                                const ParameterVector& x0, const OptimizerConfig& cfg);

/// Uniform feasible start: areas over the configured range, angles over the
/// feasible arcs of the constraint mode.
ParameterVector sample_start(const OptimizerConfig& cfg, Rng& rng);

/// Independent Nelder-Mead runs from deterministic per-start seeds; results
/// come back in start order regardless of thread scheduling. n_threads <= 0
/// selects the hardware concurrency.
std::vector<OptimizationOutcome> run_multistart(const OptimizerConfig& cfg, int n_threads = 0);

}  // namespace qgate
