#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "qgate/core.hpp"
#include "qgate/optimizer.hpp"
#include "qgate/pathways.hpp"
#include "qgate/propagator.hpp"

namespace qgate {

struct RunMetadata {
  std::uint64_t seed = 0;
  int start_index = 0;
  int iterations = 0;
  bool converged = false;
  double sigma = 0.0;
  ConstraintMode mode = ConstraintMode::AbsB;
  double objective = 0.0;  // value the optimizer minimized (guided runs differ from error)
  double penalty = 0.0;    // weighted constraint penalty at the solution
};

/// One optimized protocol with its full mechanism annotation; the unit of
/// campaign persistence. Every derived field is recomputable from
/// (areas, phis) and is verified against the stored values on reload.
struct SolutionRecord {
  std::vector<double> areas;
  std::vector<double> phis;
  double error = 1.0;  // gate error 1 - F
  double uV = 1.0, uA = 1.0, uB = 1.0;
  SubsystemMechanism mech_v, mech_a, mech_b;
  std::array<int, 3> cube{1, 1, 1};  // (omega_A, omega_B, omega_V)
  int omega_total = 3;
  double area_total = 0.0;
  std::vector<std::vector<double>> cos_beta;
  RunMetadata meta;
};

SolutionRecord annotate_solution(const PulseSequence& seq, const RunMetadata& meta);
PulseSequence record_sequence(const SolutionRecord& r);

/// Annotates a whole campaign, carrying the run metadata over from the
/// optimizer configuration and outcomes.
std::vector<SolutionRecord> annotate_outcomes(const std::vector<OptimizationOutcome>& outcomes,
                                              const OptimizerConfig& cfg);

std::string serialize_record(const SolutionRecord& r);
SolutionRecord parse_record(const std::string& line);

/// Line-delimited JSON, one record per line, floats with 17 significant
/// digits so reloading and re-serializing is byte-identical.
void persist(const std::vector<SolutionRecord>& records, const std::string& path);

/// Loads and re-verifies every record's mechanism annotation (tolerance
/// 1e-10); malformed lines and stale annotations throw with the line number.
std::vector<SolutionRecord> load(const std::string& path);

struct HistogramSpec {
  double bin_width = 0.05 * kPi;  // 0.05 for cos-beta tables
  double eps_cut = 1e-3;
};

struct Histogram1D {
  std::vector<double> centers;
  std::vector<double> values;
  bool empty() const { return centers.empty(); }
};

struct Histogram2D {
  std::vector<double> centers_i;
  std::vector<double> centers_j;
  std::vector<std::vector<double>> values;  // [i][j]
  bool empty() const { return centers_i.empty(); }
};

struct McubeTable {
  std::map<std::array<int, 3>, double> frequencies;
  std::array<int, 3> modal{1, 1, 1};
  int modal_omega_total = 3;
  bool empty() const { return frequencies.empty(); }
};

/// Fraction of records with error <= eps, one row per threshold.
std::vector<std::pair<double, double>> success_rate_curve(const std::vector<SolutionRecord>& records,
                                                          const std::vector<double>& thresholds);

/// Probability-normalized total-area distribution; bins centered on integer
/// multiples of the bin width. Empty if no record passes the error cut.
Histogram1D area_total_histogram(const std::vector<SolutionRecord>& records,
                                 const HistogramSpec& spec);

/// Running prefix sum of a rho_A table; ends at 1.
Histogram1D cumulative_area(const Histogram1D& rho);

/// Distribution of cos beta for the pulse pair (i, j), 1-based, i < j;
/// edge-aligned bins over [-1, 1].
Histogram1D cos_beta_histogram(const std::vector<SolutionRecord>& records, int i, int j,
                               const HistogramSpec& spec);

/// 2-D area distribution for pulses (i, j), peak-normalized for rendering.
Histogram2D joint_area_histogram(const std::vector<SolutionRecord>& records, int i, int j,
                                 const HistogramSpec& spec);

/// Peak-normalized mechanism density on a grid_n x grid_n partition of the
/// (x, y) square for one subsystem.
Histogram2D msquare_density(const std::vector<SolutionRecord>& records, SubsystemId s, int grid_n,
                            const HistogramSpec& spec);

/// Relative frequency of each (omega_A, omega_B, omega_V) triple plus the
/// modal triple and its omega_T (ties resolved to the smallest triple).
McubeTable mcube_frequencies(const std::vector<SolutionRecord>& records, const HistogramSpec& spec);

void write_csv(std::ostream& os, const std::string& quantity, const Histogram1D& h);
void write_csv(std::ostream& os, const std::string& quantity, const Histogram2D& h,
               const std::string& axis_i, const std::string& axis_j);
void write_csv(std::ostream& os, const std::string& quantity, const McubeTable& t);
void write_csv(std::ostream& os, const std::string& quantity,
               const std::vector<std::pair<double, double>>& rows);

std::string mode_name(ConstraintMode m);
ConstraintMode parse_mode(const std::string& name);

}  // namespace qgate
