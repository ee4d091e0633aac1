// Acceptance suite: one pass/fail line per criterion, non-zero exit when any
// criterion fails. argv[1] must point at the qgate CLI binary (used by the
// determinism criterion).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qgate/campaign.hpp"
#include "qgate/core.hpp"
#include "qgate/optimizer.hpp"
#include "qgate/oracle.hpp"
#include "qgate/pathways.hpp"
#include "qgate/propagator.hpp"
#include "qgate/rng.hpp"

using namespace qgate;

namespace {

std::string g_cli_path;

struct CriterionResult {
  bool pass = false;
  std::string detail;
};

PulseSequence jaksch_sequence() {
  return PulseSequence({{kPi, {1.0, 0.0}}, {2.0 * kPi, {0.0, 1.0}}, {kPi, {1.0, 0.0}}});
}

PulseSequence random_sequence(Rng& rng, int n_pulses, double area_hi = 6.0 * kPi) {
  std::vector<Pulse> pulses;
  for (int k = 0; k < n_pulses; ++k) {
    pulses.push_back(
        {rng.uniform(0.1 * kPi, area_hi), make_structural_vector(rng.uniform(-kPi, kPi))});
  }
  return PulseSequence(std::move(pulses));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::vector<SolutionRecord> run_campaign(int pulses, double sigma, ConstraintMode mode,
                                         int starts, std::uint64_t seed,
                                         std::optional<MechanismClass> target = std::nullopt) {
  OptimizerConfig cfg;
  cfg.n_pulses = pulses;
  cfg.constraints.sigma = sigma;
  cfg.constraints.mode = mode;
  cfg.n_starts = starts;
  cfg.seed = seed;
  cfg.target_mechanism = target;
  return annotate_outcomes(run_multistart(cfg), cfg);
}

double best_error(const std::vector<SolutionRecord>& records) {
  double best = 2.0;
  for (const auto& r : records) best = std::min(best, r.error);
  return best;
}

double rate_at(const std::vector<SolutionRecord>& records, double eps) {
  std::size_t n = 0;
  for (const auto& r : records) {
    if (r.error <= eps) ++n;
  }
  return static_cast<double>(n) / static_cast<double>(records.size());
}

// --------------------------------------------------------------------------

CriterionResult criterion_1_jaksch() {
  const PulseSequence seq = jaksch_sequence();
  const GateDiagonal g = gate_diagonal(seq);
  const FidelityResult f = fidelity(g);
  const MechanismPoint m = mcube_point(seq);
  const double diag_dev =
      std::max({std::abs(g.uV + 1.0), std::abs(g.uA + 1.0), std::abs(g.uB + 1.0)});
  const bool pass = diag_dev <= 1e-12 && (1.0 - f.fidelity) <= 1e-12 && m.v.omega == 7 &&
                    std::min(m.a.omega, m.b.omega) == 1 && std::max(m.a.omega, m.b.omega) == 3;
  return {pass, "diag dev " + fmt(diag_dev) + ", 1-F " + fmt(1.0 - f.fidelity) + ", cube (" +
                    std::to_string(m.cube[0]) + "," + std::to_string(m.cube[1]) + "," +
                    std::to_string(m.cube[2]) + ")"};
}

CriterionResult criterion_2_pathsum() {
  Rng rng(2001);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const PulseSequence seq = random_sequence(rng, rng.uniform_int(1, 6));
    for (SubsystemId s : {SubsystemId::V, SubsystemId::A, SubsystemId::B}) {
      worst =
          std::max(worst, std::abs(bucket_amplitudes(seq, s).sum() - return_amplitude(seq, s)));
    }
  }
  return {worst <= 1e-12, "max |sum u - U11| = " + fmt(worst)};
}

CriterionResult criterion_3_eq7() {
  Rng rng(3001);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const PulseSequence seq = random_sequence(rng, 4);
    for (SubsystemId s : {SubsystemId::V, SubsystemId::A, SubsystemId::B}) {
      const MechanismBuckets en = bucket_amplitudes(seq, s);
      const MechanismBuckets cf = closed_form_buckets_4(seq, s);
      worst = std::max({worst, std::abs(en.u0 - cf.u0), std::abs(en.u1 - cf.u1),
                        std::abs(en.ud - cf.ud), std::abs(en.u2 - cf.u2)});
    }
  }
  return {worst <= 1e-12, "max bucket deviation " + fmt(worst)};
}

CriterionResult criterion_4_oracle() {
  Rng rng(4001);
  EnvelopeSpec sin2;
  EnvelopeSpec flat;
  flat.shape = EnvelopeShape::FlatTop;
  const double dt = sin2.tau / 1000.0;
  double worst_sin2 = 0.0, worst_flat = 0.0;
  for (int t = 0; t < 100; ++t) {
    const PulseSequence seq = random_sequence(rng, rng.uniform_int(1, 4));
    worst_sin2 = std::max(worst_sin2, compare_with_analytic(seq, sin2, dt));
    worst_flat = std::max(worst_flat, compare_with_analytic(seq, flat, dt));
  }
  return {worst_sin2 <= 1e-6 && worst_flat <= 1e-6,
          "max dev sin2 " + fmt(worst_sin2) + ", flat-top " + fmt(worst_flat)};
}

CriterionResult criterion_5_symmetries() {
  Rng rng(5001);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const PulseSequence seq = random_sequence(rng, rng.uniform_int(1, 6));
    std::vector<Pulse> flipped, swapped;
    for (const Pulse& p : seq.pulses()) {
      flipped.push_back({-p.area, {-p.e.a, -p.e.b}});
      swapped.push_back({p.area, {p.e.b, p.e.a}});
    }
    const GateDiagonal g = gate_diagonal(seq);
    const GateDiagonal gf = gate_diagonal(PulseSequence(flipped));
    const GateDiagonal gs = gate_diagonal(PulseSequence(swapped));
    worst = std::max({worst, std::abs(g.uV - gf.uV), std::abs(g.uA - gf.uA),
                      std::abs(g.uB - gf.uB), std::abs(fidelity(g).fidelity - fidelity(gf).fidelity),
                      std::abs(g.uV - gs.uV), std::abs(g.uA - gs.uB), std::abs(g.uB - gs.uA),
                      std::abs(fidelity(g).fidelity - fidelity(gs).fidelity)});
  }
  return {worst <= 1e-12, "max symmetry deviation " + fmt(worst)};
}

double dist_to_area_lattice(double at_over_pi) {
  // distance to {6 + 4l}
  const double r = std::remainder(at_over_pi - 6.0, 4.0);
  return std::abs(r);
}

CriterionResult criterion_6_two_pulse(const std::vector<SolutionRecord>& np2) {
  int n_eps = 0, bad_align = 0, bad_area = 0, bad_omega = 0;
  for (const auto& r : np2) {
    if (r.error > 1e-3) continue;
    ++n_eps;
    if (std::abs(r.cos_beta[0][1]) < 0.999) ++bad_align;
    if (dist_to_area_lattice(r.area_total / kPi) > 0.15) ++bad_area;
    if (r.mech_v.omega != 1) ++bad_omega;
  }
  const double best = best_error(np2);
  const bool pass = n_eps > 0 && bad_align == 0 && bad_area == 0 && bad_omega == 0 && best <= 1e-5;
  return {pass, "n(eps<=1e-3) " + std::to_string(n_eps) + ", misaligned " +
                    std::to_string(bad_align) + ", off-lattice " + std::to_string(bad_area) +
                    ", omegaV!=1 " + std::to_string(bad_omega) + ", best " + fmt(best)};
}

CriterionResult criterion_7_rates(const std::vector<SolutionRecord>& np2,
                                  const std::vector<SolutionRecord>& np3,
                                  const std::vector<SolutionRecord>& np4) {
  const double r2 = rate_at(np2, 1e-3);
  const double r3 = rate_at(np3, 1e-3);
  const double r4 = rate_at(np4, 1e-3);
  return {r2 < r3 && r3 < r4,
          "rates " + fmt(r2) + " < " + fmt(r3) + " < " + fmt(r4) + " at eps 1e-3"};
}

bool has_local_max_near(const Histogram1D& h, double target, double window) {
  for (std::size_t k = 0; k < h.centers.size(); ++k) {
    if (std::abs(h.centers[k] - target) > window) continue;
    if (h.values[k] <= 0.0) continue;
    const double left = k > 0 && h.centers[k - 1] > h.centers[k] - 1.5 * 0.05 * kPi
                            ? h.values[k - 1]
                            : 0.0;
    const double right = k + 1 < h.centers.size() && h.centers[k + 1] < h.centers[k] + 1.5 * 0.05 * kPi
                             ? h.values[k + 1]
                             : 0.0;
    if (h.values[k] >= left && h.values[k] >= right) return true;
  }
  return false;
}

CriterionResult criterion_8_area_structure(const std::vector<SolutionRecord>& np3,
                                           const std::vector<SolutionRecord>& np3_pos) {
  HistogramSpec spec;  // 0.05 pi bins, eps 1e-3
  const Histogram1D rho = area_total_histogram(np3, spec);
  const bool peaks = !rho.empty() && has_local_max_near(rho, 4.0 * kPi, 0.1 * kPi) &&
                     has_local_max_near(rho, 8.0 * kPi, 0.1 * kPi);
  const Histogram1D rho_pos = area_total_histogram(np3_pos, spec);
  double below_9pi = 0.0;
  for (std::size_t k = 0; k < rho_pos.centers.size(); ++k) {
    if (rho_pos.centers[k] < 9.0 * kPi) below_9pi += rho_pos.values[k];
  }
  const bool pass = peaks && !rho_pos.empty() && below_9pi < 0.05;
  return {pass, std::string("peaks at 4pi/8pi ") + (peaks ? "yes" : "no") +
                    ", p-restricted mass below 9pi " + fmt(below_9pi)};
}

CriterionResult criterion_9_mechanism_plane(const std::vector<SolutionRecord>& np3) {
  HistogramSpec spec;
  const McubeTable t = mcube_frequencies(np3, spec);
  const bool pass = !t.empty() && t.modal_omega_total == 9;
  return {pass, "modal cube (" + std::to_string(t.modal[0]) + "," + std::to_string(t.modal[1]) +
                    "," + std::to_string(t.modal[2]) + "), omega_T " +
                    std::to_string(t.modal_omega_total)};
}

CriterionResult criterion_10_guided(const std::vector<SolutionRecord>& guided) {
  const SolutionRecord* best = nullptr;
  int below_1e3 = 0;
  for (const auto& r : guided) {
    if (!best || r.error < best->error) best = &r;
    if (r.error < 1e-3) ++below_1e3;
  }
  const bool pass =
      best && best->error <= 1e-2 && below_1e3 == 0 && best->mech_v.omega == 3;
  return {pass, "best " + fmt(best ? best->error : 2.0) + ", n(eps<1e-3) " +
                    std::to_string(below_1e3) + ", best omegaV " +
                    std::to_string(best ? best->mech_v.omega : 0)};
}

CriterionResult criterion_11_determinism() {
  namespace fs = std::filesystem;
  const std::string a = (fs::temp_directory_path() / "qgate_acc_a.jsonl").string();
  const std::string b = (fs::temp_directory_path() / "qgate_acc_b.jsonl").string();
  const std::string flags = " optimize --pulses 2 --sigma 0.1 --starts 50 --seed 11 --out ";
  const auto invoke = [&](const std::string& out) {
    const std::string cmd = g_cli_path + flags + out + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  if (invoke(a) != 0 || invoke(b) != 0) return {false, "cli invocation failed"};
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  std::remove(a.c_str());
  std::remove(b.c_str());
  const bool same = !sa.str().empty() && sa.str() == sb.str();
  return {same, same ? "byte-identical jsonl (" + std::to_string(sa.str().size()) + " bytes)"
                     : "outputs differ"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) {
    g_cli_path = argv[1];
  } else {
    g_cli_path = "./tools/qgate";  // build-tree default
  }

  std::vector<SolutionRecord> np2, np3, np4, np3_pos, guided;

  struct Criterion {
    int id;
    std::string name;
    std::function<CriterionResult()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "jaksch-golden", criterion_1_jaksch},
      {2, "pathway-completeness", criterion_2_pathsum},
      {3, "eq7-equivalence", criterion_3_eq7},
      {4, "oracle-agreement", criterion_4_oracle},
      {5, "symmetry-suite", criterion_5_symmetries},
      {6, "two-pulse-structure",
       [&] {
         np2 = run_campaign(2, 0.1, ConstraintMode::AbsB, 2000, 601);
         return criterion_6_two_pulse(np2);
       }},
      {7, "success-rate-ordering",
       [&] {
         np3 = run_campaign(3, 0.1, ConstraintMode::AbsB, 2000, 701);
         np4 = run_campaign(4, 0.1, ConstraintMode::AbsB, 2000, 702);
         return criterion_7_rates(np2, np3, np4);
       }},
      {8, "three-pulse-area-peaks",
       [&] {
         np3_pos = run_campaign(3, 0.1, ConstraintMode::Positive, 2000, 801);
         return criterion_8_area_structure(np3, np3_pos);
       }},
      {9, "mechanism-plane", [&] { return criterion_9_mechanism_plane(np3); }},
      {10, "mechanism-guided-1loop",
       [&] {
         guided = run_campaign(2, 0.0, ConstraintMode::AbsB, 2000, 1001, MechanismClass::OneLoop);
         return criterion_10_guided(guided);
       }},
      {11, "cli-determinism", criterion_11_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!r.pass) ++failures;
    std::printf("%s %2d %-24s %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                r.detail.c_str(), secs);
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
