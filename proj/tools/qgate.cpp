// Command-line front end: multi-start optimization campaigns, campaign
// analysis tables, model validation suites, and single-protocol inspection.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qgate/campaign.hpp"
#include "qgate/core.hpp"
#include "qgate/optimizer.hpp"
#include "qgate/oracle.hpp"
#include "qgate/pathways.hpp"
#include "qgate/propagator.hpp"
#include "qgate/protocol_io.hpp"
#include "qgate/rng.hpp"

namespace {

using namespace qgate;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

PulseSequence random_sequence(Rng& rng, int n_pulses, double area_lo, double area_hi) {
  std::vector<Pulse> pulses;
  for (int k = 0; k < n_pulses; ++k) {
    pulses.push_back({rng.uniform(area_lo, area_hi), make_structural_vector(rng.uniform(-kPi, kPi))});
  }
  return PulseSequence(std::move(pulses));
}

PulseSequence jaksch_sequence() {
  return PulseSequence({{kPi, {1.0, 0.0}}, {2.0 * kPi, {0.0, 1.0}}, {kPi, {1.0, 0.0}}});
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("QGATE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;  // library picks hardware concurrency
}

// ---------------------------------------------------------------------------
// optimize
// ---------------------------------------------------------------------------

struct OptimizeArgs {
  int pulses = 3;
  double sigma = 0.0;
  std::string mode = "abs-b";
  int starts = 1000;
  std::uint64_t seed = 0;
  double area_max = kDefaultAreaMax;
  bool signed_areas = false;
  std::string target;
  double mech_penalty = 0.0;
  std::string out;
  int threads = 0;
};

int cmd_optimize(const OptimizeArgs& args) {
  OptimizerConfig cfg;
  cfg.n_pulses = args.pulses;
  cfg.constraints.sigma = args.sigma;
  cfg.constraints.area_max = args.area_max;
  cfg.n_starts = args.starts;
  cfg.seed = args.seed;
  cfg.area_range = args.signed_areas ? std::array<double, 2>{-args.area_max, args.area_max}
                                     : std::array<double, 2>{0.1 * kPi, args.area_max};
  cfg.mech_penalty_weight = args.mech_penalty;
  try {
    cfg.constraints.mode = parse_mode(args.mode);
    if (!args.target.empty()) {
      if (args.target == "0loop") cfg.target_mechanism = MechanismClass::ZeroLoop;
      else if (args.target == "1loop") cfg.target_mechanism = MechanismClass::OneLoop;
      else if (args.target == "dloop") cfg.target_mechanism = MechanismClass::DLoop;
      else if (args.target == "2loop") cfg.target_mechanism = MechanismClass::TwoLoop;
      else throw std::invalid_argument("unknown target mechanism: " + args.target);
    }
    validate_config(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto records = annotate_outcomes(run_multistart(cfg, resolve_threads(args.threads)), cfg);

  try {
    persist(records, args.out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }

  double best = records.front().error;
  for (const SolutionRecord& r : records) best = std::min(best, r.error);
  std::cout << "pulses: " << cfg.n_pulses << '\n'
            << "sigma: " << fmt(cfg.constraints.sigma) << '\n'
            << "mode: " << mode_name(cfg.constraints.mode) << '\n'
            << "starts: " << cfg.n_starts << '\n'
            << "seed: " << cfg.seed << '\n'
            << "best_error: " << fmt(best) << '\n';
  for (double eps : {1e-2, 1e-3, 1e-5, 1e-7}) {
    std::size_t n = 0;
    for (const SolutionRecord& r : records) {
      if (r.error <= eps) ++n;
    }
    char key[40];
    std::snprintf(key, sizeof(key), "success_eps_%.0e", eps);
    std::cout << key << ": " << n << '\n';
  }
  std::cout << "out: " << args.out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct AnalyzeArgs {
  std::string in;
  std::string report;
  double eps = 1e-3;
  double bin = 0.0;  // 0 selects the per-quantity default
  std::string out;
};

int cmd_analyze(const AnalyzeArgs& args) {
  std::vector<SolutionRecord> records;
  try {
    records = load(args.in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  if (records.empty()) {
    std::cerr << "note: no records in " << args.in << '\n';
    return kExitValidation;
  }

  std::string kind = args.report;
  std::string detail;
  if (const auto colon = kind.find(':'); colon != std::string::npos) {
    detail = kind.substr(colon + 1);
    kind = kind.substr(0, colon);
  }

  HistogramSpec spec;
  spec.eps_cut = args.eps;

  const auto parse_pair = [&detail](int& i, int& j) {
    if (std::sscanf(detail.c_str(), "%d,%d", &i, &j) != 2) {
      throw std::invalid_argument("expected a pulse pair i,j after the colon");
    }
  };
  const auto parse_subsystem = [&detail]() {
    if (detail == "V") return SubsystemId::V;
    if (detail == "A") return SubsystemId::A;
    if (detail == "B") return SubsystemId::B;
    throw std::invalid_argument("expected V, A or B after the colon");
  };

  std::ostringstream body;
  bool empty = false;
  try {
    if (kind == "success-rate") {
      std::vector<double> thresholds;
      for (int k = -9; k <= 0; ++k) thresholds.push_back(std::pow(10.0, k));
      write_csv(body, kind, success_rate_curve(records, thresholds));
    } else if (kind == "area-total" || kind == "area-cumulative") {
      spec.bin_width = args.bin > 0.0 ? args.bin : 0.05 * kPi;
      Histogram1D h = area_total_histogram(records, spec);
      empty = h.empty();
      if (kind == "area-cumulative") h = cumulative_area(h);
      write_csv(body, kind, h);
    } else if (kind == "area-joint") {
      int i = 0, j = 0;
      parse_pair(i, j);
      spec.bin_width = args.bin > 0.0 ? args.bin : 0.05 * kPi;
      const Histogram2D h = joint_area_histogram(records, i, j, spec);
      empty = h.empty();
      write_csv(body, kind, h, "area_i", "area_j");
    } else if (kind == "cos-beta") {
      int i = 0, j = 0;
      parse_pair(i, j);
      spec.bin_width = args.bin > 0.0 ? args.bin : 0.05;
      const Histogram1D h = cos_beta_histogram(records, i, j, spec);
      empty = h.empty();
      write_csv(body, kind, h);
    } else if (kind == "msquare") {
      const SubsystemId s = parse_subsystem();
      const Histogram2D h = msquare_density(records, s, 3, spec);
      empty = h.empty();
      write_csv(body, kind, h, "x", "y");
    } else if (kind == "mcube") {
      const McubeTable t = mcube_frequencies(records, spec);
      empty = t.empty();
      write_csv(body, kind, t);
      if (!empty) {
        std::cout << "modal_cube: " << t.modal[0] << ',' << t.modal[1] << ',' << t.modal[2] << '\n'
                  << "modal_omega_t: " << t.modal_omega_total << '\n';
      }
    } else {
      std::cerr << "error: unknown report " << args.report << '\n';
      return kExitUsage;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  if (empty) {
    std::cerr << "note: no records below the error cut " << fmt(args.eps) << '\n';
    return kExitValidation;
  }

  std::ofstream os(args.out);
  if (!os) {
    std::cerr << "error: cannot open " << args.out << " for writing\n";
    return kExitIo;
  }
  os << body.str();
  std::cout << "report: " << args.report << '\n'
            << "records: " << records.size() << '\n'
            << "out: " << args.out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

struct ValidateArgs {
  std::string suite;
  int trials = 0;  // 0 selects the per-suite default
  std::uint64_t seed = 0;
};

int suite_jaksch() {
  const PulseSequence seq = jaksch_sequence();
  const GateDiagonal g = gate_diagonal(seq);
  const FidelityResult f = fidelity(g);
  const MechanismPoint m = mcube_point(seq);
  const double diag_dev = std::max({std::abs(g.uV + 1.0), std::abs(g.uA + 1.0), std::abs(g.uB + 1.0)});
  std::cout << "diag_deviation: " << fmt(diag_dev) << '\n';
  std::cout << "fidelity_deviation: " << fmt(1.0 - f.fidelity) << '\n';
  std::cout << "omega_v: " << m.v.omega << '\n';
  std::cout << "omega_ab: " << m.a.omega << ',' << m.b.omega << '\n';
  const bool pass = diag_dev <= 1e-12 && 1.0 - f.fidelity <= 1e-12 && m.v.omega == 7 &&
                    std::min(m.a.omega, m.b.omega) == 1 && std::max(m.a.omega, m.b.omega) == 3;
  std::cout << "suite: " << (pass ? "pass" : "fail") << '\n';
  return pass ? kExitOk : kExitValidation;
}

int suite_pathsum(int trials, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 101));
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const PulseSequence seq = random_sequence(rng, rng.uniform_int(1, 6), 0.1 * kPi, 6.0 * kPi);
    for (SubsystemId s : {SubsystemId::V, SubsystemId::A, SubsystemId::B}) {
      worst = std::max(worst,
                       std::abs(bucket_amplitudes(seq, s).sum() - return_amplitude(seq, s)));
    }
  }
  std::cout << "max_pathsum_deviation: " << fmt(worst) << '\n';
  const bool pass = worst <= 1e-12;
  std::cout << "suite: " << (pass ? "pass" : "fail") << '\n';
  return pass ? kExitOk : kExitValidation;
}

int suite_eq7(int trials, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 102));
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const PulseSequence seq = random_sequence(rng, 4, 0.1 * kPi, 6.0 * kPi);
    for (SubsystemId s : {SubsystemId::V, SubsystemId::A, SubsystemId::B}) {
      const MechanismBuckets en = bucket_amplitudes(seq, s);
      const MechanismBuckets cf = closed_form_buckets_4(seq, s);
      worst = std::max({worst, std::abs(en.u0 - cf.u0), std::abs(en.u1 - cf.u1),
                        std::abs(en.ud - cf.ud), std::abs(en.u2 - cf.u2)});
    }
  }
  std::cout << "max_bucket_deviation: " << fmt(worst) << '\n';
  const bool pass = worst <= 1e-12;
  std::cout << "suite: " << (pass ? "pass" : "fail") << '\n';
  return pass ? kExitOk : kExitValidation;
}

int suite_oracle(int trials, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 103));
  EnvelopeSpec env;
  const double dt = env.tau / 1000.0;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const PulseSequence seq = random_sequence(rng, rng.uniform_int(1, 4), 0.1 * kPi, 6.0 * kPi);
    const double dev = compare_with_analytic(seq, env, dt);
    std::cout << "seq_" << t + 1 << ": pulses " << seq.size() << "  deviation " << fmt(dev)
              << "  " << (dev <= 1e-6 ? "pass" : "fail") << '\n';
    worst = std::max(worst, dev);
  }
  std::cout << "max_oracle_deviation: " << fmt(worst) << '\n';
  const bool pass = worst <= 1e-6;
  std::cout << "suite: " << (pass ? "pass" : "fail") << '\n';
  return pass ? kExitOk : kExitValidation;
}

int suite_symmetries(int trials, std::uint64_t seed) {
  Rng rng(mix_seed(seed, 104));
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const PulseSequence seq = random_sequence(rng, rng.uniform_int(1, 6), 0.1 * kPi, 6.0 * kPi);
    std::vector<Pulse> flipped, swapped;
    for (const Pulse& p : seq.pulses()) {
      flipped.push_back({-p.area, {-p.e.a, -p.e.b}});
      swapped.push_back({p.area, {p.e.b, p.e.a}});
    }
    const GateDiagonal g = gate_diagonal(seq);
    const GateDiagonal gf = gate_diagonal(PulseSequence(flipped));
    const GateDiagonal gs = gate_diagonal(PulseSequence(swapped));
    worst = std::max({worst, std::abs(g.uV - gf.uV), std::abs(g.uA - gf.uA),
                      std::abs(g.uB - gf.uB), std::abs(g.uV - gs.uV), std::abs(g.uA - gs.uB),
                      std::abs(g.uB - gs.uA),
                      std::abs(fidelity(g).fidelity - fidelity(gs).fidelity)});
  }
  std::cout << "max_symmetry_deviation: " << fmt(worst) << '\n';
  const bool pass = worst <= 1e-12;
  std::cout << "suite: " << (pass ? "pass" : "fail") << '\n';
  return pass ? kExitOk : kExitValidation;
}

int cmd_validate(const ValidateArgs& args) {
  const int trials = args.trials;
  if (args.suite == "jaksch") return suite_jaksch();
  if (args.suite == "pathsum") return suite_pathsum(trials > 0 ? trials : 1000, args.seed);
  if (args.suite == "eq7") return suite_eq7(trials > 0 ? trials : 1000, args.seed);
  if (args.suite == "oracle") return suite_oracle(trials > 0 ? trials : 100, args.seed);
  if (args.suite == "symmetries") return suite_symmetries(trials > 0 ? trials : 500, args.seed);
  std::cerr << "error: unknown suite " << args.suite << '\n';
  return kExitUsage;
}

// ---------------------------------------------------------------------------
// show
// ---------------------------------------------------------------------------

void print_protocol_report(const PulseSequence& seq);

int cmd_show(const std::string& path) {
  try {
    print_protocol_report(read_protocol(path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

void print_protocol_report(const PulseSequence& seq) {
  std::cout << "pulses: " << seq.size() << '\n';
  for (int k = 0; k < seq.size(); ++k) {
    const Pulse& p = seq.pulse(k);
    std::cout << "pulse_" << k + 1 << ": area " << fmt(p.area) << "  phi "
              << fmt(polar_angle(p.e)) << "  (a, b) " << fmt(p.e.a) << ' ' << fmt(p.e.b) << '\n';
    std::cout << "gpa_" << k + 1 << ": V " << fmt(2.0 * mixing_angle(p, SubsystemId::V)) << "  A "
              << fmt(2.0 * mixing_angle(p, SubsystemId::A)) << "  B "
              << fmt(2.0 * mixing_angle(p, SubsystemId::B)) << '\n';
  }
  const GateDiagonal g = gate_diagonal(seq);
  const FidelityResult f = fidelity(g);
  std::cout << "diagonal: " << fmt(g.uV) << ' ' << fmt(g.uA) << ' ' << fmt(g.uB) << " 1\n";
  std::cout << "fidelity: " << fmt(f.fidelity) << '\n';
  std::cout << "error: " << fmt(f.error) << '\n';
  std::cout << "branch: " << f.branch << '\n';
  const MechanismPoint m = mcube_point(seq);
  const auto show_mech = [](const char* name, const SubsystemMechanism& sm) {
    std::cout << "buckets_" << name << ": " << fmt(sm.buckets.u0) << ' ' << fmt(sm.buckets.u1)
              << ' ' << fmt(sm.buckets.ud) << ' ' << fmt(sm.buckets.u2) << '\n';
    std::cout << "xy_" << name << ": " << fmt(sm.x) << ' ' << fmt(sm.y) << '\n';
    std::cout << "omega_" << name << ": " << sm.omega << '\n';
  };
  show_mech("v", m.v);
  show_mech("a", m.a);
  show_mech("b", m.b);
  std::cout << "cube: " << m.cube[0] << ',' << m.cube[1] << ',' << m.cube[2] << '\n';
  std::cout << "omega_t: " << m.omega_total << '\n';
  std::cout << "area_total: " << fmt(total_area(seq)) << '\n';
  const auto cb = cos_beta_matrix(seq);
  for (int i = 0; i < seq.size(); ++i) {
    for (int j = i + 1; j < seq.size(); ++j) {
      std::cout << "cos_beta_" << i + 1 << j + 1 << ": "
                << fmt(cb[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulse-sequence protocols for blockaded two-qubit CZ gates: optimization "
               "campaigns, mechanism analysis, and model validation"};
  app.require_subcommand(1);

  OptimizeArgs oa;
  CLI::App* opt = app.add_subcommand("optimize", "run a multi-start optimization campaign");
  opt->add_option("--pulses", oa.pulses, "number of pulses")->required()->check(CLI::Range(1, 6));
  opt->add_option("--sigma", oa.sigma, "minimum geometrical factor magnitude");
  opt->add_option("--mode", oa.mode, "constraint mode: abs-b|positive|abs-both");
  opt->add_option("--starts", oa.starts, "number of optimization starts");
  opt->add_option("--seed", oa.seed, "campaign seed");
  opt->add_option("--area-max", oa.area_max, "maximum |area| per pulse (rad)");
  opt->add_flag("--signed-areas", oa.signed_areas, "sample signed areas over [-max, max]");
  opt->add_option("--target-mechanism", oa.target, "0loop|1loop|dloop|2loop");
  opt->add_option("--mech-penalty", oa.mech_penalty,
                  "extra weight on |non-target V buckets| in guided runs");
  opt->add_option("--out", oa.out, "output JSONL path")->required();
  opt->add_option("--threads", oa.threads, "worker threads (default: hardware)");

  AnalyzeArgs aa;
  CLI::App* ana = app.add_subcommand("analyze", "compute a campaign statistics table");
  ana->add_option("--in", aa.in, "input JSONL path")->required();
  ana->add_option("--report", aa.report,
                  "success-rate|area-total|area-cumulative|area-joint:i,j|cos-beta:i,j|"
                  "msquare:V|A|B|mcube")
      ->required();
  ana->add_option("--eps", aa.eps, "error cut for distributions");
  ana->add_option("--bin", aa.bin, "bin width override");
  ana->add_option("--out", aa.out, "output CSV path")->required();

  ValidateArgs va;
  CLI::App* val = app.add_subcommand("validate", "run a model validation suite");
  val->add_option("--suite", va.suite, "jaksch|pathsum|eq7|oracle|symmetries")->required();
  val->add_option("--trials", va.trials, "number of random trials");
  val->add_option("--seed", va.seed, "suite seed");

  std::string protocol_path;
  CLI::App* show = app.add_subcommand("show", "inspect one protocol file");
  show->add_option("--protocol", protocol_path, "protocol JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (opt->parsed()) return cmd_optimize(oa);
    if (ana->parsed()) return cmd_analyze(aa);
    if (val->parsed()) return cmd_validate(va);
    if (show->parsed()) return cmd_show(protocol_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
