#include "qgate/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace qgate {

namespace {

using nlohmann::json;

constexpr double kReloadTol = 1e-10;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_array(std::string& out, const std::vector<double>& v) {
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt(v[i]);
  }
  out += ']';
}

void append_mech(std::string& out, const SubsystemMechanism& m) {
  out += "{\"u0\":" + fmt(m.buckets.u0) + ",\"u1\":" + fmt(m.buckets.u1) +
         ",\"ud\":" + fmt(m.buckets.ud) + ",\"u2\":" + fmt(m.buckets.u2) +
         ",\"x\":" + fmt(m.x) + ",\"y\":" + fmt(m.y) +
         ",\"omega\":" + std::to_string(m.omega) + "}";
}

SubsystemMechanism mech_from_json(const json& j) {
  SubsystemMechanism m;
  m.buckets.u0 = j.at("u0").get<double>();
  m.buckets.u1 = j.at("u1").get<double>();
  m.buckets.ud = j.at("ud").get<double>();
  m.buckets.u2 = j.at("u2").get<double>();
  m.x = j.at("x").get<double>();
  m.y = j.at("y").get<double>();
  m.omega = j.at("omega").get<int>();
  return m;
}

bool mech_close(const SubsystemMechanism& a, const SubsystemMechanism& b) {
  return std::abs(a.buckets.u0 - b.buckets.u0) <= kReloadTol &&
         std::abs(a.buckets.u1 - b.buckets.u1) <= kReloadTol &&
         std::abs(a.buckets.ud - b.buckets.ud) <= kReloadTol &&
         std::abs(a.buckets.u2 - b.buckets.u2) <= kReloadTol &&
         std::abs(a.x - b.x) <= kReloadTol && std::abs(a.y - b.y) <= kReloadTol &&
         a.omega == b.omega;
}

void verify_record(const SolutionRecord& r, std::size_t line_no) {
  const SolutionRecord fresh = annotate_solution(record_sequence(r), r.meta);
  const bool ok = std::abs(fresh.error - r.error) <= kReloadTol &&
                  std::abs(fresh.uV - r.uV) <= kReloadTol &&
                  std::abs(fresh.uA - r.uA) <= kReloadTol &&
                  std::abs(fresh.uB - r.uB) <= kReloadTol &&
                  mech_close(fresh.mech_v, r.mech_v) && mech_close(fresh.mech_a, r.mech_a) &&
                  mech_close(fresh.mech_b, r.mech_b) && fresh.cube == r.cube &&
                  fresh.omega_total == r.omega_total &&
                  std::abs(fresh.area_total - r.area_total) <= kReloadTol;
  if (!ok) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": stored mechanism annotation does not match recomputation");
  }
}

long bin_index_centered(double v, double width) { return std::lround(v / width); }

std::vector<const SolutionRecord*> filter_by_error(const std::vector<SolutionRecord>& records,
                                                   double eps_cut) {
  std::vector<const SolutionRecord*> out;
  for (const SolutionRecord& r : records) {
    if (r.error <= eps_cut) out.push_back(&r);
  }
  return out;
}

void check_pair(const std::vector<SolutionRecord>& records, int i, int j) {
  if (records.empty()) throw std::invalid_argument("no records");
  const int n = static_cast<int>(records.front().areas.size());
  if (i < 1 || j < 1 || i >= j || j > n) {
    throw std::invalid_argument("invalid pulse pair; need 1 <= i < j <= " + std::to_string(n));
  }
}

}  // namespace

SolutionRecord annotate_solution(const PulseSequence& seq, const RunMetadata& meta) {
  SolutionRecord r;
  const ParameterVector p = encode_parameters(seq);
  r.areas = p.areas;
  r.phis = p.phis;
  const GateDiagonal g = gate_diagonal(seq);
  r.uV = g.uV;
  r.uA = g.uA;
  r.uB = g.uB;
  r.error = fidelity(g).error;
  const MechanismPoint m = mcube_point(seq);
  r.mech_v = m.v;
  r.mech_a = m.a;
  r.mech_b = m.b;
  r.cube = m.cube;
  r.omega_total = m.omega_total;
  r.area_total = total_area(seq);
  r.cos_beta = cos_beta_matrix(seq);
  r.meta = meta;
  return r;
}

PulseSequence record_sequence(const SolutionRecord& r) {
  return decode_parameters(ParameterVector{r.areas, r.phis});
}

std::vector<SolutionRecord> annotate_outcomes(const std::vector<OptimizationOutcome>& outcomes,
                                              const OptimizerConfig& cfg) {
  std::vector<SolutionRecord> records;
  records.reserve(outcomes.size());
  for (const OptimizationOutcome& o : outcomes) {
    const PulseSequence seq = decode_parameters(o.params);
    RunMetadata meta;
    meta.seed = cfg.seed;
    meta.start_index = o.start_index;
    meta.iterations = o.iterations;
    meta.converged = o.converged;
    meta.sigma = cfg.constraints.sigma;
    meta.mode = cfg.constraints.mode;
    meta.objective = o.error;
    meta.penalty = cfg.penalty_weight * constraint_penalty(seq, cfg.constraints);
    records.push_back(annotate_solution(seq, meta));
  }
  return records;
}

std::string serialize_record(const SolutionRecord& r) {
  std::string s = "{\"areas\":";
  append_array(s, r.areas);
  s += ",\"phis\":";
  append_array(s, r.phis);
  s += ",\"error\":" + fmt(r.error);
  s += ",\"u_v\":" + fmt(r.uV) + ",\"u_a\":" + fmt(r.uA) + ",\"u_b\":" + fmt(r.uB);
  s += ",\"mech\":{\"v\":";
  append_mech(s, r.mech_v);
  s += ",\"a\":";
  append_mech(s, r.mech_a);
  s += ",\"b\":";
  append_mech(s, r.mech_b);
  s += "},\"cube\":[" + std::to_string(r.cube[0]) + ',' + std::to_string(r.cube[1]) + ',' +
       std::to_string(r.cube[2]) + ']';
  s += ",\"omega_t\":" + std::to_string(r.omega_total);
  s += ",\"area_total\":" + fmt(r.area_total);
  s += ",\"cos_beta\":[";
  for (std::size_t i = 0; i < r.cos_beta.size(); ++i) {
    if (i) s += ',';
    append_array(s, r.cos_beta[i]);
  }
  s += "],\"seed\":" + std::to_string(r.meta.seed);
  s += ",\"start_index\":" + std::to_string(r.meta.start_index);
  s += ",\"iterations\":" + std::to_string(r.meta.iterations);
  s += ",\"converged\":";
  s += r.meta.converged ? "true" : "false";
  s += ",\"sigma\":" + fmt(r.meta.sigma);
  s += ",\"mode\":\"" + mode_name(r.meta.mode) + "\"";
  s += ",\"objective\":" + fmt(r.meta.objective);
  s += ",\"penalty\":" + fmt(r.meta.penalty);
  s += "}";
  return s;
}

SolutionRecord parse_record(const std::string& line) {
  const json j = json::parse(line);
  SolutionRecord r;
  r.areas = j.at("areas").get<std::vector<double>>();
  r.phis = j.at("phis").get<std::vector<double>>();
  r.error = j.at("error").get<double>();
  r.uV = j.at("u_v").get<double>();
  r.uA = j.at("u_a").get<double>();
  r.uB = j.at("u_b").get<double>();
  r.mech_v = mech_from_json(j.at("mech").at("v"));
  r.mech_a = mech_from_json(j.at("mech").at("a"));
  r.mech_b = mech_from_json(j.at("mech").at("b"));
  const auto cube = j.at("cube").get<std::vector<int>>();
  if (cube.size() != 3) throw std::runtime_error("cube must have three entries");
  std::copy(cube.begin(), cube.end(), r.cube.begin());
  r.omega_total = j.at("omega_t").get<int>();
  r.area_total = j.at("area_total").get<double>();
  r.cos_beta = j.at("cos_beta").get<std::vector<std::vector<double>>>();
  r.meta.seed = j.at("seed").get<std::uint64_t>();
  r.meta.start_index = j.at("start_index").get<int>();
  r.meta.iterations = j.at("iterations").get<int>();
  r.meta.converged = j.at("converged").get<bool>();
  r.meta.sigma = j.at("sigma").get<double>();
  r.meta.mode = parse_mode(j.at("mode").get<std::string>());
  r.meta.objective = j.at("objective").get<double>();
  r.meta.penalty = j.at("penalty").get<double>();
  return r;
}

void persist(const std::vector<SolutionRecord>& records, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  for (const SolutionRecord& r : records) os << serialize_record(r) << '\n';
  if (!os) throw std::runtime_error("write failed for " + path);
}

std::vector<SolutionRecord> load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::vector<SolutionRecord> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    SolutionRecord r;
    try {
      r = parse_record(line);
    } catch (const std::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
    }
    verify_record(r, line_no);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<std::pair<double, double>> success_rate_curve(const std::vector<SolutionRecord>& records,
                                                          const std::vector<double>& thresholds) {
  if (records.empty()) throw std::invalid_argument("success rate needs at least one record");
  std::vector<std::pair<double, double>> rows;
  rows.reserve(thresholds.size());
  for (double eps : thresholds) {
    std::size_t n = 0;
    for (const SolutionRecord& r : records) {
      if (r.error <= eps) ++n;
    }
    rows.emplace_back(eps, static_cast<double>(n) / static_cast<double>(records.size()));
  }
  return rows;
}

Histogram1D area_total_histogram(const std::vector<SolutionRecord>& records,
                                 const HistogramSpec& spec) {
  const auto sel = filter_by_error(records, spec.eps_cut);
  Histogram1D h;
  if (sel.empty()) return h;
  std::map<long, double> bins;
  for (const SolutionRecord* r : sel) bins[bin_index_centered(r->area_total, spec.bin_width)] += 1.0;
  for (const auto& [idx, count] : bins) {
    h.centers.push_back(static_cast<double>(idx) * spec.bin_width);
    h.values.push_back(count / static_cast<double>(sel.size()));
  }
  return h;
}

Histogram1D cumulative_area(const Histogram1D& rho) {
  Histogram1D h;
  h.centers = rho.centers;
  h.values.reserve(rho.values.size());
  double acc = 0.0;
  for (double v : rho.values) {
    acc += v;
    h.values.push_back(acc);
  }
  return h;
}

Histogram1D cos_beta_histogram(const std::vector<SolutionRecord>& records, int i, int j,
                               const HistogramSpec& spec) {
  check_pair(records, i, j);
  const auto sel = filter_by_error(records, spec.eps_cut);
  Histogram1D h;
  if (sel.empty()) return h;
  const double width = spec.bin_width;
  const int nbins = static_cast<int>(std::lround(2.0 / width));
  std::vector<double> counts(static_cast<std::size_t>(nbins), 0.0);
  for (const SolutionRecord* r : sel) {
    const double c = r->cos_beta[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
    int idx = static_cast<int>(std::floor((c + 1.0) / width));
    idx = std::clamp(idx, 0, nbins - 1);  // cos beta = 1 folds into the last bin
    counts[static_cast<std::size_t>(idx)] += 1.0;
  }
  for (int k = 0; k < nbins; ++k) {
    h.centers.push_back(-1.0 + (static_cast<double>(k) + 0.5) * width);
    h.values.push_back(counts[static_cast<std::size_t>(k)] / static_cast<double>(sel.size()));
  }
  return h;
}

Histogram2D joint_area_histogram(const std::vector<SolutionRecord>& records, int i, int j,
                                 const HistogramSpec& spec) {
  check_pair(records, i, j);
  const auto sel = filter_by_error(records, spec.eps_cut);
  Histogram2D h;
  if (sel.empty()) return h;
  std::map<std::pair<long, long>, double> bins;
  long lo_i = 0, hi_i = 0, lo_j = 0, hi_j = 0;
  bool first = true;
  for (const SolutionRecord* r : sel) {
    const long bi = bin_index_centered(r->areas[static_cast<std::size_t>(i - 1)], spec.bin_width);
    const long bj = bin_index_centered(r->areas[static_cast<std::size_t>(j - 1)], spec.bin_width);
    bins[{bi, bj}] += 1.0;
    if (first) {
      lo_i = hi_i = bi;
      lo_j = hi_j = bj;
      first = false;
    } else {
      lo_i = std::min(lo_i, bi);
      hi_i = std::max(hi_i, bi);
      lo_j = std::min(lo_j, bj);
      hi_j = std::max(hi_j, bj);
    }
  }
  double peak = 0.0;
  for (const auto& [key, v] : bins) peak = std::max(peak, v);
  for (long bi = lo_i; bi <= hi_i; ++bi) {
    h.centers_i.push_back(static_cast<double>(bi) * spec.bin_width);
  }
  for (long bj = lo_j; bj <= hi_j; ++bj) {
    h.centers_j.push_back(static_cast<double>(bj) * spec.bin_width);
  }
  h.values.assign(h.centers_i.size(), std::vector<double>(h.centers_j.size(), 0.0));
  for (const auto& [key, v] : bins) {
    h.values[static_cast<std::size_t>(key.first - lo_i)][static_cast<std::size_t>(key.second - lo_j)] =
        v / peak;
  }
  return h;
}

Histogram2D msquare_density(const std::vector<SolutionRecord>& records, SubsystemId s, int grid_n,
                            const HistogramSpec& spec) {
  if (grid_n < 3) throw std::invalid_argument("m-square grid needs at least 3 cells per side");
  const auto sel = filter_by_error(records, spec.eps_cut);
  Histogram2D h;
  if (sel.empty()) return h;
  const double cell = 2.0 / grid_n;
  h.centers_i.reserve(static_cast<std::size_t>(grid_n));
  for (int k = 0; k < grid_n; ++k) h.centers_i.push_back(-1.0 + (k + 0.5) * cell);
  h.centers_j = h.centers_i;
  h.values.assign(static_cast<std::size_t>(grid_n),
                  std::vector<double>(static_cast<std::size_t>(grid_n), 0.0));
  const auto cell_of = [&](double v) {
    return std::clamp(static_cast<int>(std::floor((v + 1.0) / cell)), 0, grid_n - 1);
  };
  double peak = 0.0;
  for (const SolutionRecord* r : sel) {
    const SubsystemMechanism& m =
        s == SubsystemId::V ? r->mech_v : (s == SubsystemId::A ? r->mech_a : r->mech_b);
    double& v = h.values[static_cast<std::size_t>(cell_of(m.x))][static_cast<std::size_t>(cell_of(m.y))];
    v += 1.0;
    peak = std::max(peak, v);
  }
  for (auto& row : h.values) {
    for (double& v : row) v /= peak;
  }
  return h;
}

McubeTable mcube_frequencies(const std::vector<SolutionRecord>& records, const HistogramSpec& spec) {
  const auto sel = filter_by_error(records, spec.eps_cut);
  McubeTable t;
  if (sel.empty()) return t;
  std::map<std::array<int, 3>, std::size_t> counts;
  for (const SolutionRecord* r : sel) counts[r->cube] += 1;
  std::size_t best = 0;
  for (const auto& [cube, n] : counts) {
    t.frequencies[cube] = static_cast<double>(n) / static_cast<double>(sel.size());
    if (n > best) {  // ties resolve to the smallest triple via map order
      best = n;
      t.modal = cube;
    }
  }
  t.modal_omega_total = t.modal[0] + t.modal[1] + t.modal[2];
  return t;
}

void write_csv(std::ostream& os, const std::string& quantity, const Histogram1D& h) {
  os << "quantity,bin_center,value\n";
  for (std::size_t k = 0; k < h.centers.size(); ++k) {
    os << quantity << ',' << fmt(h.centers[k]) << ',' << fmt(h.values[k]) << '\n';
  }
}

void write_csv(std::ostream& os, const std::string& quantity, const Histogram2D& h,
               const std::string& axis_i, const std::string& axis_j) {
  os << "quantity," << axis_i << ',' << axis_j << ",value\n";
  for (std::size_t a = 0; a < h.centers_i.size(); ++a) {
    for (std::size_t b = 0; b < h.centers_j.size(); ++b) {
      os << quantity << ',' << fmt(h.centers_i[a]) << ',' << fmt(h.centers_j[b]) << ','
         << fmt(h.values[a][b]) << '\n';
    }
  }
}

void write_csv(std::ostream& os, const std::string& quantity, const McubeTable& t) {
  os << "quantity,omega_a,omega_b,omega_v,frequency\n";
  for (const auto& [cube, freq] : t.frequencies) {
    os << quantity << ',' << cube[0] << ',' << cube[1] << ',' << cube[2] << ',' << fmt(freq)
       << '\n';
  }
}

void write_csv(std::ostream& os, const std::string& quantity,
               const std::vector<std::pair<double, double>>& rows) {
  os << "quantity,epsilon,rate\n";
  for (const auto& [eps, rate] : rows) {
    os << quantity << ',' << fmt(eps) << ',' << fmt(rate) << '\n';
  }
}

std::string mode_name(ConstraintMode m) {
  switch (m) {
    case ConstraintMode::AbsB:
      return "abs-b";
    case ConstraintMode::Positive:
      return "positive";
    case ConstraintMode::AbsBoth:
      return "abs-both";
  }
  return "abs-b";
}

ConstraintMode parse_mode(const std::string& name) {
  if (name == "abs-b") return ConstraintMode::AbsB;
  if (name == "positive") return ConstraintMode::Positive;
  if (name == "abs-both") return ConstraintMode::AbsBoth;
  throw std::invalid_argument("unknown constraint mode: " + name);
}

}  // namespace qgate
