#include "qgate/protocol_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

namespace qgate {

namespace {
constexpr double kNormTol = 1e-9;
}

PulseSequence read_protocol(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open protocol file " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error("malformed protocol file " + path + ": " + e.what());
  }
  if (!j.contains("pulses") || !j["pulses"].is_array() || j["pulses"].empty()) {
    throw std::runtime_error("protocol file needs a non-empty \"pulses\" array");
  }
  std::vector<Pulse> pulses;
  for (const auto& jp : j["pulses"]) {
    Pulse p;
    if (!jp.contains("area")) throw std::runtime_error("pulse entry is missing \"area\"");
    p.area = jp.at("area").get<double>();
    if (jp.contains("a") || jp.contains("b")) {
      const double a = jp.at("a").get<double>();
      const double b = jp.at("b").get<double>();
      const double norm = std::sqrt(a * a + b * b);
      if (std::abs(norm - 1.0) > kNormTol) {
        throw std::runtime_error("structural vector (a, b) is not normalized");
      }
      p.e = StructuralVector{a / norm, b / norm};
    } else if (jp.contains("phi")) {
      p.e = make_structural_vector(jp.at("phi").get<double>());
    } else {
      throw std::runtime_error("pulse entry needs either \"phi\" or explicit \"a\"/\"b\"");
    }
    pulses.push_back(p);
  }
  try {
    return PulseSequence(std::move(pulses));
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("invalid protocol: ") + e.what());
  }
}

void write_protocol(const PulseSequence& seq, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  os << "{\"pulses\":[";
  const auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (int k = 0; k < seq.size(); ++k) {
    if (k) os << ',';
    os << "{\"area\":" << fmt(seq.pulse(k).area) << ",\"phi\":" << fmt(polar_angle(seq.pulse(k).e))
       << '}';
  }
  os << "]}\n";
  if (!os) throw std::runtime_error("write failed for " + path);
}

}  // namespace qgate
