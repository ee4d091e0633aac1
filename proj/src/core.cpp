#include "qgate/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qgate {

StructuralVector make_structural_vector(double phi) {
  if (!std::isfinite(phi)) {
    throw std::invalid_argument("structural angle must be finite");
  }
  return StructuralVector{std::cos(phi), std::sin(phi)};
}

double dot(const StructuralVector& e1, const StructuralVector& e2) {
  return e1.a * e2.a + e1.b * e2.b;
}

double polar_angle(const StructuralVector& e) { return std::atan2(e.b, e.a); }

PulseSequence::PulseSequence(std::vector<Pulse> pulses) : pulses_(std::move(pulses)) {
  if (pulses_.empty() || pulses_.size() > static_cast<std::size_t>(kMaxPulses)) {
    throw std::invalid_argument("pulse sequence must contain between 1 and " +
                                std::to_string(kMaxPulses) + " pulses");
  }
}

bool check_constraints(const PulseSequence& seq, const ConstraintSpec& c) {
  for (const Pulse& p : seq.pulses()) {
    if (std::abs(p.area) > c.area_max) return false;
    switch (c.mode) {
      case ConstraintMode::AbsB:
        if (std::abs(p.e.b) < c.sigma) return false;
        break;
      case ConstraintMode::Positive:
        if (p.e.a < c.sigma || p.e.b < c.sigma) return false;
        break;
      case ConstraintMode::AbsBoth:
        if (std::abs(p.e.a) < c.sigma || std::abs(p.e.b) < c.sigma) return false;
        break;
    }
  }
  return true;
}

std::vector<std::vector<double>> cos_beta_matrix(const PulseSequence& seq) {
  const int n = seq.size();
  std::vector<std::vector<double>> m(static_cast<std::size_t>(n),
                                     std::vector<double>(static_cast<std::size_t>(n), 1.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          dot(seq.pulse(i).e, seq.pulse(j).e);
    }
  }
  return m;
}

double total_area(const PulseSequence& seq) {
  double t = 0.0;
  for (const Pulse& p : seq.pulses()) t += std::abs(p.area);
  return t;
}

}  // namespace qgate
