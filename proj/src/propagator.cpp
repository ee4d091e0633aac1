#include "qgate/propagator.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace qgate {

namespace {

using std::complex;
constexpr complex<double> kI{0.0, 1.0};

Eigen::Matrix3cd v_unitary(const Pulse& p) {
  const double theta = 0.5 * p.area;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double a = p.e.a;
  const double b = p.e.b;
  Eigen::Matrix3cd u;
  u(0, 0) = c;
  u(0, 1) = kI * (a * s);
  u(0, 2) = kI * (b * s);
  u(1, 0) = kI * (a * s);
  u(1, 1) = a * a * c + b * b;
  u(1, 2) = a * b * (c - 1.0);
  u(2, 0) = kI * (b * s);
  u(2, 1) = a * b * (c - 1.0);
  u(2, 2) = b * b * c + a * a;
  return u;
}

Eigen::Matrix2cd two_level_unitary(double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Eigen::Matrix2cd u;
  u(0, 0) = c;
  u(0, 1) = kI * s;
  u(1, 0) = kI * s;
  u(1, 1) = c;
  return u;
}

double check_real_amplitude(complex<double> u11) {
  if (std::abs(u11.imag()) > 1e-10) {
    throw std::runtime_error("return amplitude has a non-vanishing imaginary part; "
                             "the pulse product lost its even-i structure");
  }
  if (std::abs(u11.real()) > 1.0 + 1e-12) {
    throw std::runtime_error("return amplitude exceeds unit magnitude");
  }
  return u11.real();
}

}  // namespace

double mixing_angle(const Pulse& p, SubsystemId s) {
  switch (s) {
    case SubsystemId::V:
      return 0.5 * p.area;
    case SubsystemId::A:
      return 0.5 * p.e.a * p.area;
    case SubsystemId::B:
      return 0.5 * p.e.b * p.area;
  }
  return 0.0;
}

SubsystemUnitary pulse_unitary(const Pulse& p, SubsystemId s) {
  if (s == SubsystemId::V) {
    return SubsystemUnitary{v_unitary(p)};
  }
  return SubsystemUnitary{two_level_unitary(mixing_angle(p, s))};
}

double return_amplitude(const PulseSequence& seq, SubsystemId s) {
  if (s == SubsystemId::V) {
    Eigen::Matrix3cd u = Eigen::Matrix3cd::Identity();
    for (const Pulse& p : seq.pulses()) u = v_unitary(p) * u;  // last pulse leftmost
    return check_real_amplitude(u(0, 0));
  }
  Eigen::Matrix2cd u = Eigen::Matrix2cd::Identity();
  for (const Pulse& p : seq.pulses()) u = two_level_unitary(mixing_angle(p, s)) * u;
  return check_real_amplitude(u(0, 0));
}

GateDiagonal gate_diagonal(const PulseSequence& seq) {
  return GateDiagonal{return_amplitude(seq, SubsystemId::V),
                      return_amplitude(seq, SubsystemId::A),
                      return_amplitude(seq, SubsystemId::B)};
}

FidelityResult fidelity(const GateDiagonal& g) {
  // |Tr(T^dag U)|^2 / 16 over the admissible CZ sign patterns; for real
  // amplitudes the local-phase maximization reduces to these four branches.
  const std::array<double, 4> traces = {
      g.uV + g.uA + g.uB - 1.0,
      g.uV + g.uA - g.uB + 1.0,
      g.uV - g.uA + g.uB + 1.0,
      g.uV - g.uA - g.uB - 1.0,
  };
  static const std::array<const char*, 4> names = {"(-,-,-)", "(+,+,-)", "(+,-,+)", "(-,+,+)"};
  int best = 0;
  double best_sq = traces[0] * traces[0];
  for (int i = 1; i < 4; ++i) {
    const double sq = traces[static_cast<std::size_t>(i)] * traces[static_cast<std::size_t>(i)];
    if (sq > best_sq) {
      best_sq = sq;
      best = i;
    }
  }
  FidelityResult r;
  r.fidelity = std::min(1.0, best_sq / 16.0);
  r.error = 1.0 - r.fidelity;
  r.branch = names[static_cast<std::size_t>(best)];
  return r;
}

}  // namespace qgate
