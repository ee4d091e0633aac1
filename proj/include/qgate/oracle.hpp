#pragma once

#include <Eigen/Dense>
#include <complex>

#include "qgate/core.hpp"

namespace qgate {

/// Shaped envelope for the numerical integrator. Peak Rabi frequency is
/// derived from the pulse area so that the time integral equals A_k exactly.
enum class EnvelopeShape { Sin2, FlatTop };

struct EnvelopeSpec {
  EnvelopeShape shape = EnvelopeShape::Sin2;
  double tau = 1.0;  // duration of each pulse
  double gap = 0.1;  // field-free time between pulses; must be >= 0
};

/// Ordered 8-state basis of the blockaded two-qubit space:
/// |00>, |01>, |10>, |11>, |r0>, |0r>, |r1>, |1r>. |rr> is excluded.
namespace state8 {
inline constexpr int k00 = 0;
inline constexpr int k01 = 1;
inline constexpr int k10 = 2;
inline constexpr int k11 = 3;
inline constexpr int kR0 = 4;
inline constexpr int k0R = 5;
inline constexpr int kR1 = 6;
inline constexpr int k1R = 7;
inline constexpr int kDim = 8;
}  // namespace state8

using Matrix8cd = Eigen::Matrix<std::complex<double>, 8, 8>;

/// Propagates all eight basis states through the pulse train with fixed-step
/// RK4 and returns the column-wise final-state matrix. Requires dt <= tau/200;
/// aborts if any column norm drifts by more than 1e-6.
Matrix8cd integrate_sequence(const PulseSequence& seq, const EnvelopeSpec& env, double dt);

/// Block-assembled product of the analytic per-pulse unitaries on the full
/// 8-state space.
Matrix8cd analytic_full_unitary(const PulseSequence& seq);

/// Max absolute entry-wise deviation between the integrated and the analytic
/// propagator.
double compare_with_analytic(const PulseSequence& seq, const EnvelopeSpec& env, double dt);

/// Trapezoid integral of the envelope on the integrator grid; exact for both
/// shapes up to roundoff.
double integrated_envelope_area(double area, const EnvelopeSpec& env, double dt);

}  // namespace qgate
