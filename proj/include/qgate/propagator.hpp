#pragma once

#include <Eigen/Dense>
#include <string>

#include "qgate/core.hpp"

namespace qgate {

/// Analytic single-pulse unitary on one subsystem block: 3x3 for V with
/// basis (|00>, |r0>, |0r>), 2x2 for A (|01>, |r1>) and B (|10>, |1r>).
struct SubsystemUnitary {
  Eigen::MatrixXcd matrix;
  int dim() const { return static_cast<int>(matrix.rows()); }
};

/// Return amplitudes U^S_T(1,1) of the three coupled blocks. The |11> state
/// is uncoupled and contributes a fixed +1 to the gate diagonal.
struct GateDiagonal {
  double uV = 1.0;
  double uA = 1.0;
  double uB = 1.0;
};

/// Gate quality of a diagonal (uV, uA, uB, 1) against the CZ class, maximized
/// over single-qubit Z phases and global phase. `branch` names the sign
/// pattern of (uV, uA, uB) at which the winning branch reaches F = 1.
struct FidelityResult {
  double fidelity = 0.0;
  double error = 1.0;
  std::string branch;
};

/// Subsystem mixing angle: V -> A/2, A -> a*A/2, B -> b*A/2.
double mixing_angle(const Pulse& p, SubsystemId s);

SubsystemUnitary pulse_unitary(const Pulse& p, SubsystemId s);

/// (1,1) element of the time-ordered product of pulse unitaries (last pulse
/// leftmost). The element is real by the pathway structure; an imaginary part
/// above 1e-10 signals an internal inconsistency and throws.
double return_amplitude(const PulseSequence& seq, SubsystemId s);

GateDiagonal gate_diagonal(const PulseSequence& seq);

FidelityResult fidelity(const GateDiagonal& g);

}  // namespace qgate
