#pragma once

#include <array>
#include <utility>
#include <vector>

#include "qgate/core.hpp"

namespace qgate {

enum class PathwayEventKind {
  StayGround,   // remain in |0~>, factor c_k
  Up,           // |0~> -> bright state, factor i s_k
  Down,         // bright overlap -> |0~>, factor i s_k <e_k|v>
  StayCoupled,  // remain excited along e_k, factor c_k <e_k|v>
  StayDark,     // remain excited in the dark complement (V only)
};

struct PathwayEvent {
  PathwayEventKind kind;
  int pulse_index;  // 0-based
};

/// One ground-to-ground excitation history, one event per pulse.
/// `loops` counts Up events. `delays` counts excited-manifold stays under
/// pulses that actually couple to the subsystem; a pulse whose mixing angle
/// vanishes leaves the subsystem untouched and does not delay the loop it
/// sits inside.
struct Pathway {
  std::vector<PathwayEvent> events;
  double amplitude = 0.0;  // real: every loop carries an even power of i
  int loops = 0;
  int delays = 0;
};

/// Aggregated pathway amplitudes: 0-loop, 1-loop without delay, 1-loop with
/// delay, and everything with two or more loops. Their sum equals the
/// subsystem return amplitude exactly.
struct MechanismBuckets {
  double u0 = 0.0;
  double u1 = 0.0;
  double ud = 0.0;
  double u2 = 0.0;
  double sum() const { return u0 + u1 + ud + u2; }
};

enum class MechanismClass { ZeroLoop, OneLoop, DLoop, TwoLoop };

struct SubsystemMechanism {
  MechanismBuckets buckets;
  double x = 0.0;
  double y = 0.0;
  int omega = 0;  // 3x3 box rank in [1, 9]
};

/// Mechanism summary across subsystems. `cube` is ordered
/// (omega_A, omega_B, omega_V); omega_total is their sum.
struct MechanismPoint {
  SubsystemMechanism v;
  SubsystemMechanism a;
  SubsystemMechanism b;
  std::array<int, 3> cube{1, 1, 1};
  int omega_total = 3;
};

/// All ground-to-ground event strings with their amplitudes. Rejects
/// sequences longer than kMaxPulses. StayDark never appears for A/B.
std::vector<Pathway> enumerate_pathways(const PulseSequence& seq, SubsystemId s);

MechanismBuckets bucket_amplitudes(const PulseSequence& seq, SubsystemId s);

/// Closed-form four-pulse buckets, row by row (0-loop, the three adjacent
/// 1-loops, the delay terms, the 2-loop); dark projectors are dropped for
/// A and B. Requires exactly four pulses.
MechanismBuckets closed_form_buckets_4(const PulseSequence& seq, SubsystemId s);

/// (x, y) = (u0 + u1 - ud - u2, u0 + ud - u1 - u2), clamped to [-1, 1].
std::pair<double, double> mechanism_xy(const MechanismBuckets& b);

/// 3x3 box index in [1, 9]; the x = 1 and y = 1 edges fold into the top box.
int omega_rank(double x, double y);

MechanismPoint mcube_point(const PulseSequence& seq);

double bucket_value(const MechanismBuckets& b, MechanismClass c);

}  // namespace qgate
