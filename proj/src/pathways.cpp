#include "qgate/pathways.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qgate/propagator.hpp"

namespace qgate {

namespace {

// A pulse with |theta| below this couples nowhere in the subsystem and is
// treated as absent when counting delays.
constexpr double kActiveMixingTol = 1e-12;

struct PulseFactors {
  double c;
  double s;
  StructuralVector e;
  bool active;
};

struct Enumerator {
  const std::vector<PulseFactors>& f;
  bool is_v;
  std::vector<Pathway> out;
  std::vector<PathwayEvent> events;

  // `v` is the excited-manifold direction carried between pulses; for the
  // two-level subsystems the manifold is one-dimensional and va == 1, vb == 0
  // throughout.
  void walk(int k, bool ground, double va, double vb, double amp, int loops, int delays) {
    const int n = static_cast<int>(f.size());
    if (k == n) {
      if (ground) {
        Pathway p;
        p.events = events;
        p.amplitude = (loops % 2 == 0 ? amp : -amp);  // i^2 per loop
        p.loops = loops;
        p.delays = delays;
        out.push_back(std::move(p));
      }
      return;
    }
    const PulseFactors& pf = f[static_cast<std::size_t>(k)];
    if (ground) {
      events.push_back({PathwayEventKind::StayGround, k});
      walk(k + 1, true, 0.0, 0.0, amp * pf.c, loops, delays);
      events.pop_back();

      events.push_back({PathwayEventKind::Up, k});
      if (is_v) {
        walk(k + 1, false, pf.e.a, pf.e.b, amp * pf.s, loops + 1, delays);
      } else {
        walk(k + 1, false, 1.0, 0.0, amp * pf.s, loops + 1, delays);
      }
      events.pop_back();
    } else {
      const double overlap = is_v ? (pf.e.a * va + pf.e.b * vb) : va;
      const int d = delays + (pf.active ? 1 : 0);

      events.push_back({PathwayEventKind::Down, k});
      walk(k + 1, true, 0.0, 0.0, amp * pf.s * overlap, loops, delays);
      events.pop_back();

      events.push_back({PathwayEventKind::StayCoupled, k});
      if (is_v) {
        walk(k + 1, false, pf.e.a, pf.e.b, amp * pf.c * overlap, loops, d);
      } else {
        walk(k + 1, false, 1.0, 0.0, amp * pf.c * overlap, loops, d);
      }
      events.pop_back();

      if (is_v) {
        // Unnormalized projection (1 - |e><e|) v; the weight stays in the
        // direction and contracts at the next Down/StayCoupled.
        events.push_back({PathwayEventKind::StayDark, k});
        walk(k + 1, false, va - pf.e.a * overlap, vb - pf.e.b * overlap, amp, loops, d);
        events.pop_back();
      }
    }
  }
};

std::vector<PulseFactors> subsystem_factors(const PulseSequence& seq, SubsystemId s) {
  std::vector<PulseFactors> f;
  f.reserve(static_cast<std::size_t>(seq.size()));
  for (const Pulse& p : seq.pulses()) {
    const double theta = mixing_angle(p, s);
    f.push_back({std::cos(theta), std::sin(theta), p.e, std::abs(theta) > kActiveMixingTol});
  }
  return f;
}

SubsystemMechanism subsystem_mechanism(const PulseSequence& seq, SubsystemId s) {
  SubsystemMechanism m;
  m.buckets = bucket_amplitudes(seq, s);
  std::tie(m.x, m.y) = mechanism_xy(m.buckets);
  m.omega = omega_rank(m.x, m.y);
  return m;
}

}  // namespace

std::vector<Pathway> enumerate_pathways(const PulseSequence& seq, SubsystemId s) {
  if (seq.size() > kMaxPulses) {
    throw std::invalid_argument("pathway enumeration is limited to 6 pulses");
  }
  Enumerator en{subsystem_factors(seq, s), s == SubsystemId::V, {}, {}};
  en.events.reserve(static_cast<std::size_t>(seq.size()));
  en.walk(0, true, 0.0, 0.0, 1.0, 0, 0);
  return en.out;
}

MechanismBuckets bucket_amplitudes(const PulseSequence& seq, SubsystemId s) {
  MechanismBuckets b;
  for (const Pathway& p : enumerate_pathways(seq, s)) {
    if (p.loops == 0) {
      b.u0 += p.amplitude;
    } else if (p.loops == 1 && p.delays == 0) {
      b.u1 += p.amplitude;
    } else if (p.loops == 1) {
      b.ud += p.amplitude;
    } else {
      b.u2 += p.amplitude;
    }
  }
  return b;
}

MechanismBuckets closed_form_buckets_4(const PulseSequence& seq, SubsystemId s) {
  if (seq.size() != 4) {
    throw std::invalid_argument("closed-form buckets require exactly 4 pulses");
  }
  const auto f = subsystem_factors(seq, s);
  const double c1 = f[0].c, c2 = f[1].c, c3 = f[2].c, c4 = f[3].c;
  const double s1 = f[0].s, s2 = f[1].s, s3 = f[2].s, s4 = f[3].s;

  MechanismBuckets b;
  if (s == SubsystemId::V) {
    using Eigen::Matrix2d;
    using Eigen::Vector2d;
    const Vector2d e1(f[0].e.a, f[0].e.b), e2(f[1].e.a, f[1].e.b);
    const Vector2d e3(f[2].e.a, f[2].e.b), e4(f[3].e.a, f[3].e.b);
    const Matrix2d d2 = Matrix2d::Identity() + (c2 - 1.0) * e2 * e2.transpose();
    const Matrix2d d3 = Matrix2d::Identity() + (c3 - 1.0) * e3 * e3.transpose();
    b.u0 = c4 * c3 * c2 * c1;
    b.u1 = -s4 * e4.dot(e3) * s3 * c2 * c1 - c4 * s3 * e3.dot(e2) * s2 * c1 -
           c4 * c3 * s2 * e2.dot(e1) * s1;
    b.ud = -s4 * (e4.transpose() * d3 * e2).value() * s2 * c1 -
           c4 * s3 * (e3.transpose() * d2 * e1).value() * s1 -
           s4 * (e4.transpose() * d3 * d2 * e1).value() * s1;
    b.u2 = s4 * e4.dot(e3) * s3 * s2 * e2.dot(e1) * s1;
  } else {
    // Two-level subsystems: bright overlaps are 1 and the dark projectors
    // disappear, leaving plain c factors in the delay rows.
    b.u0 = c4 * c3 * c2 * c1;
    b.u1 = -s4 * s3 * c2 * c1 - c4 * s3 * s2 * c1 - c4 * c3 * s2 * s1;
    b.ud = -s4 * c3 * s2 * c1 - c4 * s3 * c2 * s1 - s4 * c3 * c2 * s1;
    b.u2 = s4 * s3 * s2 * s1;
  }
  return b;
}

std::pair<double, double> mechanism_xy(const MechanismBuckets& b) {
  const double x = b.u0 + b.u1 - b.ud - b.u2;
  const double y = b.u0 + b.ud - b.u1 - b.u2;
  return {std::clamp(x, -1.0, 1.0), std::clamp(y, -1.0, 1.0)};
}

int omega_rank(double x, double y) {
  x = std::clamp(x, -1.0, 1.0);
  y = std::clamp(y, -1.0, 1.0);
  const int col = std::min(3, static_cast<int>(std::floor(3.0 * (x + 1.0) / 2.0)) + 1);
  const int row = std::min(3, static_cast<int>(std::floor(3.0 * (y + 1.0) / 2.0)) + 1);
  return row + 3 * (col - 1);
}

MechanismPoint mcube_point(const PulseSequence& seq) {
  MechanismPoint m;
  m.v = subsystem_mechanism(seq, SubsystemId::V);
  m.a = subsystem_mechanism(seq, SubsystemId::A);
  m.b = subsystem_mechanism(seq, SubsystemId::B);
  m.cube = {m.a.omega, m.b.omega, m.v.omega};
  m.omega_total = m.a.omega + m.b.omega + m.v.omega;
  return m;
}

double bucket_value(const MechanismBuckets& b, MechanismClass c) {
  switch (c) {
    case MechanismClass::ZeroLoop:
      return b.u0;
    case MechanismClass::OneLoop:
      return b.u1;
    case MechanismClass::DLoop:
      return b.ud;
    case MechanismClass::TwoLoop:
      return b.u2;
  }
  return 0.0;
}

}  // namespace qgate
