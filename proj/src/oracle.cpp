#include "qgate/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "qgate/propagator.hpp"

namespace qgate {

namespace {

using std::complex;
constexpr complex<double> kI{0.0, 1.0};

void validate(const EnvelopeSpec& env, double dt) {
  if (env.tau <= 0.0) throw std::invalid_argument("pulse duration must be positive");
  if (env.gap < 0.0) {
    throw std::invalid_argument("pulse envelopes must not overlap (gap >= 0 required)");
  }
  if (dt <= 0.0 || dt > env.tau / 200.0) {
    throw std::invalid_argument("integration step must satisfy dt <= tau/200");
  }
}

double rabi(const EnvelopeSpec& env, double area, double t) {
  if (env.shape == EnvelopeShape::FlatTop) return area / env.tau;
  const double s = std::sin(kPi * t / env.tau);
  return 2.0 * area / env.tau * s * s;
}

// i/2 * K for the coupling pattern of one pulse; d/dt psi = Omega(t) * M psi.
Matrix8cd coupling_generator(const StructuralVector& e) {
  Matrix8cd m = Matrix8cd::Zero();
  const auto set = [&m](int i, int j, double g) {
    m(i, j) = kI * 0.5 * g;
    m(j, i) = kI * 0.5 * g;
  };
  set(state8::k00, state8::kR0, e.a);
  set(state8::k00, state8::k0R, e.b);
  set(state8::k01, state8::kR1, e.a);
  set(state8::k10, state8::k1R, e.b);
  return m;
}

}  // namespace

Matrix8cd integrate_sequence(const PulseSequence& seq, const EnvelopeSpec& env, double dt) {
  validate(env, dt);
  Matrix8cd psi = Matrix8cd::Identity();
  for (const Pulse& p : seq.pulses()) {
    const Matrix8cd m = coupling_generator(p.e);
    const long n = std::lround(env.tau / dt);
    const double h = env.tau / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) * h;
      const Matrix8cd k1 = rabi(env, p.area, t) * (m * psi);
      const Matrix8cd k2 = rabi(env, p.area, t + 0.5 * h) * (m * (psi + 0.5 * h * k1));
      const Matrix8cd k3 = rabi(env, p.area, t + 0.5 * h) * (m * (psi + 0.5 * h * k2));
      const Matrix8cd k4 = rabi(env, p.area, t + h) * (m * (psi + h * k3));
      psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    // The field vanishes in the gap, so the state is unchanged there.
  }
  for (int c = 0; c < state8::kDim; ++c) {
    const double drift = std::abs(psi.col(c).norm() - 1.0);
    if (drift > 1e-6) {
      throw std::runtime_error("integrator norm drift " + std::to_string(drift) +
                               " exceeds 1e-6; reduce the step size dt");
    }
  }
  return psi;
}

Matrix8cd analytic_full_unitary(const PulseSequence& seq) {
  Matrix8cd total = Matrix8cd::Identity();
  for (const Pulse& p : seq.pulses()) {
    Matrix8cd u = Matrix8cd::Identity();
    const Eigen::MatrixXcd uv = pulse_unitary(p, SubsystemId::V).matrix;
    const Eigen::MatrixXcd ua = pulse_unitary(p, SubsystemId::A).matrix;
    const Eigen::MatrixXcd ub = pulse_unitary(p, SubsystemId::B).matrix;
    const int v_idx[3] = {state8::k00, state8::kR0, state8::k0R};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) u(v_idx[i], v_idx[j]) = uv(i, j);
    }
    const int a_idx[2] = {state8::k01, state8::kR1};
    const int b_idx[2] = {state8::k10, state8::k1R};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        u(a_idx[i], a_idx[j]) = ua(i, j);
        u(b_idx[i], b_idx[j]) = ub(i, j);
      }
    }
    total = u * total;
  }
  return total;
}

double compare_with_analytic(const PulseSequence& seq, const EnvelopeSpec& env, double dt) {
  const Matrix8cd num = integrate_sequence(seq, env, dt);
  const Matrix8cd ana = analytic_full_unitary(seq);
  return (num - ana).cwiseAbs().maxCoeff();
}

double integrated_envelope_area(double area, const EnvelopeSpec& env, double dt) {
  validate(env, dt);
  const long n = std::lround(env.tau / dt);
  const double h = env.tau / static_cast<double>(n);
  double sum = 0.5 * (rabi(env, area, 0.0) + rabi(env, area, env.tau));
  for (long i = 1; i < n; ++i) sum += rabi(env, area, static_cast<double>(i) * h);
  return sum * h;
}

}  // namespace qgate
