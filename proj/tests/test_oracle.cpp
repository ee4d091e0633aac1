#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qgate/oracle.hpp"
#include "qgate/rng.hpp"
#include "test_util.hpp"

using namespace qgate;
using qgate::testing::jaksch_sequence;
using qgate::testing::random_sequence;

namespace {
const EnvelopeSpec kEnv{};                    // sin^2, tau = 1, gap = 0.1
const double kDt = kEnv.tau / 1000.0;
}  // namespace

TEST_CASE("zero areas integrate to the identity") {
  const PulseSequence seq({{0.0, {1, 0}}, {0.0, {0, 1}}});
  const Matrix8cd u = integrate_sequence(seq, kEnv, kDt);
  CHECK((u - Matrix8cd::Identity()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("a 2-pi pulse returns |00> with a sign flip") {
  const PulseSequence seq({{2.0 * kPi, {1, 0}}});
  const Matrix8cd u = integrate_sequence(seq, kEnv, kDt);
  CHECK(std::abs(u(state8::k00, state8::k00) - std::complex<double>(-1.0, 0.0)) <= 1e-6);
}

TEST_CASE("the Jaksch train realizes the all-minus diagonal") {
  const Matrix8cd u = integrate_sequence(jaksch_sequence(), kEnv, kDt);
  CHECK(std::abs(u(state8::k00, state8::k00) + 1.0) <= 1e-6);
  CHECK(std::abs(u(state8::k01, state8::k01) + 1.0) <= 1e-6);
  CHECK(std::abs(u(state8::k10, state8::k10) + 1.0) <= 1e-6);
  CHECK(std::abs(u(state8::k11, state8::k11) - 1.0) <= 1e-6);
}

TEST_CASE("column norms stay conserved") {
  Rng rng(51);
  for (int t = 0; t < 5; ++t) {
    const Matrix8cd u = integrate_sequence(random_sequence(rng, 3), kEnv, kDt);
    for (int c = 0; c < state8::kDim; ++c) {
      CHECK(std::abs(u.col(c).norm() - 1.0) <= 1e-8);
    }
  }
}

TEST_CASE("integration matches the analytic product") {
  CHECK(compare_with_analytic(jaksch_sequence(), kEnv, kDt) <= 1e-6);
  Rng rng(52);
  double worst = 0.0;
  for (int t = 0; t < 25; ++t) {
    const PulseSequence seq = random_sequence(rng, rng.uniform_int(1, 4));
    worst = std::max(worst, compare_with_analytic(seq, kEnv, kDt));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("flat-top envelopes of equal area give the same gate") {
  Rng rng(53);
  EnvelopeSpec flat = kEnv;
  flat.shape = EnvelopeShape::FlatTop;
  for (int t = 0; t < 5; ++t) {
    const PulseSequence seq = random_sequence(rng, rng.uniform_int(1, 3), 0.1 * kPi, 4.0 * kPi);
    const Matrix8cd a = integrate_sequence(seq, kEnv, kDt);
    const Matrix8cd b = integrate_sequence(seq, flat, kDt);
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-8);
  }
}

TEST_CASE("envelope areas integrate exactly") {
  Rng rng(54);
  EnvelopeSpec flat = kEnv;
  flat.shape = EnvelopeShape::FlatTop;
  for (int t = 0; t < 20; ++t) {
    const double area = rng.uniform(-12.0 * kPi, 12.0 * kPi);
    CHECK(std::abs(integrated_envelope_area(area, kEnv, kDt) - area) <= 1e-10);
    CHECK(std::abs(integrated_envelope_area(area, flat, kDt) - area) <= 1e-10);
  }
}

TEST_CASE("blockade keeps the doubly-excited amplitudes at zero by construction") {
  // the state space simply has no |rr> slot; the analytic embedding leaves
  // |11> strictly uncoupled
  Rng rng(55);
  const Matrix8cd u = analytic_full_unitary(random_sequence(rng, 4));
  for (int i = 0; i < state8::kDim; ++i) {
    if (i == state8::k11) continue;
    CHECK(std::abs(u(i, state8::k11)) == 0.0);
    CHECK(std::abs(u(state8::k11, i)) == 0.0);
  }
  CHECK(u(state8::k11, state8::k11) == std::complex<double>(1.0, 0.0));
}

TEST_CASE("invalid envelopes and steps are rejected") {
  Rng rng(56);
  const PulseSequence seq = random_sequence(rng, 2);
  EnvelopeSpec overlapped = kEnv;
  overlapped.gap = -0.05;
  CHECK_THROWS_AS(integrate_sequence(seq, overlapped, kDt), std::invalid_argument);
  CHECK_THROWS_AS(integrate_sequence(seq, kEnv, kEnv.tau / 100.0), std::invalid_argument);
}
