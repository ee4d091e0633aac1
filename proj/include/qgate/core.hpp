#pragma once

#include <initializer_list>
#include <numbers>
#include <vector>

namespace qgate {

inline constexpr double kPi = std::numbers::pi;

/// Default cap on the magnitude of a single signed pulse area.
inline constexpr double kDefaultAreaMax = 12.0 * std::numbers::pi;

/// Largest supported sequence length.
inline constexpr int kMaxPulses = 6;

/// Unit vector (a, b) of the per-qubit coupling factors of one pulse:
/// a acts at qubit A, b at qubit B. Negative components are allowed
/// (structured-light modes); a^2 + b^2 = 1.
struct StructuralVector {
  double a = 1.0;
  double b = 0.0;
};

/// Builds (cos phi, sin phi). Throws std::invalid_argument on non-finite phi.
StructuralVector make_structural_vector(double phi);

/// Scalar product a1*a2 + b1*b2 of two structural vectors.
double dot(const StructuralVector& e1, const StructuralVector& e2);

/// Polar angle atan2(b, a); make_structural_vector(polar_angle(e)) == e.
double polar_angle(const StructuralVector& e);

/// One pulse: signed effective area (radians) plus its structural vector.
struct Pulse {
  double area = 0.0;
  StructuralVector e;
};

/// Ordered list of non-overlapping pulses, applied in list order.
/// Valid lengths are 1..kMaxPulses; the constructor enforces this.
class PulseSequence {
 public:
  explicit PulseSequence(std::vector<Pulse> pulses);
  PulseSequence(std::initializer_list<Pulse> pulses)
      : PulseSequence(std::vector<Pulse>(pulses)) {}

  const std::vector<Pulse>& pulses() const { return pulses_; }
  const Pulse& pulse(int k) const { return pulses_[static_cast<std::size_t>(k)]; }
  int size() const { return static_cast<int>(pulses_.size()); }

 private:
  std::vector<Pulse> pulses_;
};

/// Decoupled blocks of the blockaded two-qubit Hamiltonian. The first ket
/// slot is qubit A: subsystem A starts from |01> and couples with factor a,
/// subsystem B starts from |10> and couples with factor b, V spans
/// {|00>, |r0>, |0r>}.
enum class SubsystemId { V, A, B };

enum class ConstraintMode {
  AbsB,     // |b_k| >= sigma
  Positive, // a_k >= sigma and b_k >= sigma
  AbsBoth,  // |a_k| >= sigma and |b_k| >= sigma
};

struct ConstraintSpec {
  double sigma = 0.0;
  ConstraintMode mode = ConstraintMode::AbsB;
  double area_max = kDefaultAreaMax;
};

/// True iff every pulse satisfies the mode inequality and |area| <= area_max.
bool check_constraints(const PulseSequence& seq, const ConstraintSpec& c);

/// Pairwise overlaps cos beta_ij = <e_i|e_j> as a full N x N matrix.
std::vector<std::vector<double>> cos_beta_matrix(const PulseSequence& seq);

/// Total area A_T = sum_k |A_k|.
double total_area(const PulseSequence& seq);

}  // namespace qgate
