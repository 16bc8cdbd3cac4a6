#ifndef ROBEAM_CORE_HPP
#define ROBEAM_CORE_HPP

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace robeam {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using RealVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using ComplexMatrix = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

/// A steering vector is a plain complex column vector; one entry per element.
template <typename Scalar>
using SteeringVector = ComplexVector<Scalar>;

/// Beamformer weights w. The array response at angle theta is |w^H a_theta|.
template <typename Scalar>
using Beamformer = ComplexVector<Scalar>;

using Index = Eigen::Index;

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when inputs that must agree in shape do not.
class ConstructionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename Scalar>
constexpr Scalar deg_to_rad(Scalar degrees) {
  return degrees * std::numbers::pi_v<Scalar> / Scalar(180);
}

template <typename Scalar>
constexpr Scalar rad_to_deg(Scalar radians) {
  return radians * Scalar(180) / std::numbers::pi_v<Scalar>;
}

template <typename Scalar>
Scalar positive_part(Scalar value) {
  return value > Scalar(0) ? value : Scalar(0);
}

/// w^H a, written out so the conjugation side is unambiguous.
template <typename DerivedW, typename DerivedA>
auto response(const Eigen::MatrixBase<DerivedW>& w, const Eigen::MatrixBase<DerivedA>& a) {
  return w.dot(a);  // Eigen's dot conjugates the left operand
}

/// Deterministic 64-bit generator with a fixed, documented algorithm
/// (SplitMix64 seeding into xoshiro256**), so random draws reproduce
/// bit-for-bit on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix(s);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  static std::uint64_t splitmix(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_[4]{};
};

}  // namespace robeam

#endif  // ROBEAM_CORE_HPP
