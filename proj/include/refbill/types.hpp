#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace refbill {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double half_pi = 0.5 * std::numbers::pi;

// Wrap an angle into [0, 2*pi).
inline double wrap_angle(double a) {
  a = std::fmod(a, two_pi);
  return a < 0.0 ? a + two_pi : a;
}

// Signed angular difference a - b, wrapped into (-pi, pi].
inline double angle_diff(double a, double b) {
  double d = std::fmod(a - b, two_pi);
  if (d <= -std::numbers::pi) d += two_pi;
  if (d > std::numbers::pi) d -= two_pi;
  return d;
}

// The four physical constants of the two-region system: reference energy E,
// harmonic frequency omega outside, inner energy offset h and Keplerian mass mu.
struct PhysParams {
  double energy = 0.0;
  double omega = 0.0;
  double h = 0.0;
  double mu = 0.0;
};

enum class Region { inner, outer };

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonPositiveParameter final : Error { using Error::Error; };
struct HillViolation final : Error { using Error::Error; };
struct OriginSingularity final : Error { using Error::Error; };
struct OutsideHill final : Error { using Error::Error; };
struct DegenerateVelocity final : Error { using Error::Error; };
struct TangentialLaunch final : Error { using Error::Error; };
struct TangentialEntry final : Error { using Error::Error; };
struct CrossingNotBracketed final : Error { using Error::Error; };
struct CurveInversionFailure final : Error { using Error::Error; };
struct NotHomothetic final : Error { using Error::Error; };
struct DegenerateQuadruple final : Error { using Error::Error; };
struct NoSignChange final : Error { using Error::Error; };
struct RadialTangency final : Error { using Error::Error; };
struct TangencyError final : Error { using Error::Error; };
struct IoError final : Error { using Error::Error; };
struct ConfigError final : Error { using Error::Error; };

}  // namespace refbill
