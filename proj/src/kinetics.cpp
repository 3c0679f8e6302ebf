#include "fhn/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <vector>

namespace fhn {

Kinetics Kinetics::classic() { return Kinetics(Family::classic_cubic, {0.0, 1.0, 0.0, -1.0 / 3.0}); }

Kinetics Kinetics::general(double kappa, double c) {
  if (!(kappa > 0.0)) throw KineticsError("kappa must be > 0");
  if (!(c > 0.0 && c < 1.0)) throw KineticsError("c must be in (0, 1)");
  // kappa s (s - c)(1 - s) = kappa (-s^3 + (1 + c) s^2 - c s)
  return Kinetics(Family::general_cubic, {0.0, -kappa * c, kappa * (1.0 + c), -kappa});
}

Kinetics Kinetics::polynomial(const std::array<double, 4>& coefficients) {
  for (double c : coefficients)
    if (!std::isfinite(c)) throw KineticsError("polynomial coefficients must be finite");
  if (!(coefficients[3] < 0.0)) throw KineticsError("cubic coefficient must be < 0");
  return Kinetics(Family::polynomial, coefficients);
}

Kinetics Kinetics::zero() { return Kinetics(Family::zero, {0.0, 0.0, 0.0, 0.0}); }

std::string Kinetics::name() const {
  switch (family_) {
    case Family::classic_cubic: return "classic_cubic";
    case Family::general_cubic: return "general_cubic";
    case Family::polynomial: return "polynomial";
    case Family::zero: return "zero";
  }
  return "unknown";
}

double eval_f(const Kinetics& k, double s) {
  const auto& c = k.coefficients();
  return ((c[3] * s + c[2]) * s + c[1]) * s + c[0];
}

double eval_f_prime(const Kinetics& k, double s) {
  const auto& c = k.coefficients();
  return (3.0 * c[3] * s + 2.0 * c[2]) * s + c[1];
}

namespace {

/// Real roots of a s^3 + b s^2 + c s + d (a != 0), Newton-polished.
std::vector<double> real_cubic_roots(double a, double b, double c, double d) {
  const double B = b / a, C = c / a, D = d / a;
  const double P = C - B * B / 3.0;
  const double Q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
  const double shift = -B / 3.0;
  std::vector<double> roots;

  const double disc = 0.25 * Q * Q + P * P * P / 27.0;
  if (std::abs(P) < 1e-300) {
    roots.push_back(std::cbrt(-Q) + shift);
  } else if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    roots.push_back(std::cbrt(-0.5 * Q + sq) + std::cbrt(-0.5 * Q - sq) + shift);
  } else {
    const double r = 2.0 * std::sqrt(-P / 3.0);
    const double arg = std::clamp(1.5 * Q / P * std::sqrt(-3.0 / P), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k)
      roots.push_back(r * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0) + shift);
  }

  for (double& s : roots) {
    for (int it = 0; it < 4; ++it) {
      const double g = ((a * s + b) * s + c) * s + d;
      const double dg = (3.0 * a * s + 2.0 * b) * s + c;
      if (dg == 0.0) break;
      s -= g / dg;
    }
  }
  return roots;
}

}  // namespace

AssumptionConstants extract_assumption_constants(const Kinetics& k) {
  if (k.family() == Kinetics::Family::zero)
    throw KineticsError("zero kinetics has no dissipative growth constants");
  const auto [c0, c1, c2, c3] = k.coefficients();

  AssumptionConstants out{};
  // s f(s) = c3 s^4 + c2 s^3 + c1 s^2 + c0 s
  out.lambda = 0.5 * std::abs(c3);
  const double q4 = c3 + out.lambda;  // = c3/2 < 0
  auto g = [&](double s) { return ((q4 * s + c2) * s + c1) * s * s + c0 * s; };
  double phi = 0.0;  // g(0) = 0
  for (double s : real_cubic_roots(4.0 * q4, 3.0 * c2, 2.0 * c1, c0)) phi = std::max(phi, g(s));
  out.phi = phi;

  out.alpha = std::abs(c3) + std::abs(c2) + std::abs(c1);
  out.zeta = std::abs(c2) + std::abs(c1) + std::abs(c0);

  // f'(s) = 3 c3 s^2 + 2 c2 s + c1
  out.beta = 3.0 * std::abs(c3) + std::abs(c2);
  out.xi = std::abs(c2) + std::abs(c1);

  // sup f' at s = -c2 / (3 c3); any positive upper bound is admissible
  const double sup_fp = c1 - c2 * c2 / (3.0 * c3);
  out.gamma = std::max(sup_fp, std::numeric_limits<double>::min());
  return out;
}

}  // namespace fhn
