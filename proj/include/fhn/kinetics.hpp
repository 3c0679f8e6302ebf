#pragma once

#include <array>
#include <stdexcept>
#include <string>

namespace fhn {

class KineticsError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Cubic reaction term f(s) = c3 s^3 + c2 s^2 + c1 s + c0 with c3 < 0.
///
/// `zero` (f = 0) exists only for pure-diffusion test runs; it does not
/// satisfy the dissipativity bounds and has no assumption constants.
class Kinetics {
public:
  enum class Family { classic_cubic, general_cubic, polynomial, zero };

  /// f(s) = s - s^3/3
  static Kinetics classic();
  /// f(s) = kappa s (s - c)(1 - s), kappa > 0, 0 < c < 1
  static Kinetics general(double kappa, double c);
  /// Coefficients in ascending order c0..c3; requires c3 < 0.
  static Kinetics polynomial(const std::array<double, 4>& coefficients);
  static Kinetics zero();

  Family family() const { return family_; }
  const std::array<double, 4>& coefficients() const { return coeff_; }
  std::string name() const;

private:
  Kinetics(Family family, const std::array<double, 4>& coeff) : family_(family), coeff_(coeff) {}
  Family family_;
  std::array<double, 4> coeff_;
};

double eval_f(const Kinetics& k, double s);
double eval_f_prime(const Kinetics& k, double s);

/// Constants of the growth bounds
///   s f(s) <= -lambda s^4 + phi,   |f(s)| <= alpha |s|^3 + zeta,
///   |f'(s)| <= beta s^2 + xi,      f'(s) <= gamma.
struct AssumptionConstants {
  double lambda;
  double phi;
  double alpha;
  double zeta;
  double beta;
  double xi;
  double gamma;
};

/// lambda is half the magnitude of the quartic coefficient of s f(s); phi is
/// the exact maximum of s f(s) + lambda s^4, found from the real roots of its
/// cubic derivative. alpha/zeta and beta/xi come from term-wise bounds using
/// |s|^k <= |s|^3 + 1 (k < 3) and |s| <= (s^2 + 1)/2.
AssumptionConstants extract_assumption_constants(const Kinetics& k);

}  // namespace fhn
