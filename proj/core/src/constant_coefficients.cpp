#include <algorithm>
#include <cmath>
#include <sstream>

#include "ulamkit/errors.hpp"
#include "ulamkit/stability.hpp"

namespace ulamkit {

namespace {

bool real_root(Complex z, double scale) {
  return std::abs(z.imag()) <= 1e-12 * std::max(1.0, scale);
}

expr::Expr literal(Complex z) {
  expr::Expr re = expr::Expr::number(z.real());
  if (z.imag() == 0.0) return re;
  return re + expr::Expr::number(z.imag()) * expr::parse("i");
}

std::string text(Complex z) {
  std::ostringstream os;
  os.precision(17);
  if (z.imag() == 0.0) {
    os << z.real();
  } else {
    os << "(" << z.real() << "+(" << z.imag() << ")*i)";
  }
  return os.str();
}

}  // namespace

ConstantCoefficientResult constant_coefficients(Complex a0, Complex a1,
                                                Complex a2) {
  if (a0 == Complex{}) {
    throw DegenerateLeadingCoefficient("a0 must be nonzero");
  }
  ConstantCoefficientResult out;
  CharacteristicRoots& r = out.roots;
  r.a0 = a0;
  r.a1 = a1;
  r.a2 = a2;
  // q = −(a1 ± √disc)/2 with the sign that avoids cancellation.
  const Complex disc = std::sqrt(a1 * a1 - 4.0 * a0 * a2);
  const Complex q = (std::real(std::conj(a1) * disc) >= 0.0)
                        ? -0.5 * (a1 + disc)
                        : -0.5 * (a1 - disc);
  Complex l1, l2;
  if (q == Complex{}) {
    l1 = l2 = Complex{};
  } else {
    l1 = q / a0;
    l2 = a2 / q;
  }
  if (l2.real() > l1.real() ||
      (l2.real() == l1.real() && l2.imag() > l1.imag())) {
    std::swap(l1, l2);
  }
  r.lambda1 = l1;
  r.lambda2 = l2;

  const double re1 = l1.real(), re2 = l2.real();
  if (re1 >= re2 && re2 > 0.0) {
    out.selected = Case::kI;
  } else if (re1 > 0.0 && 0.0 > re2) {
    out.selected = Case::kII;
  } else if (0.0 > re1) {
    out.selected = Case::kIII;
  }
  if (re1 * re2 != 0.0) {
    out.L = 1.0 / std::abs(a0 * re1 * re2);
  }
  const double scale = std::max(std::abs(l1), std::abs(l2));
  const bool real_data = a0.imag() == 0.0 && a1.imag() == 0.0 && a2.imag() == 0.0;
  if (real_data && real_root(l1, scale) && real_root(l2, scale) &&
      l1 != Complex{} && l2 != Complex{}) {
    out.B = 1.0 / std::abs(a0 * l1 * l2);
  }
  return out;
}

TruncatedProblem constant_coefficient_problem(Complex a0, Complex a1,
                                              Complex a2) {
  const ConstantCoefficientResult cc = constant_coefficients(a0, a1, a2);
  const double m = std::min(std::abs(cc.roots.lambda1.real()),
                            std::abs(cc.roots.lambda2.real()));
  if (m == 0.0) {
    throw InvalidInput("a root with zero real part has no truncated analogue");
  }
  TruncatedProblem out;
  out.T = 40.0 / m;
  OscillatorProblem& p = out.problem;
  p.name = "const(" + text(a0) + "," + text(a1) + "," + text(a2) + ")";
  p.alpha = literal(a0);
  p.beta = literal(a1);
  p.gamma = literal(a2);
  p.forcing = expr::Expr::number(0.0);
  p.alpha_text = text(a0);
  p.beta_text = text(a1);
  p.gamma_text = text(a2);
  p.forcing_text = "0";
  p.domain = Interval::open(-out.T, out.T);
  out.rho = literal(cc.roots.lambda2);
  return out;
}

}  // namespace ulamkit
