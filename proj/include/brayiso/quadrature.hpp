#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace brayiso {

struct QuadratureSpec {
  enum class Rule { closed_form, adaptive };
  Rule rule = Rule::closed_form;
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 15;  // maximum bisection depth of the adaptive rule

  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double error = 0.0;
};

/// Gauss-Legendre rule on [-1, 1]: nodes ascending, weights positive.
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Rules are cached per n; the returned reference stays valid for the process lifetime.
const GaussLegendre& gauss_legendre(std::size_t n);

// Integrates f over [a, b] with the GL rule mapped linearly.
double integrate_gl(const std::function<double(double)>& f, double a, double b, std::size_t n);

/// Adaptive Gauss-Kronrod (7/15) on [a, b]. Throws NumericError if the error
/// estimate exceeds max(abs_tol, rel_tol * |value|).
IntegralResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureSpec& spec = {});

/// Integral over [a, inf) of a decaying integrand (exp-sinh rule).
IntegralResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                     const QuadratureSpec& spec = {});

}  // namespace brayiso
