#include "brayiso/quadrature.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "brayiso/errors.hpp"

namespace brayiso {

void QuadratureSpec::validate() const {
  require_domain(abs_tol > 0.0 && rel_tol > 0.0, "quadrature tolerances must be positive");
  require_domain(max_subdivisions >= 1, "max_subdivisions must be at least 1");
}

namespace {

GaussLegendre build_rule(std::size_t n) {
  GaussLegendre rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const auto positive = boost::math::legendre_p_zeros<double>(static_cast<int>(n));
  // legendre_p_zeros returns the nonnegative zeros in ascending order.
  for (std::size_t k = 0; k < positive.size(); ++k) {
    const double x = positive[k];
    const double dp = boost::math::legendre_p_prime<double>(static_cast<int>(n), x);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const std::size_t hi = n / 2 + k;
    const std::size_t lo = (n - 1) / 2 - k;
    rule.nodes[hi] = x;
    rule.weights[hi] = w;
    rule.nodes[lo] = -x;
    rule.weights[lo] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendre& gauss_legendre(std::size_t n) {
  require_domain(n >= 1, "Gauss-Legendre rule needs at least one node");
  static std::mutex mutex;
  static std::map<std::size_t, GaussLegendre> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, std::size_t n) {
  const auto& rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

IntegralResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  const QuadratureSpec& spec) {
  spec.validate();
  if (a == b) return {};
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, static_cast<unsigned>(spec.max_subdivisions), spec.rel_tol * 1e-2, &error, &l1);
  const double allowed = std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
  if (!std::isfinite(value) || error > allowed) {
    throw NumericError("adaptive quadrature did not converge: error estimate " +
                       std::to_string(error) + " exceeds " + std::to_string(allowed));
  }
  return {value, error};
}

IntegralResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                     const QuadratureSpec& spec) {
  spec.validate();
  boost::math::quadrature::exp_sinh<double> rule;
  double error = 0.0;
  double l1 = 0.0;
  std::size_t levels = 0;
  // exp_sinh integrates over (0, inf); shift the integrand to start at a.
  const double value = rule.integrate([&](double t) { return f(a + t); },
                                      spec.rel_tol * 1e-2, &error, &l1, &levels);
  const double allowed = std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
  if (!std::isfinite(value) || error > allowed) {
    throw NumericError("half-line quadrature did not converge: error estimate " +
                       std::to_string(error) + " exceeds " + std::to_string(allowed));
  }
  return {value, error};
}

}  // namespace brayiso
