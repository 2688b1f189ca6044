#include "mixeig/exact.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "mixeig/reference_values.hpp"

namespace mixeig {

ExactSolution ExactSolution::negated() const {
  ExactSolution out = *this;
  out.u = [f = u](const Eigen::Vector2d& x) { return -f(x); };
  out.sigma = [f = sigma](const Eigen::Vector2d& x) -> Eigen::Vector2d { return -f(x); };
  out.laplacian = [f = laplacian](const Eigen::Vector2d& x) { return -f(x); };
  return out;
}

ExactSolution square_mode(double length, int p, int q) {
  if (!(length > 0.0) || p < 1 || q < 1) throw std::invalid_argument("square_mode: bad parameters");
  const double a = p * std::numbers::pi / length;
  const double b = q * std::numbers::pi / length;
  const double c = 2.0 / length;
  ExactSolution s;
  s.lambda = a * a + b * b;
  s.u = [=](const Eigen::Vector2d& x) { return c * std::sin(a * x.x()) * std::sin(b * x.y()); };
  s.sigma = [=](const Eigen::Vector2d& x) -> Eigen::Vector2d {
    return {c * a * std::cos(a * x.x()) * std::sin(b * x.y()),
            c * b * std::sin(a * x.x()) * std::cos(b * x.y())};
  };
  s.laplacian = [=](const Eigen::Vector2d& x) {
    return -(a * a + b * b) * c * std::sin(a * x.x()) * std::sin(b * x.y());
  };
  return s;
}

std::optional<ExactSolution> exact_eigenpair(const Domain& domain, int index) {
  if (domain.kind != DomainKind::Square || index < 1) return std::nullopt;
  struct Mode {
    int p, q;
  };
  const int limit = index + 2;
  std::vector<Mode> modes;
  for (int p = 1; p <= limit; ++p) {
    for (int q = 1; q <= limit; ++q) modes.push_back({p, q});
  }
  std::stable_sort(modes.begin(), modes.end(), [](const Mode& l, const Mode& r) {
    return l.p * l.p + l.q * l.q < r.p * r.p + r.q * r.q;
  });
  const Mode m = modes[index - 1];
  const int value = m.p * m.p + m.q * m.q;
  const auto count = std::count_if(modes.begin(), modes.end(), [value](const Mode& x) {
    return x.p * x.p + x.q * x.q == value;
  });
  if (count != 1) return std::nullopt;
  return square_mode(domain.length, m.p, m.q);
}

std::optional<double> reference_eigenvalue(const Domain& domain, int index) {
  if (auto exact = exact_eigenpair(domain, index)) return exact->lambda;
  if (domain.kind == DomainKind::LShape && index == 1) return reference::kLShapeLambda1;
  return std::nullopt;
}

}  // namespace mixeig
