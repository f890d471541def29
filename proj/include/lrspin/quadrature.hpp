#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <utility>
#include <vector>

#include "lrspin/errors.hpp"

namespace lrspin {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // sum of per-interval |K15 - G7| estimates
  std::size_t intervals = 0;
};

namespace detail {

struct GaussKronrod15 {
  static constexpr std::array<double, 8> nodes{
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static constexpr std::array<double, 8> kronrod{
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  // Gauss weights for nodes[1], nodes[3], nodes[5], nodes[7].
  static constexpr std::array<double, 4> gauss{
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
};

struct Segment {
  double a, b, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gk15(const F& f, double a, double b) {
  using R = GaussKronrod15;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double k = fc * R::kronrod[7];
  double g = fc * R::gauss[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * R::nodes[i];
    const double sum = f(center - dx) + f(center + dx);
    k += R::kronrod[i] * sum;
    if (i % 2 == 1) g += R::gauss[i / 2] * sum;
  }
  return {a, b, k * half, std::abs((k - g) * half)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) with an absolute error target.
// Throws QuadratureError carrying the achieved estimate if max_intervals is
// exhausted first.
template <class F>
QuadratureResult integrate(const F& f, double a, double b, double tol,
                           std::size_t max_intervals = 4096) {
  if (!(tol > 0.0)) throw InvalidArgument("quadrature tolerance must be positive");
  if (a == b) return {0.0, 0.0, 0};
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::gk15(f, a, b));
  double total = heap.top().value;
  double error = heap.top().error;
  while (error > tol) {
    if (heap.size() >= max_intervals) throw QuadratureError(error, tol);
    const detail::Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const detail::Segment left = detail::gk15(f, worst.a, mid);
    const detail::Segment right = detail::gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  QuadratureResult out{0.0, 0.0, heap.size()};
  while (!heap.empty()) {
    out.value += heap.top().value;
    out.error += heap.top().error;
    heap.pop();
  }
  out.value *= sign;
  if (!std::isfinite(out.value)) throw QuadratureError(out.error, tol);
  return out;
}

}  // namespace lrspin
