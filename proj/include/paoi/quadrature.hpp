#pragma once

#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "paoi/error.hpp"

namespace paoi::quadrature {

struct Tolerance {
  double absolute = 1e-9;
  double relative = 1e-12;
  int max_intervals = 4000;
};

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  int intervals = 0;
};

namespace detail {

struct Panel {
  double lo, hi, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel panel(F& f, double lo, double hi) {
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, lo, hi, 0, 0.0, &err);
  return {lo, hi, v, err};
}

}  // namespace detail

// Globally adaptive 7/15-point Gauss–Kronrod on [lo, hi]: the panel with the
// largest error estimate is bisected until the summed estimate is below
// max(absolute, relative·|I|). Throws NumericalError with diagnostics when the
// panel budget runs out first.
template <class F>
Result integrate(F&& f, double lo, double hi, const Tolerance& tol = {}) {
  Result out;
  if (hi == lo) return out;
  std::priority_queue<detail::Panel> heap;
  heap.push(detail::panel(f, lo, hi));
  double value = heap.top().value, error = heap.top().error;
  while (error > std::max(tol.absolute, tol.relative * std::abs(value))) {
    if (static_cast<int>(heap.size()) >= tol.max_intervals || !std::isfinite(value)) {
      std::ostringstream msg;
      msg << "quadrature did not converge on [" << lo << ", " << hi << "]: value=" << value
          << " error_estimate=" << error << " tolerance=" << tol.absolute
          << " panels=" << heap.size() << " worst_panel=[" << heap.top().lo << ", "
          << heap.top().hi << "]";
      throw NumericalError(msg.str());
    }
    const detail::Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const detail::Panel left = detail::panel(f, worst.lo, mid);
    const detail::Panel right = detail::panel(f, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the running updates.
  out.intervals = static_cast<int>(heap.size());
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.error_estimate = error;
  return out;
}

}  // namespace paoi::quadrature
