#pragma once

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

namespace ibcsym {

// Lagrange weights w_i with p(0) = sum_i w_i y_i, resp. p'(0) = sum_i d_i y_i,
// for the interpolating polynomial through nodes x_i (distinct, nonzero).
struct ZeroWeights {
  std::vector<double> value;
  std::vector<double> slope;
};

inline ZeroWeights lagrange_weights_at_zero(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("extrapolation needs at least two nodes");
  ZeroWeights w{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t i = 0; i < n; ++i) {
    double li = 1.0;
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == i) continue;
      if (x[k] == x[i]) throw std::invalid_argument("extrapolation nodes must be distinct");
      li *= (0.0 - x[k]) / (x[i] - x[k]);
      s += -1.0 / x[k];
    }
    w.value[i] = li;
    w.slope[i] = li * s;
  }
  return w;
}

template <class T>
T extrapolate_to_zero(std::span<const double> x, std::span<const T> y) {
  const auto w = lagrange_weights_at_zero(x);
  T acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += w.value[i] * y[i];
  return acc;
}

template <class T>
T slope_at_zero(std::span<const double> x, std::span<const T> y) {
  const auto w = lagrange_weights_at_zero(x);
  T acc{};
  for (std::size_t i = 0; i < x.size(); ++i) acc += w.slope[i] * y[i];
  return acc;
}

// r_k = r0 / 2^k, k = 0..count-1.
inline std::vector<double> geometric_radii(double r0, std::size_t count) {
  std::vector<double> r(count);
  for (std::size_t k = 0; k < count; ++k) r[k] = r0 / static_cast<double>(1ULL << k);
  return r;
}

}  // namespace ibcsym
