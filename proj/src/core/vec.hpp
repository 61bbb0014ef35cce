#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "core/error.hpp"

namespace dimapg {

// Flat 64-bit parameter vector. Central policies, per-agent copies and
// gradients are all plain ParamVectors so optimization steps stay simple
// vector arithmetic.
using ParamVector = std::vector<double>;

inline bool all_finite(const ParamVector& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// base + step * direction, elementwise.
inline ParamVector add_scaled(const ParamVector& base,
                              const ParamVector& direction, double step) {
  if (base.size() != direction.size())
    throw DimensionError("add_scaled: length mismatch");
  ParamVector out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i)
    out[i] = base[i] + step * direction[i];
  return out;
}

inline void add_scaled_inplace(ParamVector& acc, const ParamVector& direction,
                               double step) {
  if (acc.size() != direction.size())
    throw DimensionError("add_scaled_inplace: length mismatch");
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += step * direction[i];
}

inline void scale_inplace(ParamVector& v, double s) {
  for (double& x : v) x *= s;
}

inline double l2_norm(const ParamVector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

inline double max_abs_diff(const ParamVector& a, const ParamVector& b) {
  if (a.size() != b.size())
    throw DimensionError("max_abs_diff: length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace dimapg
