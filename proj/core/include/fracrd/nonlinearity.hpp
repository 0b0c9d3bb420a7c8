#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "fracrd/errors.hpp"
#include "fracrd/field.hpp"

namespace fracrd {

/// Scalar reaction nonlinearity with its first two derivatives.
/// Every builtin satisfies f(0) = 0 and f'(0) = 0, which the pointwise
/// reconstruction relies on to separate the two coefficients.
struct Nonlinearity {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> ddf;
  /// Exponent kappa in |f''(u)| <= c + C|u|^kappa; informational only.
  double growth_exponent = 0.0;

  Field apply(const Field& u) const {
    return map(u, [this](double x) { return f(x); });
  }
  Field apply_df(const Field& u) const {
    return map(u, [this](double x) { return df(x); });
  }
};

/// Menu used throughout the experiments:
///   f1: u^2    f2: u^3/4    f3: 4 u^2    f4: u^3
inline Nonlinearity builtin_nonlinearity(std::string_view name) {
  if (name == "f1")
    return {"f1", [](double u) { return u * u; }, [](double u) { return 2.0 * u; },
            [](double) { return 2.0; }, 0.0};
  if (name == "f2")
    return {"f2", [](double u) { return 0.25 * u * u * u; },
            [](double u) { return 0.75 * u * u; }, [](double u) { return 1.5 * u; }, 1.0};
  if (name == "f3")
    return {"f3", [](double u) { return 4.0 * u * u; }, [](double u) { return 8.0 * u; },
            [](double) { return 8.0; }, 0.0};
  if (name == "f4")
    return {"f4", [](double u) { return u * u * u; }, [](double u) { return 3.0 * u * u; },
            [](double u) { return 6.0 * u; }, 1.0};
  throw ConfigError("unknown nonlinearity: " + std::string(name));
}

}  // namespace fracrd
