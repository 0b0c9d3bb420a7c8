#pragma once

#include "fracrd/field.hpp"

namespace fracrd {

enum class NormOrder { L2, H1, H2 };

/// Discrete Sobolev norms: trapezoid L2, first differences for the H1 part,
/// second differences (one-sided at the endpoints) for the H2 part.
double sobolev_norm(const Field& u, NormOrder order);

inline double l2_norm(const Field& u) { return sobolev_norm(u, NormOrder::L2); }

/// sqrt(||a||_L2^2 + ||b||_L2^2); the norm used for coefficient pairs.
double combined_l2(const Field& a, const Field& b);

}  // namespace fracrd
