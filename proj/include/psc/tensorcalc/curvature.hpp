#pragma once

#include "psc/tensorcalc/tensor.hpp"

namespace psc {

struct CurvatureBundle {
  TensorField christoffel;   // (1,2): Γ^a_{bc}
  TensorField riemann;       // (1,3): R^a_{bcd}
  TensorField ricci;         // symmetric (0,2)
  Expr scalar;               // R
  TensorField einstein;      // symmetric (2,0): E^{ab}
  TensorField volume;        // n-form √|g| dx^1∧…∧dx^n
  Expr det;                  // det g
  Expr sqrt_abs_det;         // √(detSign·det g)
  TensorField inverse_metric;  // symmetric (2,0)
};

/// Levi-Civita curvature of a metric. det_sign is +1 or -1 and declares the
/// sign of det g. Throws std::domain_error for a singular metric.
CurvatureBundle curvature_suite(const TensorField& g, int det_sign);

/// ∇_a E^{ab} for each b; all zero by the contracted Bianchi identity.
std::vector<Expr> einstein_divergence(const CurvatureBundle& c);

}  // namespace psc
