#pragma once

#include <map>
#include <string>

#include "koblab/disc.hpp"
#include "koblab/envelope.hpp"

namespace koblab {

struct UpperBound {
  bool ok = false;
  std::string error;
  double value = std::numeric_limits<double>::infinity();
  AnalyticDisc witness;
  double margin = 0.0;
  // Where the bound applies; for the witness-disc routes the point and
  // direction are produced by the construction.
  CVector query_point;
  CVector query_direction;
  std::map<std::string, double> diag;
};

struct OptimizeOptions {
  int degree = 2;
  int effort = 2;           // coefficient pattern-search passes; 0 = mu search only
  double mu_rel_tol = 1e-4; // relative resolution of the radius line search
};

// Direct attack on the defining infimum: maximize mu over certified discs
// Phi(zeta) = z + mu zeta X/|X| + higher order; returns |X|/mu. The trivial
// distance disc is always feasible, so the value never exceeds |X|/d(z).
UpperBound disc_upper_bound_optimize(const DiscDomain& dom, const CVector& z, const CVector& x,
                                     const OptimizeOptions& opts = {});

// Witness family for domains in the model normal form
// Re z_n - A|z_1|^m + B (sum |z_j|^m + |z_n||z|) < 0: a quadratic-in-zeta disc
// with containment certified by a one-dimensional radial envelope.
UpperBound disc_upper_bound_model(const DomainSpec& model, const CVector& z, const CVector& x,
                                  double cone_k = 0.9);

// Non-pseudoconvex witness: at a boundary point whose restricted Levi form
// has least eigenvalue -2a < 0, a flat disc tilted into the concave direction
// certifies F(p_delta, X_delta) <= C delta^{-1/2}.
UpperBound disc_upper_bound_nonpsc(const DomainSpec& d, const CVector& p0, double delta,
                                   double levi_tol = 1e-8);

}  // namespace koblab
