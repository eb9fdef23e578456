#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "koblab/domain.hpp"

namespace koblab {

// Wirtinger gradient (dr/dz_j)_j with d/dz = (d/dx - i d/dy)/2.
CVector wirtinger_gradient(const ScalarFieldExpr& f, const CVector& z);

// Holomorphic Hessian (d^2 r / dz_j dz_k), the part removed by a quadratic
// shear in the normal coordinate.
CMatrix holomorphic_hessian(const ScalarFieldExpr& f, const CVector& z);

struct LeviData {
  CMatrix matrix;                             // d^2 r / dz_j dz_kbar, Hermitian
  CVector gradient;                           // Wirtinger gradient
  std::vector<double> restricted_eigenvalues; // Levi form on the complex tangent space
  bool gradient_degenerate = false;
};

LeviData levi_form(const ScalarFieldExpr& f, const CVector& z);

struct ProjectionError : std::runtime_error {
  explicit ProjectionError(const std::string& what, double residual)
      : std::runtime_error(what), best_residual(residual) {}
  double best_residual = 0.0;
};

struct BoundaryPoint {
  CVector point;
  CVector normal;   // unit outward normal, complex representation (nu_x + i nu_y)
  RVector normal_r; // same vector, interleaved real components
};

// Nearest boundary point of { r = 0 } from an interior z, by damped Newton on
// the Lagrange system of min |w - z|^2 s.t. r(w) = 0.
BoundaryPoint boundary_projection(const DomainSpec& d, const CVector& z);

// Signed Euclidean distance to the boundary of the clipped domain: negative
// inside, positive outside.
double signed_distance(const DomainSpec& d, const CVector& z);

// Conservative lower bound for the distance to the boundary from an interior
// point: |r(z)| / gradient_bound, clipped against the enclosing sphere.
double distance_lower_bound(const DomainSpec& d, const CVector& z);

struct NormalFrame {
  CVector n_complex;   // N_p = 2 sqrt2 sum (d delta / d zbar_j) d/dz_j, as coefficients
  RVector n_real;      // n_p = sqrt2 Re N_p, interleaved real components
  CVector dist_gradient; // (d delta / d z_j)_j
};

// Boundary-normal frame built from the signed-distance gradient at p.
NormalFrame normal_vectors(const DomainSpec& d, const CVector& p);

// Lambda(k) membership: -Re z_n > k |z| strictly.
bool in_normal_cone(const CVector& z, double k);

}  // namespace koblab
