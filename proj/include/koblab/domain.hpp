#pragma once

#include <functional>
#include <optional>
#include <string>

#include "koblab/scalar_field.hpp"

namespace koblab {

enum class Regularity { C11, C2, C3, RealAnalytic };

inline bool at_least(Regularity r, Regularity want) {
  return static_cast<int>(r) >= static_cast<int>(want);
}

std::string regularity_name(Regularity r);
Regularity regularity_from_name(const std::string& s);

// A bounded domain { z in B(0, enclosing_radius) : r(z) < 0 }.
// gradient_bound / hessian_bound are validated sups of |grad r| and
// ||Hess r||_2 over the enclosing ball (validate_domain checks them against a
// sampling grid).
struct DomainSpec {
  std::string name = "domain";
  int dim = 0;
  ScalarFieldExpr field;
  double enclosing_radius = 0.0;
  double gradient_bound = 0.0;
  double hessian_bound = 0.0;
  Regularity regularity = Regularity::C2;
  bool pseudoconvex_known = false;
  CVector witness_point;
  double tubular_radius = 0.0;

  // Closed-form geometry for built-in model domains (full boundary of the
  // clipped domain, valid for interior queries).
  std::function<double(const CVector&)> exact_signed_distance;
  std::function<CVector(const CVector&)> exact_projection;

  // Algebraic envelope certificate at the origin frame: r < 0 implies
  // Re z_n < A (|z_hat|^m + |z_n||z|) on B(0, R). Set by model factories.
  struct ModelEnvelope {
    double m = 2.0;
    double a = 1.0;  // slope of the good term
    double b = 0.0;  // coefficient of the remaining modulus terms
    double r = 1.0;
  };
  std::optional<ModelEnvelope> model_envelope;
};

struct DomainValidation {
  bool ok = true;
  double witness_value = 0.0;
  double sampled_gradient_sup = 0.0;
  double sampled_hessian_sup = 0.0;
  std::string message;
};

// Checks the witness point, fills gradient/hessian bounds from a sampling
// grid when they are zero, and verifies declared bounds otherwise.
DomainValidation validate_domain(DomainSpec& d, int samples = 4096, uint64_t seed = 1);

// Image of the domain under a unitary map z -> U z (same geometry, rotated).
DomainSpec transform_domain(const DomainSpec& d, const CMatrix& u);

// ---- built-in factories ---------------------------------------------------

// { |z| < radius }
DomainSpec make_ball_domain(int n, double radius);

// { Re z_n < 0 } clipped to B(0, enclosing_radius)
DomainSpec make_halfspace_domain(int n, double enclosing_radius);

// { Re z_2 - |z_1|^2 + b2 |z_2|^2 < 0 } clipped; b2 = 0 gives the parabolic
// saddle with restricted Levi eigenvalue -1 at the origin.
DomainSpec make_saddle_domain(double b2, double enclosing_radius);

// { Re z_2 + |z_1|^4 < 0 } clipped; pseudoconvex with a flat point at 0.
DomainSpec make_quartic_domain(double enclosing_radius);

// { Re z_n - A|z_1|^m + B (sum_{j>=2} |z_j|^m + |z_n||z|) < 0 } clipped to
// B(0, enclosing_radius); carries its algebraic envelope certificate.
DomainSpec make_model_domain(int n, double m, double a, double b, double enclosing_radius);

// n = 1 unit-disc domain { |z| < radius }.
DomainSpec make_disc_domain(double radius);

}  // namespace koblab
