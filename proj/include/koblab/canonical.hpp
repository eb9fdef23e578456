#pragma once

#include <vector>

#include "koblab/domain.hpp"
#include "koblab/holomap.hpp"

namespace koblab {

// Model domains with closed-form (or sandwiched) Kobayashi data.
struct CanonicalDomain {
  enum class Kind { UnitDisc, RightHalfPlane, Ball, Polydisc, SlitComplement, RayComplement };
  Kind kind = Kind::UnitDisc;
  double radius = 1.0;          // Ball
  std::vector<double> radii;    // Polydisc
  Complex slit_a, slit_b;       // SlitComplement: removed segment endpoints
  double ray_base = 0.0;        // RayComplement: removed { Re w >= base, Im w = 0 }

  static CanonicalDomain unit_disc();
  static CanonicalDomain right_half_plane();
  static CanonicalDomain ball(double r);
  static CanonicalDomain polydisc(std::vector<double> radii);
  static CanonicalDomain slit_complement(Complex a, Complex b);
  static CanonicalDomain ray_complement(double base);

  int dim() const;
};

struct MetricValue {
  double value = 0.0;  // the metric when exact, else the certified lower bound
  bool exact = true;
  double lower = 0.0;
  double upper = 0.0;
};

// Hyperbolic distance on the unit disc.
double poincare_distance(Complex a, Complex b);

// Kobayashi distance of the ball B(0, R) (Moebius-invariant closed form).
double ball_kobayashi_distance(double radius, const CVector& z, const CVector& w);

double dist_to_segment(Complex z, Complex a, Complex b);
double dist_to_ray(Complex z, double base);

// Infinitesimal Kobayashi metric on a canonical domain.
MetricValue kobayashi_canonical(const CanonicalDomain& dom, const CVector& z, const CVector& x);

// Lower bound for any domain avoiding the segment [z0, z1]: pullback of the
// half-plane metric through the square-root map of the slit complement.
double slit_complement_lower_bound(Complex z, Complex x, Complex z0, Complex z1);

// Same for the removed ray { Re w >= base, Im w = 0 } (the infinite-slit limit).
double ray_complement_lower_bound(Complex z, Complex x, double base);

// Certified lower bound for the source metric via a holomorphic map into a
// canonical target: F_source(z, X) >= F_target(h(z), h'(z) X).
double contraction_transfer(const HoloMapSpec& h, const CanonicalDomain& target,
                            const CVector& z, const CVector& x);

struct LocalizationResult {
  bool usable = false;
  double lhat = 0.0;    // certified lower bound for the Lempert distance to the removed part
  double factor = 1.0;  // coth(lhat): F_patch <= factor * F_domain
  double tanh_factor = 1.0;  // tanh(lhat): F_domain >= tanh_factor * F_patch
};

// Royden localization constant for the patch B(center, rho) inside the domain,
// from the exact ball distance of the enclosing ball (relaxed over the patch
// sphere, so lhat is a certified lower bound).
LocalizationResult localization_factor(const DomainSpec& d, const CVector& z,
                                       const CVector& center, double rho);

}  // namespace koblab
