#include "koblab/canonical.hpp"

#include <cmath>
#include <stdexcept>

namespace koblab {

CanonicalDomain CanonicalDomain::unit_disc() {
  CanonicalDomain d;
  d.kind = Kind::UnitDisc;
  return d;
}

CanonicalDomain CanonicalDomain::right_half_plane() {
  CanonicalDomain d;
  d.kind = Kind::RightHalfPlane;
  return d;
}

CanonicalDomain CanonicalDomain::ball(double r) {
  if (r <= 0) throw std::invalid_argument("ball radius must be > 0");
  CanonicalDomain d;
  d.kind = Kind::Ball;
  d.radius = r;
  return d;
}

CanonicalDomain CanonicalDomain::polydisc(std::vector<double> radii) {
  for (double r : radii)
    if (r <= 0) throw std::invalid_argument("polydisc radii must be > 0");
  CanonicalDomain d;
  d.kind = Kind::Polydisc;
  d.radii = std::move(radii);
  return d;
}

CanonicalDomain CanonicalDomain::slit_complement(Complex a, Complex b) {
  if (std::abs(a - b) <= 0) throw std::invalid_argument("slit endpoints must be distinct");
  CanonicalDomain d;
  d.kind = Kind::SlitComplement;
  d.slit_a = a;
  d.slit_b = b;
  return d;
}

CanonicalDomain CanonicalDomain::ray_complement(double base) {
  CanonicalDomain d;
  d.kind = Kind::RayComplement;
  d.ray_base = base;
  return d;
}

int CanonicalDomain::dim() const {
  switch (kind) {
    case Kind::Ball: return -1;  // any
    case Kind::Polydisc: return static_cast<int>(radii.size());
    default: return 1;
  }
}

double poincare_distance(Complex a, Complex b) {
  if (std::abs(a) >= 1.0 || std::abs(b) >= 1.0)
    throw std::invalid_argument("poincare_distance: arguments must lie in the open unit disc");
  Complex m = (a - b) / (1.0 - std::conj(b) * a);
  return std::atanh(std::abs(m));
}

double ball_kobayashi_distance(double radius, const CVector& z, const CVector& w) {
  double r2 = radius * radius;
  if (z.norm() >= radius || w.norm() >= radius)
    throw std::invalid_argument("ball_kobayashi_distance: points must be interior");
  double num = (r2 - z.squaredNorm()) * (r2 - w.squaredNorm());
  double den = std::norm(Complex(r2, 0) - herm(z, w));
  double g = num / den;
  g = std::clamp(g, 0.0, 1.0);
  return std::atanh(std::sqrt(1.0 - g));
}

double dist_to_segment(Complex z, Complex a, Complex b) {
  Complex ab = b - a;
  double len2 = std::norm(ab);
  if (len2 < 1e-30) return std::abs(z - a);
  double t = std::clamp(((z - a) * std::conj(ab)).real() / len2, 0.0, 1.0);
  return std::abs(z - (a + t * ab));
}

double dist_to_ray(Complex z, double base) {
  // removed set { Re w >= base, Im w = 0 }
  if (z.real() <= base) return std::abs(z - Complex(base, 0));
  return std::abs(z.imag());
}

namespace {

double disc_metric(double radius, Complex z, Complex x) {
  double d = radius * radius - std::norm(z);
  if (d <= 0) throw std::invalid_argument("kobayashi: point not interior to the disc");
  return std::abs(x) * radius / d;
}

}  // namespace

double slit_complement_lower_bound(Complex z, Complex x, Complex z0, Complex z1) {
  double eps0 = std::abs(z1 - z0);
  if (eps0 <= 0) throw std::invalid_argument("slit endpoints must be distinct");
  if (dist_to_segment(z, z0, z1) < 1e-14)
    throw std::invalid_argument("slit_complement_lower_bound: point on the deleted segment");
  // Rigid motion sending z0 -> 0, z1 -> -eps0.
  Complex u = -eps0 / (z1 - z0);
  Complex zeta = (z - z0) * u;
  // f(zeta) = (zeta / (zeta + eps0))^{1/2}, principal branch: the argument is
  // on the cut exactly when zeta lies on the deleted segment [-eps0, 0].
  Complex w = zeta / (zeta + eps0);
  Complex f = std::sqrt(w);
  Complex fp = 0.5 / f * (eps0 / ((zeta + eps0) * (zeta + eps0)));
  double re = f.real();
  if (re <= 0) throw std::domain_error("slit map left the right half-plane (point on cut?)");
  return std::abs(fp) * std::abs(x) / (2.0 * re);
}

double ray_complement_lower_bound(Complex z, Complex x, double base) {
  Complex arg = Complex(base, 0) - z;
  if (arg.real() <= 0 && std::abs(arg.imag()) < 1e-14)
    throw std::invalid_argument("ray_complement_lower_bound: point on the removed ray");
  Complex g = std::sqrt(arg);
  Complex gp = -0.5 / g;
  double re = g.real();
  if (re <= 0) throw std::domain_error("ray map left the right half-plane");
  return std::abs(gp) * std::abs(x) / (2.0 * re);
}

MetricValue kobayashi_canonical(const CanonicalDomain& dom, const CVector& z, const CVector& x) {
  using K = CanonicalDomain::Kind;
  MetricValue out;
  switch (dom.kind) {
    case K::UnitDisc: {
      out.value = disc_metric(1.0, z[0], x[0]);
      out.lower = out.upper = out.value;
      return out;
    }
    case K::RightHalfPlane: {
      double re = z[0].real();
      if (re <= 0) throw std::invalid_argument("kobayashi: point not in the right half-plane");
      out.value = std::abs(x[0]) / (2.0 * re);
      out.lower = out.upper = out.value;
      return out;
    }
    case K::Ball: {
      double r2 = dom.radius * dom.radius;
      double d = r2 - z.squaredNorm();
      if (d <= 0) throw std::invalid_argument("kobayashi: point not interior to the ball");
      double a = x.squaredNorm() / d;
      double b = std::norm(herm(x, z)) / (d * d);
      out.value = std::sqrt(a + b);
      out.lower = out.upper = out.value;
      return out;
    }
    case K::Polydisc: {
      if (z.size() != static_cast<Eigen::Index>(dom.radii.size()))
        throw std::invalid_argument("kobayashi: polydisc dimension mismatch");
      double best = 0.0;
      for (Eigen::Index j = 0; j < z.size(); ++j)
        best = std::max(best, disc_metric(dom.radii[j], z[j], x[j]));
      out.value = best;
      out.lower = out.upper = best;
      return out;
    }
    case K::SlitComplement: {
      out.exact = false;
      out.lower = slit_complement_lower_bound(z[0], x[0], dom.slit_a, dom.slit_b);
      out.upper = std::abs(x[0]) / dist_to_segment(z[0], dom.slit_a, dom.slit_b);
      out.value = out.lower;
      return out;
    }
    case K::RayComplement: {
      out.exact = false;
      out.lower = ray_complement_lower_bound(z[0], x[0], dom.ray_base);
      out.upper = std::abs(x[0]) / dist_to_ray(z[0], dom.ray_base);
      out.value = out.lower;
      return out;
    }
  }
  return out;
}

double contraction_transfer(const HoloMapSpec& h, const CanonicalDomain& target,
                            const CVector& z, const CVector& x) {
  CVector w = map_eval(h, z);
  CVector dx = map_jacobian(h, z) * x;
  MetricValue m = kobayashi_canonical(target, w, dx);
  return m.exact ? m.value : m.lower;
}

LocalizationResult localization_factor(const DomainSpec& d, const CVector& z,
                                       const CVector& center, double rho) {
  LocalizationResult out;
  if (rho <= 0) throw std::invalid_argument("localization_factor: patch radius must be > 0");
  if ((z - center).norm() >= rho)
    throw std::invalid_argument("localization_factor: point not inside the patch");
  double r = d.enclosing_radius;
  if (z.norm() >= r) throw std::invalid_argument("localization_factor: point outside enclosing ball");

  double r2 = r * r;
  double cd = std::abs(center.norm() - rho);
  double tmin = cd * cd;
  if (rho >= center.norm() + r || tmin >= r2) {
    // The patch sphere never meets the enclosing ball, so nothing of the
    // domain is removed and the factor is exactly 1.
    out.usable = true;
    out.lhat = std::numeric_limits<double>::infinity();
    out.factor = 1.0;
    out.tanh_factor = 1.0;
    return out;
  }

  // lhat = min over the patch sphere of the enclosing-ball distance, relaxed
  // over |u|^2 and <u, z> separately (each extremized over the sphere), which
  // can only lower the value.
  double den = std::abs(Complex(r2, 0) - herm(center, z)) - rho * z.norm();
  if (den <= 0) return out;  // patch sphere reaches z's Moebius horizon: unusable
  double g = (r2 - z.squaredNorm()) * (r2 - tmin) / (den * den);
  if (g >= 1.0) return out;
  if (g <= 0.0) g = 0.0;
  double lhat = std::atanh(std::sqrt(1.0 - g));
  if (!(lhat > 0.0)) return out;
  out.usable = true;
  out.lhat = lhat;
  // coth via expm1 keeps small lhat well-conditioned.
  out.factor = 1.0 + 2.0 / std::expm1(2.0 * lhat);
  out.tanh_factor = 1.0 / out.factor;
  return out;
}

}  // namespace koblab
