#include "koblab/domain.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace koblab {

std::string regularity_name(Regularity r) {
  switch (r) {
    case Regularity::C11: return "C11";
    case Regularity::C2: return "C2";
    case Regularity::C3: return "C3";
    case Regularity::RealAnalytic: return "analytic";
  }
  return "C2";
}

Regularity regularity_from_name(const std::string& s) {
  if (s == "C11" || s == "C1,1" || s == "c11") return Regularity::C11;
  if (s == "C2" || s == "c2") return Regularity::C2;
  if (s == "C3" || s == "c3") return Regularity::C3;
  if (s == "analytic" || s == "real-analytic") return Regularity::RealAnalytic;
  throw std::invalid_argument("unknown regularity tag: " + s);
}

DomainValidation validate_domain(DomainSpec& d, int samples, uint64_t seed) {
  DomainValidation v;
  if (d.dim < 1) throw std::invalid_argument("domain dimension must be >= 1");
  if (d.enclosing_radius <= 0) throw std::invalid_argument("enclosing radius must be > 0");
  if (d.witness_point.size() != d.dim)
    throw std::invalid_argument("witness point has wrong dimension");
  v.witness_value = eval_field(d.field, d.witness_point);
  if (!(v.witness_value < 0) || d.witness_point.norm() >= d.enclosing_radius) {
    v.ok = false;
    v.message = "witness point is not interior";
    return v;
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double gsup = 0.0, hsup = 0.0;
  for (int i = 0; i < samples; ++i) {
    CVector z(d.dim);
    for (int j = 0; j < d.dim; ++j) z[j] = Complex(g(rng), g(rng));
    double r = d.enclosing_radius * std::pow(u(rng), 1.0 / (2 * d.dim));
    if (z.norm() > 0) z *= r / z.norm();
    Jet2 jet = eval_field_hess(d.field, z);
    if (jet.singular) continue;
    gsup = std::max(gsup, jet.g.norm());
    Eigen::SelfAdjointEigenSolver<HessMat> es(jet.h);
    hsup = std::max(hsup, es.eigenvalues().cwiseAbs().maxCoeff());
  }
  v.sampled_gradient_sup = gsup;
  v.sampled_hessian_sup = hsup;
  if (d.gradient_bound <= 0) d.gradient_bound = 1.25 * gsup + 1e-12;
  if (d.hessian_bound <= 0) d.hessian_bound = 1.25 * hsup + 1e-12;
  if (d.gradient_bound < gsup) {
    v.ok = false;
    v.message = "declared gradient bound below sampled sup";
  }
  if (d.tubular_radius <= 0) d.tubular_radius = 0.1 * d.enclosing_radius;
  return v;
}

DomainSpec transform_domain(const DomainSpec& d, const CMatrix& u) {
  DomainSpec out = d;
  CMatrix uinv = u.adjoint();
  out.field = fe::field(d.dim, fe::compose_linear(d.field.root, uinv, CVector::Zero(d.dim)));
  out.witness_point = u * d.witness_point;
  out.name = d.name + "-rotated";
  if (d.exact_signed_distance) {
    auto inner = d.exact_signed_distance;
    out.exact_signed_distance = [inner, uinv](const CVector& z) { return inner(uinv * z); };
  }
  if (d.exact_projection) {
    auto inner = d.exact_projection;
    CMatrix uc = u;
    out.exact_projection = [inner, uinv, uc](const CVector& z) { return uc * inner(uinv * z); };
  }
  // An envelope certificate is tied to the origin frame; the rotated copy
  // recomputes it on demand.
  out.model_envelope.reset();
  return out;
}

DomainSpec make_ball_domain(int n, double radius) {
  DomainSpec d;
  d.name = "ball";
  d.dim = n;
  std::vector<FieldPtr> terms;
  for (int j = 0; j < n; ++j) terms.push_back(fe::abs2(j));
  terms.push_back(fe::constant(-radius * radius));
  d.field = fe::field(n, fe::sum(std::move(terms)));
  d.enclosing_radius = radius;
  d.gradient_bound = 2.0 * radius;
  d.hessian_bound = 2.0;
  d.regularity = Regularity::RealAnalytic;
  d.pseudoconvex_known = true;
  d.witness_point = CVector::Zero(n);
  d.tubular_radius = 0.9 * radius;
  d.exact_signed_distance = [radius](const CVector& z) { return z.norm() - radius; };
  d.exact_projection = [radius, n](const CVector& z) -> CVector {
    double r = z.norm();
    if (r < 1e-14) return radius * unit_vector(n, 0);
    return (radius / r) * z;
  };
  return d;
}

DomainSpec make_disc_domain(double radius) {
  DomainSpec d = make_ball_domain(1, radius);
  d.name = "disc";
  return d;
}

DomainSpec make_halfspace_domain(int n, double enclosing_radius) {
  DomainSpec d;
  d.name = "halfspace";
  d.dim = n;
  d.field = fe::field(n, fe::re(n - 1));
  d.enclosing_radius = enclosing_radius;
  d.gradient_bound = 1.0;
  d.hessian_bound = 1e-12;
  d.regularity = Regularity::RealAnalytic;
  d.pseudoconvex_known = true;
  CVector w = CVector::Zero(n);
  w[n - 1] = Complex(-0.25 * enclosing_radius, 0.0);
  d.witness_point = w;
  d.tubular_radius = 0.4 * enclosing_radius;
  d.exact_signed_distance = [enclosing_radius, n](const CVector& z) {
    return std::max(z[n - 1].real(), z.norm() - enclosing_radius);
  };
  d.exact_projection = [n](const CVector& z) {
    CVector p = z;
    p[n - 1] = Complex(0.0, z[n - 1].imag());
    return p;
  };
  // The flat boundary satisfies the envelope with any positive slope.
  d.model_envelope = DomainSpec::ModelEnvelope{2.0, 0.25, 0.0, enclosing_radius};
  return d;
}

DomainSpec make_saddle_domain(double b2, double enclosing_radius) {
  DomainSpec d;
  d.name = "saddle";
  d.dim = 2;
  std::vector<FieldPtr> terms = {fe::re(1), fe::scale(-1.0, fe::abs2(0))};
  if (b2 != 0.0) terms.push_back(fe::scale(b2, fe::abs2(1)));
  d.field = fe::field(2, fe::sum(std::move(terms)));
  d.enclosing_radius = enclosing_radius;
  d.regularity = Regularity::RealAnalytic;
  d.pseudoconvex_known = false;
  CVector w(2);
  w << Complex(0, 0), Complex(-0.2, 0);
  d.witness_point = w;
  d.tubular_radius = 0.25;
  return d;
}

DomainSpec make_quartic_domain(double enclosing_radius) {
  DomainSpec d;
  d.name = "quartic";
  d.dim = 2;
  d.field = fe::field(2, fe::sum({fe::re(1), fe::absp(0, 4.0)}));
  d.enclosing_radius = enclosing_radius;
  d.regularity = Regularity::RealAnalytic;
  d.pseudoconvex_known = true;
  CVector w(2);
  w << Complex(0, 0), Complex(-0.2, 0);
  d.witness_point = w;
  d.tubular_radius = 0.25;
  return d;
}

DomainSpec make_model_domain(int n, double m, double a, double b, double enclosing_radius) {
  if (n < 2) throw std::invalid_argument("model domain needs n >= 2");
  DomainSpec d;
  d.name = "model-m" + std::to_string(static_cast<int>(m));
  d.dim = n;
  std::vector<FieldPtr> terms = {fe::re(n - 1), fe::scale(-a, fe::absp(0, m))};
  if (b != 0.0) {
    for (int j = 1; j < n; ++j) terms.push_back(fe::scale(b, fe::absp(j, m)));
    terms.push_back(fe::scale(b, fe::prod({fe::absp(n - 1, 1.0), fe::norm()})));
  }
  d.field = fe::field(n, fe::sum(std::move(terms)));
  d.enclosing_radius = enclosing_radius;
  d.regularity = Regularity::C2;  // the |z_n||z| term is only Lipschitz-smooth off the axes
  d.pseudoconvex_known = false;
  CVector w = CVector::Zero(n);
  w[n - 1] = Complex(-0.05 * enclosing_radius, 0.0);
  d.witness_point = w;
  d.tubular_radius = 0.2 * enclosing_radius;
  // r < 0 gives Re z_n < a|z_1|^m - b(...) <= a(|z_hat|^m + |z_n||z|): the
  // envelope holds on the whole enclosing ball with the defining slope.
  d.model_envelope = DomainSpec::ModelEnvelope{m, a, b, enclosing_radius};
  return d;
}

}  // namespace koblab
