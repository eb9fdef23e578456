#include "koblab/envelope.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace koblab {

namespace {

Complex quad_form(const CMatrix& q, const CVector& w) {
  return (w.transpose() * q * w)(0, 0);
}

}  // namespace

LocalFrame LocalFrame::plain(const CVector& base, const CMatrix& v, double scale) {
  LocalFrame f;
  f.base = base;
  f.rotation = v;
  f.field_scale = scale;
  f.has_shear = false;
  const int n = static_cast<int>(base.size());
  f.shear = CMatrix::Zero(n, n);
  f.post = CMatrix::Identity(n, n);
  return f;
}

CVector LocalFrame::world_to_frame(const CVector& z) const {
  CVector w = rotation.adjoint() * (z - base);
  if (has_shear) {
    const int n = static_cast<int>(w.size());
    w[n - 1] += quad_form(shear, w);
  }
  return post * w;
}

CMatrix LocalFrame::frame_jacobian(const CVector& z) const {
  const int n = static_cast<int>(z.size());
  CVector w = rotation.adjoint() * (z - base);
  CMatrix ds = CMatrix::Identity(n, n);
  if (has_shear) {
    CVector qw = 2.0 * (shear * w);
    for (int j = 0; j < n; ++j) ds(n - 1, j) += qw[j];
  }
  return post * ds * rotation.adjoint();
}

CVector LocalFrame::frame_to_world(const CVector& v) const {
  const int n = static_cast<int>(v.size());
  CVector u = post.adjoint() * v;
  CVector w = u;
  if (has_shear) {
    // solve w_n + Q((w_hat, w_n)) = u_n in the last coordinate (scalar Newton)
    Complex t = u[n - 1];
    for (int it = 0; it < 60; ++it) {
      w[n - 1] = t;
      Complex f = t + quad_form(shear, w) - u[n - 1];
      Complex fp = 1.0 + 2.0 * (shear * w)[n - 1];
      Complex step = f / fp;
      t -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(t))) break;
    }
    w[n - 1] = t;
  }
  return base + rotation * w;
}

namespace {

ScalarFieldExpr framed_field(const DomainSpec& d, const LocalFrame& f) {
  // scaled field in the rotated (unsheared) coordinates w
  return fe::field(d.dim, fe::scale(f.field_scale,
                                    fe::compose_linear(d.field.root, f.rotation, f.base)));
}

CVector sample_in_ball(int n, double rho, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CVector w(n);
  for (int j = 0; j < n; ++j) w[j] = Complex(g(rng), g(rng));
  double r = rho * std::pow(u(rng), 1.0 / (2 * n));
  double nw = w.norm();
  if (nw > 0) w *= r / nw;
  return w;
}

std::string point_text(const CVector& w) {
  std::ostringstream os;
  os << "(";
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    if (j) os << ", ";
    os << w[j].real() << (w[j].imag() < 0 ? "-" : "+") << std::abs(w[j].imag()) << "i";
  }
  os << ")";
  return os.str();
}

}  // namespace

EnvelopeParams envelope_from_model(const DomainSpec& d) {
  if (!d.model_envelope) throw EnvelopeError("domain carries no model envelope certificate");
  EnvelopeParams e;
  e.m = d.model_envelope->m;
  e.a = d.model_envelope->a;
  e.r_model = d.model_envelope->r;
  e.frame = LocalFrame::plain(CVector::Zero(d.dim), CMatrix::Identity(d.dim, d.dim), 1.0);
  e.rho_patch = d.model_envelope->r;
  e.from_model_certificate = true;
  e.hat_only = true;  // factories satisfy Re z_n < a |z_1|^m <= a |z_hat|^m outright
  return e;
}

EnvelopeParams envelope_fit(const DomainSpec& d, const CVector& p0, double m,
                            const EnvelopeOptions& opts) {
  if (m != 2.0 && m != 3.0)
    throw EnvelopeError("envelope_fit: only m = 2 and m = 3 routes are implemented");
  double r0 = eval_field(d.field, p0);
  double scale0 = 1.0 + d.gradient_bound;
  if (std::abs(r0) > 1e-8 * scale0) throw EnvelopeError("envelope_fit: point not on the boundary");
  CVector g = wirtinger_gradient(d.field, p0);
  double gn = g.norm();
  if (gn < 1e-10) throw EnvelopeError("envelope_fit: degenerate gradient at the base point");
  const int n = d.dim;

  CMatrix v = unitary_with_last_column(g.conjugate() / gn);
  LocalFrame frame = LocalFrame::plain(p0, v, 1.0 / (2.0 * gn));
  ScalarFieldExpr fw = framed_field(d, frame);

  double rho = opts.patch_radius > 0 ? opts.patch_radius : 0.75 * d.tubular_radius;
  if (rho <= 0) throw EnvelopeError("envelope_fit: no usable patch radius");

  if (m == 3.0 && !at_least(d.regularity, Regularity::C3))
    throw EnvelopeError("envelope_fit: m = 3 requires C3 regularity");

  CVector violation;
  for (int shrink = 0; shrink < 4; ++shrink, rho *= 0.5) {
    std::mt19937_64 rng(opts.seed);

    double a = 0.0;
    double deriv_bound = 0.0;
    LocalFrame cand = frame;
    if (m == 2.0) {
      // Quadratic control: r >= Re w_n - (M/2)|w|^2 on the patch, so the
      // envelope slope M/2 works with headroom.
      double msup = 0.0;
      for (int i = 0; i < 600; ++i) {
        CVector w = sample_in_ball(n, rho, rng);
        Jet2 jet = eval_field_hess(fw, w);
        if (jet.singular) continue;
        Eigen::SelfAdjointEigenSolver<HessMat> es(jet.h);
        msup = std::max(msup, es.eigenvalues().cwiseAbs().maxCoeff());
      }
      deriv_bound = 1.25 * msup;
      a = (1.0 + opts.eta) * 0.5 * deriv_bound + 1e-9;
    } else {
      // Cubic control after the holomorphic shear: the remainder beyond the
      // linear + Levi part is third order; the restricted Levi form must be
      // semi-positive within tolerance.
      LeviData levi = levi_form(fw, CVector::Zero(n));
      if (!levi.restricted_eigenvalues.empty()) {
        double lmin = levi.restricted_eigenvalues.front();
        for (double e : levi.restricted_eigenvalues) lmin = std::min(lmin, e);
        if (lmin < -opts.levi_tolerance)
          throw EnvelopeError("envelope_fit: restricted Levi form is negative at the base point");
      }
      CMatrix qh = holomorphic_hessian(fw, CVector::Zero(n));
      cand.has_shear = true;
      cand.shear = 0.5 * (qh + qh.transpose());
      double tsup = 0.0;
      for (int i = 0; i < 800; ++i) {
        CVector w = sample_in_ball(n, rho, rng);
        double nw = w.norm();
        if (nw < 1e-3 * rho) continue;
        double f = eval_field(fw, w);
        Complex vn = w[n - 1] + quad_form(cand.shear, w);
        double quad = (w.adjoint() * levi.matrix * w)(0, 0).real();
        double gap = std::abs(f - vn.real() - quad);
        tsup = std::max(tsup, gap / (nw * nw * nw));
      }
      deriv_bound = 1.25 * tsup;
      double lnorm = levi.matrix.norm();
      a = (1.0 + opts.eta) * 2.0 *
              std::max(2.0 * deriv_bound, 3.0 * lnorm + 14.0 * deriv_bound * rho) +
          1e-9;
      // the shear must stay an injective perturbation on the patch
      double qnorm = cand.shear.norm();
      if (4.0 * qnorm * rho > 0.5) continue;
    }

    double r_model = (m == 2.0) ? rho : 1.5 * rho;

    // Margin-checked validation grid over the domain patch.
    bool ok = true;
    double worst_gap = -std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 3; ++attempt) {
      worst_gap = -std::numeric_limits<double>::infinity();
      bool failed = false;
      std::mt19937_64 rng2(opts.seed + 17);
      for (int i = 0; i < opts.validation_samples; ++i) {
        CVector w = sample_in_ball(n, rho, rng2);
        if (eval_field(fw, w) >= 0) continue;
        CVector vv = w;
        if (cand.has_shear) vv[n - 1] += quad_form(cand.shear, w);
        double nv = vv.norm();
        if (nv < 1e-6 * rho) continue;
        double hatnorm = vv.head(n - 1).norm();
        double rhs = a * (std::pow(hatnorm, m) + std::abs(vv[n - 1]) * nv);
        double lhs = vv[n - 1].real();
        worst_gap = std::max(worst_gap, lhs - rhs);
        if (lhs >= rhs + 1e-14) {
          failed = true;
          violation = vv;
          break;
        }
      }
      if (!failed) break;
      a *= 2.0;
      if (attempt == 2) ok = false;
    }
    if (!ok) continue;

    EnvelopeParams e;
    e.m = m;
    e.a = a;
    e.r_model = r_model;
    e.frame = cand;
    e.rho_patch = rho;
    e.margin = -worst_gap;
    e.derivative_bound = deriv_bound;
    return e;
  }
  throw EnvelopeError("envelope_fit: no admissible slope on any patch; last violation near " +
                      point_text(violation));
}

}  // namespace koblab
