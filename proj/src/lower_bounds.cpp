#include "koblab/lower_bounds.hpp"

#include <cmath>

namespace koblab {

std::string certificate_name(LowerCertificateKind k) {
  switch (k) {
    case LowerCertificateKind::SlitReduction: return "slit-reduction";
    case LowerCertificateKind::ContractionMap: return "contraction-map";
    case LowerCertificateKind::Localized: return "localized";
  }
  return "unknown";
}

namespace {

struct FrameQuery {
  CVector v;     // framed point
  CVector y;     // framed direction
  double delta;  // -Re v_n
  Complex vn;
};

FrameQuery frame_query(const EnvelopeParams& env, const CVector& z, const CVector& x) {
  FrameQuery q;
  q.v = env.frame.world_to_frame(z);
  q.y = env.frame.frame_jacobian(z) * x;
  q.vn = q.v[q.v.size() - 1];
  q.delta = -q.vn.real();
  return q;
}

LowerBound fail(const std::string& why) {
  LowerBound b;
  b.ok = false;
  b.error = why;
  return b;
}

}  // namespace

LowerBound normal_slice_lower_bound(const EnvelopeParams& env, const CVector& z,
                                    const CVector& x, double cone_k) {
  FrameQuery q = frame_query(env, z, x);
  const double m = env.m, a = env.a, r = env.r_model;
  if (!(q.delta > 0)) return fail("point not on the inner side of the base point");
  if (q.delta >= 1.0) return fail("certificate unavailable at this delta (delta >= 1)");
  if (q.v.norm() > r) return fail("point left the model patch");
  if (!in_normal_cone(q.v, cone_k)) return fail("point outside the approach cone");

  // Restrict a competitor disc to |zeta| <= c delta^{1/m}; by the Cauchy
  // coefficient bounds |Phi - z| <= r |zeta| / (1 - rho) there, and the
  // envelope pushes the rescaled normal coordinate off the ray
  // { Re w >= delta }.
  double c_best = 0.0;
  for (int j = 4; j <= 80; ++j) {
    double c = std::pow(2.0, -0.25 * j);
    double rho = c * std::pow(q.delta, 1.0 / m);
    if (rho > 0.5) continue;
    double r_eff = r / (1.0 - rho);
    bool ok = a * std::pow(std::pow(q.delta, (m - 1.0) / m) / cone_k + r_eff * c, m) <= 0.5;
    if (ok && !env.hat_only)
      ok = a * (1.0 / cone_k + r_eff * c) * std::pow(q.delta, 1.0 / m) <= 0.5;
    if (ok) {
      c_best = c;
      break;
    }
  }
  if (c_best == 0.0) return fail("certificate unavailable at this delta (no admissible c)");

  double dn = dist_to_ray(q.vn, q.delta);
  double yn = std::abs(q.y[q.y.size() - 1]);
  LowerBound b;
  b.ok = true;
  b.kind = LowerCertificateKind::SlitReduction;
  b.value = c_best * std::pow(q.delta, 1.0 / m) * yn / (8.0 * dn);
  b.params = {{"m", m},           {"A", a},   {"R", r},
              {"c", c_best},      {"delta", q.delta}, {"dn", dn},
              {"normal_component", yn}};
  return b;
}

LowerBound tangential_weighted_lower_bound(const EnvelopeParams& env, const CVector& z,
                                           const CVector& x, double direction_cap_k,
                                           double cone_k) {
  FrameQuery q = frame_query(env, z, x);
  const double m = env.m, a = env.a, r = env.r_model;
  const int n = static_cast<int>(q.v.size());
  double yn = std::abs(q.y[n - 1]);
  double ynorm = q.y.norm();
  if (yn < 1e-15) return fail("direction has no normal component");
  if (ynorm > direction_cap_k * yn) return fail("direction outside the K-cone |X| <= K |X_n|");
  if (!env.hat_only)
    return fail("weighted chain needs the hat-form envelope (model domains)");

  // Seed cap on the competitor derivative scale from the plain normal chain.
  LowerBound first = normal_slice_lower_bound(env, z, x, cone_k);
  if (!first.ok) return first;
  double lambda = 1.0 / first.value;

  // Half-plane chain: on |zeta| <= rho the envelope gives
  //   Re Phi_n <= a (|v_hat| + lambda |y_hat| rho + r rho^2/(1-rho))^m =: M,
  // and the half-plane contraction of Phi_n on D(0, rho) yields
  //   lambda |y_n| <= 2 (M + delta) / rho.
  // The implicit inequality is iterated downward from the cap, minimizing
  // over rho each step.
  double vhat = q.v.head(n - 1).norm();
  double yhat = q.y.head(n - 1).norm();
  auto step = [&](double lam) {
    double best = std::numeric_limits<double>::infinity();
    double best_rho = 0.0;
    for (int j = 0; j <= 88; ++j) {
      double rho = 0.8 * std::pow(2.0, -j / 8.0);
      double r2 = r / (1.0 - rho);
      double mtop = a * std::pow(vhat + lam * yhat * rho + r2 * rho * rho, m);
      double cand = 2.0 * (mtop + q.delta) / (rho * yn);
      if (cand < best) {
        best = cand;
        best_rho = rho;
      }
    }
    return std::pair<double, double>(best, best_rho);
  };

  double rho_used = 0.0;
  int iters = 0;
  for (; iters < 100; ++iters) {
    auto [cand, rho] = step(lambda);
    if (cand >= lambda * (1.0 - 1e-10)) break;
    lambda = cand;
    rho_used = rho;
  }

  LowerBound b;
  b.ok = true;
  b.kind = LowerCertificateKind::SlitReduction;
  b.value = 1.0 / lambda;
  b.params = {{"m", m},
              {"A", a},
              {"delta", q.delta},
              {"lambda", lambda},
              {"rho", rho_used},
              {"iterations", double(iters)},
              {"cap", 1.0 / first.value},
              {"exponent", 1.0 - 0.5 / m}};
  if (iters == 0) b.params["fallback"] = 1.0;
  return b;
}

namespace {

LowerBound run_pipeline(const DomainSpec& d, const EnvelopeParams& env, const CVector& z,
                        const CVector& x, const PipelineOptions& opts) {
  LowerBound inner =
      (opts.direction_cap_k > 0)
          ? tangential_weighted_lower_bound(env, z, x, opts.direction_cap_k, opts.cone_k)
          : normal_slice_lower_bound(env, z, x, opts.cone_k);
  if (!inner.ok) return inner;

  if (env.from_model_certificate) {
    // The model envelope covers the whole clipped domain; nothing is removed.
    inner.localization = 1.0;
    return inner;
  }
  LocalizationResult loc = localization_factor(d, z, env.frame.base, env.rho_patch);
  if (!loc.usable) {
    LowerBound b;
    b.ok = false;
    b.error = "localization factor unusable (point too close to the patch sphere)";
    return b;
  }
  inner.kind = LowerCertificateKind::Localized;
  inner.localization = loc.tanh_factor;
  inner.value *= loc.tanh_factor;
  inner.params["lhat"] = loc.lhat;
  return inner;
}

}  // namespace

LowerBound localized_cone_lower_bound(const DomainSpec& d, const EnvelopeParams& env,
                                      const CVector& z, const CVector& x,
                                      const PipelineOptions& opts) {
  return run_pipeline(d, env, z, x, opts);
}

LowerBound normal_estimate_c11(const DomainSpec& d, const CVector& z, const CVector& x,
                               const PipelineOptions& opts) {
  try {
    EnvelopeParams env;
    if (d.model_envelope && d.model_envelope->m == 2.0) {
      env = envelope_from_model(d);
    } else {
      BoundaryPoint bp = boundary_projection(d, z);
      env = envelope_fit(d, bp.point, 2.0, opts.envelope);
    }
    return run_pipeline(d, env, z, x, opts);
  } catch (const std::exception& e) {
    LowerBound b;
    b.ok = false;
    b.error = e.what();
    return b;
  }
}

LowerBound pseudoconvex_lower_bound(const DomainSpec& d, const CVector& z, const CVector& x,
                                    const PipelineOptions& opts) {
  LowerBound b;
  if (!d.pseudoconvex_known) {
    b.error = "domain is not declared pseudoconvex";
    return b;
  }
  if (!at_least(d.regularity, Regularity::C3)) {
    b.error = "pseudoconvex route requires C3 regularity";
    return b;
  }
  try {
    EnvelopeParams env;
    if (d.model_envelope && d.model_envelope->m == 3.0) {
      env = envelope_from_model(d);
    } else {
      BoundaryPoint bp = boundary_projection(d, z);
      env = envelope_fit(d, bp.point, 3.0, opts.envelope);
    }
    return run_pipeline(d, env, z, x, opts);
  } catch (const std::exception& e) {
    b.error = e.what();
    return b;
  }
}

}  // namespace koblab
