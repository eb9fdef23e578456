#include "koblab/upper_bounds.hpp"

#include <cmath>

namespace koblab {

namespace {

AnalyticDisc shaped_disc(const CVector& z, const CVector& xu, double mu, const CMatrix& higher) {
  const int deg = 1 + static_cast<int>(higher.rows());
  AnalyticDisc d;
  d.coeffs = CMatrix::Zero(deg + 1, z.size());
  d.coeffs.row(0) = z.transpose();
  d.coeffs.row(1) = mu * xu.transpose();
  for (int r = 0; r < higher.rows(); ++r) d.coeffs.row(2 + r) = higher.row(r);
  return d;
}

// Largest screen-feasible mu for a fixed higher-order shape, then a certified
// backoff from the screen optimum.
double certified_max_mu(const DiscDomain& dom, const CVector& z, const CVector& xu,
                        const CMatrix& higher, double mu_seed, double rel_tol,
                        AnalyticDisc* best_disc, double* margin_out) {
  auto screen_ok = [&](double mu) {
    return dom.sample_max(shaped_disc(z, xu, mu, higher)) < 0.0;
  };
  double lo = mu_seed;
  if (!screen_ok(lo)) {
    // Shape made even the seed infeasible on the screen; shrink.
    for (int i = 0; i < 40 && lo > 1e-300; ++i) {
      lo *= 0.5;
      if (screen_ok(lo)) break;
    }
    if (!screen_ok(lo)) return 0.0;
  }
  double hi = lo;
  for (int i = 0; i < 70; ++i) {
    double cand = hi * 1.6;
    if (!screen_ok(cand)) break;
    hi = cand;
  }
  double bad = hi * 1.6;
  while ((bad - hi) / hi > rel_tol) {
    double mid = 0.5 * (bad + hi);
    if (screen_ok(mid))
      hi = mid;
    else
      bad = mid;
  }
  // Certified backoff from the screen optimum.
  double mu = hi;
  for (int i = 0; i < 30; ++i) {
    AnalyticDisc d = shaped_disc(z, xu, mu, higher);
    ContainmentResult c = dom.certify(d, CertLevel::Certify);
    if (c.ok) {
      if (best_disc) *best_disc = d;
      if (margin_out) *margin_out = c.margin;
      return mu;
    }
    mu *= (i < 10) ? (1.0 - 1e-3 * (1 << i)) : 0.9;
    if (mu < mu_seed) break;
  }
  // The distance seed itself is certified by the norm fast path.
  AnalyticDisc d = shaped_disc(z, xu, mu_seed, higher);
  ContainmentResult c = dom.certify(d, CertLevel::Certify);
  if (c.ok) {
    if (best_disc) *best_disc = d;
    if (margin_out) *margin_out = c.margin;
    return mu_seed;
  }
  return 0.0;
}

}  // namespace

UpperBound disc_upper_bound_optimize(const DiscDomain& dom, const CVector& z, const CVector& x,
                                     const OptimizeOptions& opts) {
  UpperBound out;
  out.query_point = z;
  out.query_direction = x;
  if (!dom.is_interior(z)) {
    out.error = "point not interior";
    return out;
  }
  double xn = x.norm();
  if (xn < 1e-300) {
    out.error = "zero direction";
    return out;
  }
  CVector xu = x / xn;
  double d0 = dom.interior_distance_lower(z);
  if (d0 <= 0) {
    out.error = "point not interior";
    return out;
  }
  double mu_seed = d0 * (1.0 - 1e-12);

  const int extra_rows = std::max(0, opts.degree - 1);
  CMatrix higher = CMatrix::Zero(extra_rows, z.size());

  AnalyticDisc best;
  double margin = 0.0;
  double mu = certified_max_mu(dom, z, xu, higher, mu_seed, opts.mu_rel_tol, &best, &margin);
  if (mu <= 0) {
    out.error = "no certifiable disc (containment inconclusive)";
    return out;
  }

  // Compass search over the higher-order coefficients.
  if (extra_rows > 0 && opts.effort > 0) {
    double step = 0.5 * mu;
    for (int pass = 0; pass < opts.effort * 3 && step > 1e-3 * mu; ++pass) {
      bool improved = false;
      for (int r = 0; r < extra_rows; ++r) {
        for (int col = 0; col < z.size(); ++col) {
          for (Complex dir : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0, -1)}) {
            CMatrix trial = higher;
            trial(r, col) += step * dir;
            AnalyticDisc cand_disc;
            double cand_margin = 0.0;
            double cand =
                certified_max_mu(dom, z, xu, trial, mu, opts.mu_rel_tol, &cand_disc, &cand_margin);
            if (cand > mu * (1.0 + 1e-9)) {
              mu = cand;
              higher = trial;
              best = cand_disc;
              margin = cand_margin;
              improved = true;
            }
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }

  out.ok = true;
  out.value = xn / mu;
  out.witness = best;
  out.margin = margin;
  out.diag["mu"] = mu;
  out.diag["distance_seed"] = mu_seed;
  return out;
}

namespace {

// Radial envelope certificate for the model-family disc: a piecewise bound
// U(t) >= sup_{|zeta|=t} r(Phi(zeta)) checked on a fine 1-d grid with a
// Lipschitz margin.
bool model_disc_contained(double m, double a, double b, double r_enc, const CVector& z,
                          const CVector& xs, double alpha, double binv, double* margin_out) {
  const int n = static_cast<int>(z.size());
  double delta = -z[n - 1].real();
  double absz = z.norm();
  double xnorm = xs.norm();

  auto upper = [&](double t) {
    double re_phin = -delta + alpha * t;
    double lb = binv * t * t - std::abs(z[0]) - alpha * std::abs(xs[0]) * t;
    double good = (lb > 0) ? -a * std::pow(lb, m) : 0.0;
    double bad = 0.0;
    if (b > 0) {
      for (int j = 1; j < n; ++j)
        bad += std::pow(std::abs(z[j]) + alpha * std::abs(xs[j]) * t, m);
      double phin = std::abs(z[n - 1]) + alpha * t;
      double phi = absz + alpha * xnorm * t + binv * t * t;
      bad = b * (bad + phin * phi);
    }
    return re_phin + good + bad;
  };

  // Image must stay in the enclosing ball.
  double sup_phi = absz + alpha * xnorm + binv;
  if (sup_phi >= r_enc * (1.0 - 1e-9)) return false;

  // Lipschitz bound for U on [0, 1].
  double mb = binv + std::abs(z[0]) + alpha * std::abs(xs[0]);
  double lb_slope = 2.0 * binv + alpha * std::abs(xs[0]);
  double lip = alpha + a * m * std::pow(mb, m - 1.0) * lb_slope;
  if (b > 0) {
    double s = 0.0;
    for (int j = 1; j < n; ++j)
      s += m * std::pow(std::abs(z[j]) + alpha * std::abs(xs[j]), m - 1.0) * alpha *
           std::abs(xs[j]);
    lip += b * (s + alpha * sup_phi +
                (std::abs(z[n - 1]) + alpha) * (alpha * xnorm + 2.0 * binv));
  }

  const int grid = 16384;
  double h = 1.0 / grid;
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    double t = (i + 0.5) * h;
    worst = std::max(worst, upper(t) + lip * 0.5 * h);
    if (worst >= 0) return false;
  }
  if (margin_out) *margin_out = -worst;
  return true;
}

}  // namespace

UpperBound disc_upper_bound_model(const DomainSpec& model, const CVector& z, const CVector& x,
                                  double cone_k) {
  UpperBound out;
  out.query_point = z;
  out.query_direction = x;
  if (!model.model_envelope) {
    out.error = "domain is not in the model normal form";
    return out;
  }
  const double m = model.model_envelope->m;
  const double a = model.model_envelope->a;
  const double b = model.model_envelope->b;
  const int n = model.dim;
  Complex xn = x[n - 1];
  if (std::abs(xn) < 1e-15) {
    out.error = "direction has no normal component";
    return out;
  }
  double delta = -z[n - 1].real();
  if (!(delta > 0) || !in_normal_cone(z, cone_k)) {
    out.error = "point outside the approach cone";
    return out;
  }
  CVector xs = x / xn;  // normalized so the last component is 1

  for (int j = 4; j <= 80; ++j) {
    double c = std::pow(2.0, -0.25 * j);
    double alpha = c * std::pow(delta, 1.0 - 0.5 / m);
    for (double binv : {2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0}) {
      double margin = 0.0;
      if (!model_disc_contained(m, a, b, model.enclosing_radius, z, xs, alpha, binv, &margin))
        continue;
      AnalyticDisc d;
      d.coeffs = CMatrix::Zero(3, n);
      d.coeffs.row(0) = z.transpose();
      d.coeffs.row(1) = alpha * xs.transpose();
      d.coeffs(2, 0) = binv;
      out.ok = true;
      out.value = std::abs(xn) / alpha;
      out.witness = d;
      out.margin = margin;
      out.diag = {{"c", c}, {"b", 1.0 / binv}, {"delta", delta}, {"m", m}};
      return out;
    }
  }
  out.error = "containment fails for all grid pairs (delta too large)";
  return out;
}

UpperBound disc_upper_bound_nonpsc(const DomainSpec& d, const CVector& p0, double delta,
                                   double levi_tol) {
  UpperBound out;
  const int n = d.dim;
  try {
    double r0 = eval_field(d.field, p0);
    if (std::abs(r0) > 1e-8 * (1.0 + d.gradient_bound))
      throw std::invalid_argument("base point not on the boundary");
    CVector g = wirtinger_gradient(d.field, p0);
    double gn = g.norm();
    if (gn < 1e-10) throw std::invalid_argument("degenerate gradient at the base point");

    LocalFrame frame = LocalFrame::plain(p0, unitary_with_last_column(g.conjugate() / gn),
                                         1.0 / (2.0 * gn));
    ScalarFieldExpr fw = fe::field(
        n, fe::scale(frame.field_scale,
                     fe::compose_linear(d.field.root, frame.rotation, frame.base)));

    LeviData levi = levi_form(fw, CVector::Zero(n));
    if (levi.restricted_eigenvalues.empty())
      throw std::invalid_argument("no restricted Levi data at the base point");
    // Diagonalize the tangential block; put the most negative eigenvalue first.
    CMatrix lhat = levi.matrix.topLeftCorner(n - 1, n - 1);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(lhat);
    double c1 = es.eigenvalues()[0];
    if (c1 >= -levi_tol)
      throw std::invalid_argument("restricted Levi form has no negative eigenvalue");
    double neg_a = -0.5 * c1;  // c1 = -2a

    CMatrix qh = holomorphic_hessian(fw, CVector::Zero(n));
    frame.has_shear = true;
    frame.shear = 0.5 * (qh + qh.transpose());
    frame.post = CMatrix::Identity(n, n);
    frame.post.topLeftCorner(n - 1, n - 1) = es.eigenvectors().adjoint();

    // Levi matrix in the final coordinates (shear leaves it unchanged at 0).
    CMatrix lv = frame.post * levi.matrix * frame.post.adjoint();

    // Comparison field r_hat = Re v_n - a|v_1|^2 + B sum_{j>=2} |v_j|^2 with
    // v^*(L - D)v <= -q |v|^2.
    double q_gap = 0.25 * neg_a;
    double big_b = 0.0;
    for (double cand = 2.0 * lv.norm() + neg_a;; cand *= 2.0) {
      CMatrix diff = lv;
      diff(0, 0) += neg_a;
      for (int j = 1; j < n; ++j) diff(j, j) -= cand;
      Eigen::SelfAdjointEigenSolver<CMatrix> es2(diff);
      if (es2.eigenvalues()[n - 1] <= -q_gap) {
        big_b = cand;
        break;
      }
      if (cand > 1e8) throw std::runtime_error("no comparison diagonal found");
    }

    // Third-order control of the framed field around 0, sampled directly in
    // the final coordinates v = post * sigma(w).
    double rho = 0.75 * (d.tubular_radius > 0 ? d.tubular_radius : 0.1 * d.enclosing_radius);
    double qnorm = frame.shear.norm();
    if (qnorm > 0) rho = std::min(rho, 1.0 / (8.0 * qnorm));
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gd(0.0, 1.0);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    auto to_final = [&](const CVector& w) {
      CVector u = w;
      u[n - 1] += (w.transpose() * frame.shear * w)(0, 0);
      return CVector(frame.post * u);
    };
    double tsup = 0.0;
    for (int i = 0; i < 800; ++i) {
      CVector w(n);
      for (int j = 0; j < n; ++j) w[j] = Complex(gd(rng), gd(rng));
      double rr = rho * std::pow(ud(rng), 1.0 / (2 * n));
      if (w.norm() > 0) w *= rr / w.norm();
      if (w.norm() < 1e-3 * rho) continue;
      double f = eval_field(fw, w);
      CVector v = to_final(w);
      double nv = v.norm();
      if (nv < 1e-12) continue;
      double quad = (v.adjoint() * lv * v)(0, 0).real();
      tsup = std::max(tsup, std::abs(f - v[n - 1].real() - quad) / (nv * nv * nv));
    }
    double t_hat = 1.25 * tsup + 1e-12;
    double r_f = std::min(rho, q_gap / t_hat);

    // Validation grid for the comparison inequality f <= r_hat on the patch.
    for (int i = 0; i < 4000; ++i) {
      CVector w(n);
      for (int j = 0; j < n; ++j) w[j] = Complex(gd(rng), gd(rng));
      double rr = rho * std::pow(ud(rng), 1.0 / (2 * n));
      if (w.norm() > 0) w *= rr / w.norm();
      CVector v = to_final(w);
      if (v.norm() > r_f) continue;
      double rhat = v[n - 1].real() - neg_a * std::norm(v[0]);
      for (int j = 1; j < n; ++j) rhat += big_b * std::norm(v[j]);
      if (eval_field(fw, w) > rhat + 1e-12)
        r_f = std::min(r_f, 0.8 * v.norm());
    }
    if (delta > 0.25 * r_f)
      throw std::runtime_error("delta too large for the certified patch");

    // Shrink the flat disc until the closed-form radial envelope certifies
    // containment in { r_hat < 0 } cap B(0, r_f).
    double upper = 0.0;
    double s_used = 0.0;
    for (double s = 1.0; s >= 1.0 / 4096; s *= 0.5) {
      double c2 = -s * s + big_b * s * s * delta / 4.0;
      double c1lin = s * std::sqrt(delta) * 0.5 + big_b * delta * s * std::sqrt(delta);
      double c0 = -delta + big_b * delta * delta;
      double worst = c0;  // t = 0
      worst = std::max(worst, c0 + c1lin + c2);  // t = 1
      if (c2 < 0) {
        double tstar = -c1lin / (2.0 * c2);
        if (tstar > 0 && tstar < 1)
          worst = std::max(worst, c0 + c1lin * tstar + c2 * tstar * tstar);
      }
      double reach2 = (s / std::sqrt(neg_a)) * (s / std::sqrt(neg_a)) +
                      (delta + s * std::sqrt(delta) * 0.5) * (delta + s * std::sqrt(delta) * 0.5);
      if (worst < 0 && reach2 < r_f * r_f) {
        upper = 1.0 / (s * std::sqrt(delta));
        s_used = s;
        break;
      }
    }
    if (upper == 0.0) throw std::runtime_error("witness containment failed at this delta");

    // Witness in frame coordinates.
    AnalyticDisc wd;
    wd.coeffs = CMatrix::Zero(2, n);
    CVector pd = CVector::Zero(n);
    pd[n - 1] = Complex(-delta, 0);
    wd.coeffs.row(0) = pd.transpose();
    CVector dvec = CVector::Zero(n);
    dvec[0] = s_used / std::sqrt(neg_a);
    dvec[n - 1] = s_used * std::sqrt(delta) * 0.5;
    wd.coeffs.row(1) = dvec.transpose();

    out.ok = true;
    out.value = upper;
    out.witness = wd;
    out.margin = 0.0;
    out.query_point = frame.frame_to_world(pd);
    // X_delta = (delta^{-1/2}/sqrt(a), 0, ..., 1/2): the witness derivative is
    // s delta^{1/2} X_delta.
    CVector xdelta = CVector::Zero(n);
    xdelta[0] = 1.0 / (std::sqrt(delta) * std::sqrt(neg_a));
    xdelta[n - 1] = 0.5;
    CMatrix jf = frame.frame_jacobian(out.query_point);
    out.query_direction = jf.fullPivLu().solve(xdelta);
    // Gradient of the normalized field in the final coordinates, for the
    // pairing check |<dr(p_delta), X_delta>| <= 1.
    CVector w_pd = frame.rotation.adjoint() * (out.query_point - p0);
    CVector g_w = wirtinger_gradient(fw, w_pd);
    CMatrix dsig = CMatrix::Identity(n, n);
    CVector qw = 2.0 * (frame.shear * w_pd);
    for (int j = 0; j < n; ++j) dsig(n - 1, j) += qw[j];
    CMatrix dv_dw = frame.post * dsig;
    CVector g_v = dv_dw.inverse().transpose() * g_w;
    out.diag = {{"a", neg_a},
                {"B", big_b},
                {"s", s_used},
                {"delta", delta},
                {"r_patch", r_f},
                {"pairing", std::abs(cpair(g_v, xdelta))}};
    return out;
  } catch (const std::exception& e) {
    out.error = e.what();
    return out;
  }
}

}  // namespace koblab
