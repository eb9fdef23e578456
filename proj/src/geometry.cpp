#include "koblab/geometry.hpp"

#include <cmath>

namespace koblab {

CVector wirtinger_gradient(const ScalarFieldExpr& f, const CVector& z) {
  Jet1 jet = eval_field_grad(f, z);
  if (jet.singular)
    throw std::domain_error("wirtinger_gradient: derivative requested on a singular locus");
  const int n = static_cast<int>(z.size());
  CVector g(n);
  for (int j = 0; j < n; ++j) g[j] = 0.5 * Complex(jet.g[2 * j], -jet.g[2 * j + 1]);
  return g;
}

namespace {

CMatrix mixed_hessian(const Jet2& jet, int n) {
  // d^2/dz_j dzbar_k = ((xx + yy) + i (xy - yx)) / 4
  CMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double xx = jet.h(2 * j, 2 * k);
      double yy = jet.h(2 * j + 1, 2 * k + 1);
      double xy = jet.h(2 * j, 2 * k + 1);
      double yx = jet.h(2 * j + 1, 2 * k);
      m(j, k) = 0.25 * Complex(xx + yy, xy - yx);
    }
  return m;
}

}  // namespace

CMatrix holomorphic_hessian(const ScalarFieldExpr& f, const CVector& z) {
  Jet2 jet = eval_field_hess(f, z);
  if (jet.singular)
    throw std::domain_error("holomorphic_hessian: derivative requested on a singular locus");
  const int n = static_cast<int>(z.size());
  CMatrix m(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double xx = jet.h(2 * j, 2 * k);
      double yy = jet.h(2 * j + 1, 2 * k + 1);
      double xy = jet.h(2 * j, 2 * k + 1);
      double yx = jet.h(2 * j + 1, 2 * k);
      m(j, k) = 0.25 * Complex(xx - yy, -(xy + yx));
    }
  return m;
}

LeviData levi_form(const ScalarFieldExpr& f, const CVector& z) {
  Jet2 jet = eval_field_hess(f, z);
  if (jet.singular)
    throw std::domain_error("levi_form: derivative requested on a singular locus");
  const int n = static_cast<int>(z.size());
  LeviData out;
  out.matrix = mixed_hessian(jet, n);
  out.gradient = CVector(n);
  for (int j = 0; j < n; ++j)
    out.gradient[j] = 0.5 * Complex(jet.g[2 * j], -jet.g[2 * j + 1]);
  double gn = out.gradient.norm();
  if (gn < 1e-12) {
    out.gradient_degenerate = true;
    return out;
  }
  if (n == 1) return out;  // no complex tangent directions
  // Complex tangent space: { X : sum g_j X_j = 0 }, i.e. the Hermitian
  // orthocomplement of conj(g).
  CVector axis = out.gradient.conjugate() / gn;
  CMatrix u = unitary_with_last_column(axis);
  CMatrix basis = u.leftCols(n - 1);
  CMatrix restricted = basis.adjoint() * out.matrix * basis;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(restricted);
  out.restricted_eigenvalues.assign(es.eigenvalues().data(),
                                    es.eigenvalues().data() + (n - 1));
  return out;
}

namespace {

struct NewtonState {
  RVector w;      // 2n real coordinates
  double lambda = 0.0;
};

double projection_residual(const DomainSpec& d, const RVector& wz, const NewtonState& s,
                           RVector* grad_out) {
  CVector w = to_complex(s.w);
  Jet1 jet = eval_field_grad(d.field, w);
  RVector g = jet.g;
  if (grad_out) *grad_out = g;
  RVector station = 2.0 * (s.w - wz) + s.lambda * g;
  return std::sqrt(station.squaredNorm() + jet.v * jet.v);
}

}  // namespace

BoundaryPoint boundary_projection(const DomainSpec& d, const CVector& z) {
  if (static_cast<int>(z.size()) != d.dim)
    throw std::invalid_argument("boundary_projection: dimension mismatch");
  if (d.exact_projection) {
    CVector p = d.exact_projection(z);
    CVector g = wirtinger_gradient(d.field, p);
    BoundaryPoint bp;
    bp.point = p;
    CVector nc(d.dim);
    for (int j = 0; j < d.dim; ++j) nc[j] = 2.0 * std::conj(g[j]);
    bp.normal = nc / nc.norm();
    bp.normal_r = to_real(bp.normal);
    return bp;
  }

  const int m = 2 * d.dim;
  RVector wz = to_real(z);
  NewtonState s;
  s.w = wz;

  // Gradient-flow seed toward { r = 0 }.
  for (int it = 0; it < 40; ++it) {
    CVector w = to_complex(s.w);
    Jet1 jet = eval_field_grad(d.field, w);
    double gn2 = jet.g.squaredNorm();
    if (gn2 < 1e-20) break;
    s.w -= (jet.v / gn2) * jet.g;
    if (std::abs(jet.v) < 1e-12) break;
  }
  {
    CVector w = to_complex(s.w);
    Jet1 jet = eval_field_grad(d.field, w);
    double gn2 = jet.g.squaredNorm();
    if (gn2 > 1e-20) s.lambda = -2.0 * (s.w - wz).dot(jet.g) / gn2;
  }

  double best_res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 100; ++it) {
    CVector w = to_complex(s.w);
    Jet2 jet = eval_field_hess(d.field, w);
    if (jet.singular)
      throw ProjectionError("boundary_projection: singular locus encountered", best_res);
    RVector station = 2.0 * (s.w - wz) + s.lambda * RVector(jet.g);
    double res = std::sqrt(station.squaredNorm() + jet.v * jet.v);
    best_res = std::min(best_res, res);
    if (res < 1e-12) break;

    RMatrix kkt(m + 1, m + 1);
    kkt.setZero();
    kkt.topLeftCorner(m, m) = 2.0 * RMatrix::Identity(m, m) + s.lambda * RMatrix(jet.h);
    kkt.topRightCorner(m, 1) = jet.g;
    kkt.bottomLeftCorner(1, m) = jet.g.transpose();
    RVector rhs(m + 1);
    rhs.head(m) = -station;
    rhs[m] = -jet.v;
    RVector step = kkt.fullPivLu().solve(rhs);

    // Damped acceptance on the residual norm.
    double t = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 12; ++bt) {
      NewtonState trial;
      trial.w = s.w + t * step.head(m);
      trial.lambda = s.lambda + t * step[m];
      double tres = projection_residual(d, wz, trial, nullptr);
      if (tres < res) {
        s = trial;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }

  CVector p = to_complex(s.w);
  double rv = eval_field(d.field, p);
  Jet1 jet = eval_field_grad(d.field, p);
  double gn = jet.g.norm();
  RVector diff = s.w - wz;
  double align = 1.0;
  if (diff.norm() > 1e-14 && gn > 1e-14)
    align = diff.dot(jet.g) / (diff.norm() * gn);
  if (std::abs(rv) > 1e-10 || gn < 1e-12)
    throw ProjectionError("boundary_projection: no convergence to the boundary", std::abs(rv));
  if (std::acos(std::clamp(align, -1.0, 1.0)) > 1e-6)
    throw ProjectionError("boundary_projection: projection direction not normal",
                          std::acos(std::clamp(align, -1.0, 1.0)));

  BoundaryPoint bp;
  bp.point = p;
  bp.normal_r = jet.g / gn;
  bp.normal = to_complex(bp.normal_r);
  return bp;
}

double signed_distance(const DomainSpec& d, const CVector& z) {
  if (d.exact_signed_distance) return d.exact_signed_distance(z);
  BoundaryPoint bp = boundary_projection(d, z);
  double dist = (bp.point - z).norm();
  double r = eval_field(d.field, z);
  double to_field = (r < 0) ? -dist : dist;
  // Clip against the enclosing sphere (exact for interior points).
  return std::max(to_field, z.norm() - d.enclosing_radius);
}

double distance_lower_bound(const DomainSpec& d, const CVector& z) {
  double r = eval_field(d.field, z);
  if (r >= 0) return 0.0;
  double a = -r / d.gradient_bound;
  double b = d.enclosing_radius - z.norm();
  if (d.exact_signed_distance) a = std::max(a, -d.exact_signed_distance(z));
  return std::max(0.0, std::min(a, b));
}

NormalFrame normal_vectors(const DomainSpec& d, const CVector& p) {
  const int n = d.dim;
  RVector ddelta(2 * n);  // real gradient of the signed distance, unit length
  double r = eval_field(d.field, p);
  if (std::abs(r) < 1e-12) {
    Jet1 jet = eval_field_grad(d.field, p);
    double gn = jet.g.norm();
    if (gn < 1e-12) throw std::domain_error("normal_vectors: degenerate gradient");
    ddelta = jet.g / gn;
  } else {
    BoundaryPoint bp = boundary_projection(d, p);
    RVector diff = to_real(bp.point) - to_real(p);
    double dist = diff.norm();
    if (dist < 1e-14) throw std::domain_error("normal_vectors: point on boundary");
    ddelta = (r < 0 ? 1.0 : -1.0) * diff / dist;
  }
  NormalFrame f;
  const double rt2 = std::sqrt(2.0);
  f.n_complex = CVector(n);
  f.dist_gradient = CVector(n);
  for (int j = 0; j < n; ++j) {
    // N_j = 2 sqrt2 (d delta / d zbar_j) = sqrt2 (delta_x + i delta_y)
    f.n_complex[j] = rt2 * Complex(ddelta[2 * j], ddelta[2 * j + 1]);
    f.dist_gradient[j] = 0.5 * Complex(ddelta[2 * j], -ddelta[2 * j + 1]);
  }
  // n_p = sqrt2 Re N_p, evaluated through the same floats.
  f.n_real = RVector(2 * n);
  for (int j = 0; j < n; ++j) {
    f.n_real[2 * j] = rt2 * 0.5 * f.n_complex[j].real();
    f.n_real[2 * j + 1] = rt2 * 0.5 * f.n_complex[j].imag();
  }
  return f;
}

bool in_normal_cone(const CVector& z, double k) {
  if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("cone parameter must be in (0,1)");
  return -z[z.size() - 1].real() > k * z.norm();
}

}  // namespace koblab
