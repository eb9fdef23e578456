#include "koblab/disc.hpp"

#include "koblab/geometry.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace koblab {

AnalyticDisc AnalyticDisc::linear(const CVector& center, const CVector& a1) {
  AnalyticDisc d;
  d.coeffs = CMatrix::Zero(2, center.size());
  d.coeffs.row(0) = center.transpose();
  d.coeffs.row(1) = a1.transpose();
  return d;
}

CVector AnalyticDisc::eval(Complex zeta) const {
  const int deg = degree();
  CVector v = coeffs.row(deg).transpose();
  for (int d = deg - 1; d >= 0; --d) v = v * zeta + coeffs.row(d).transpose();
  return v;
}

CVector AnalyticDisc::deriv(Complex zeta) const {
  const int deg = degree();
  if (deg == 0) return CVector::Zero(dim());
  CVector v = double(deg) * coeffs.row(deg).transpose();
  for (int d = deg - 1; d >= 1; --d) v = v * zeta + double(d) * coeffs.row(d).transpose();
  return v;
}

double AnalyticDisc::tail_norm() const {
  double s = 0;
  for (int d = 1; d <= degree(); ++d) s += coeffs.row(d).norm();
  return s;
}

double AnalyticDisc::deriv_sup() const {
  double s = 0;
  for (int d = 1; d <= degree(); ++d) s += d * coeffs.row(d).norm();
  return s;
}

double AnalyticDisc::second_deriv_sup() const {
  double s = 0;
  for (int d = 2; d <= degree(); ++d) s += double(d) * (d - 1) * coeffs.row(d).norm();
  return s;
}

AnalyticDisc AnalyticDisc::scaled_parameter(double s) const {
  AnalyticDisc out = *this;
  double p = 1.0;
  for (int d = 0; d <= degree(); ++d) {
    out.coeffs.row(d) *= p;
    p *= s;
  }
  return out;
}

bool field_is_c2(const ScalarFieldExpr& f) {
  std::function<bool(const FieldNode&)> rec = [&](const FieldNode& n) -> bool {
    if (n.kind == FieldNode::Kind::Norm) return false;
    if (n.kind == FieldNode::Kind::AbsPow && n.mpow < 2.0) return false;
    for (const auto& k : n.kids)
      if (!rec(*k)) return false;
    return true;
  };
  return rec(*f.root);
}

namespace {

// One scalar constraint "violation(zeta) < 0 on the closed disc".
struct Constraint {
  std::function<double(Complex)> value;
  // local real gradient norm; second return disables the curvature path
  std::function<double(Complex, bool&)> grad_norm;
  double lip = 0.0;   // global Lipschitz bound in zeta
  double curv = -1.0; // global curvature bound; < 0 means unavailable
};

struct Cell {
  double r0, r1, t0, t1;
};

double cell_radius(const Cell& c, Complex& center) {
  double rm = 0.5 * (c.r0 + c.r1), tm = 0.5 * (c.t0 + c.t1);
  center = std::polar(rm, tm);
  double h = 0;
  for (double r : {c.r0, c.r1})
    for (double t : {c.t0, c.t1}) h = std::max(h, std::abs(std::polar(r, t) - center));
  return h;
}

ContainmentResult certify_constraints(const std::vector<Constraint>& cons, int base_r,
                                      int base_t, long budget) {
  ContainmentResult out;
  out.max_sampled = -std::numeric_limits<double>::infinity();
  double worst_bound = -std::numeric_limits<double>::infinity();

  std::vector<Cell> stack;
  stack.reserve(base_r * base_t + 64);
  for (int i = 0; i < base_r; ++i)
    for (int j = 0; j < base_t; ++j)
      stack.push_back(Cell{double(i) / base_r, double(i + 1) / base_r,
                           2 * M_PI * j / base_t, 2 * M_PI * (j + 1) / base_t});

  while (!stack.empty()) {
    Cell c = stack.back();
    stack.pop_back();
    Complex center;
    double h = cell_radius(c, center);
    double cell_bound = -std::numeric_limits<double>::infinity();
    bool split = false;
    for (const auto& con : cons) {
      double v = con.value(center);
      ++out.evaluations;
      out.max_sampled = std::max(out.max_sampled, v);
      if (v >= 0) {
        out.ok = false;
        out.margin = -v;
        return out;  // witness of escape: fail immediately
      }
      double b = v + con.lip * h;
      if (b >= 0 && con.curv > 0) {
        bool gok = true;
        double gn = con.grad_norm(center, gok);
        ++out.evaluations;
        if (gok) b = std::min(b, v + gn * h + 0.5 * con.curv * h * h);
      }
      cell_bound = std::max(cell_bound, b);
      if (b >= 0) split = true;
    }
    if (!split) {
      worst_bound = std::max(worst_bound, cell_bound);
      continue;
    }
    if (out.evaluations > budget) {
      out.ok = false;
      out.inconclusive = true;
      return out;
    }
    double rm = 0.5 * (c.r0 + c.r1), tm = 0.5 * (c.t0 + c.t1);
    stack.push_back(Cell{c.r0, rm, c.t0, tm});
    stack.push_back(Cell{c.r0, rm, tm, c.t1});
    stack.push_back(Cell{rm, c.r1, c.t0, tm});
    stack.push_back(Cell{rm, c.r1, tm, c.t1});
  }
  out.ok = true;
  out.margin = -worst_bound;
  return out;
}

double coarse_sample_max(const std::vector<Constraint>& cons, int nr, int nt) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= nr; ++i) {
    double r = double(i) / nr;
    for (int j = 0; j < nt; ++j) {
      Complex zeta = std::polar(r, 2 * M_PI * j / nt);
      for (const auto& con : cons) worst = std::max(worst, con.value(zeta));
    }
  }
  return worst;
}

// Constraint for |Phi(zeta)| <= R_enc.
Constraint ball_clip_constraint(const AnalyticDisc& d, double radius) {
  double sup_phi = d.center().norm() + d.tail_norm();
  double dsup = d.deriv_sup();
  Constraint c;
  c.value = [d, radius](Complex zeta) { return d.eval(zeta).squaredNorm() - radius * radius; };
  c.grad_norm = [d](Complex zeta, bool& ok) {
    ok = true;
    return 2.0 * std::abs(cpair(d.deriv(zeta), d.eval(zeta).conjugate()));
  };
  c.lip = 2.0 * sup_phi * dsup;
  c.curv = 2.0 * dsup * dsup + 2.0 * sup_phi * d.second_deriv_sup();
  return c;
}

}  // namespace

ExprDiscDomain::ExprDiscDomain(DomainSpec spec)
    : spec_(std::move(spec)), curvature_ok_(field_is_c2(spec_.field)) {
  if (spec_.gradient_bound <= 0)
    throw std::invalid_argument("ExprDiscDomain: domain needs a validated gradient bound");
}

bool ExprDiscDomain::is_interior(const CVector& z) const {
  return eval_field(spec_.field, z) < 0 && z.norm() < spec_.enclosing_radius;
}

double ExprDiscDomain::interior_distance_lower(const CVector& z) const {
  return distance_lower_bound(spec_, z);
}

double ExprDiscDomain::sample_max(const AnalyticDisc& d) const {
  const DomainSpec& s = spec_;
  Constraint fc;
  fc.value = [&](Complex zeta) { return eval_field(s.field, d.eval(zeta)); };
  std::vector<Constraint> cons = {fc, ball_clip_constraint(d, s.enclosing_radius)};
  return coarse_sample_max(cons, 48, 192);
}

ContainmentResult ExprDiscDomain::certify(const AnalyticDisc& d, CertLevel level) const {
  // Norm fast path: the whole image stays within a certified distance ball.
  double dlow = interior_distance_lower(d.center());
  double tail = d.tail_norm();
  if (dlow > 0 && tail <= dlow * (1.0 - 1e-12)) {
    ContainmentResult r;
    r.ok = true;
    r.margin = (dlow - tail) * spec_.gradient_bound > 0 ? (dlow - tail) : 0.0;
    r.evaluations = 1;
    return r;
  }

  const DomainSpec& s = spec_;
  double dsup = d.deriv_sup();
  Constraint fc;
  fc.value = [&s, &d](Complex zeta) { return eval_field(s.field, d.eval(zeta)); };
  fc.grad_norm = [&s, &d](Complex zeta, bool& ok) {
    CVector p = d.eval(zeta);
    Jet1 jet = eval_field_grad(s.field, p);
    if (jet.singular) {
      ok = false;
      return 0.0;
    }
    ok = true;
    // d(r o Phi)/d zeta, real gradient norm = 2 |sum dr/dz_j Phi_j'|
    const int n = static_cast<int>(p.size());
    CVector wg(n);
    for (int j = 0; j < n; ++j) wg[j] = 0.5 * Complex(jet.g[2 * j], -jet.g[2 * j + 1]);
    return 2.0 * std::abs(cpair(wg, d.deriv(zeta)));
  };
  fc.lip = s.gradient_bound * dsup;
  fc.curv = curvature_ok_
                ? s.hessian_bound * dsup * dsup + s.gradient_bound * d.second_deriv_sup()
                : -1.0;

  std::vector<Constraint> cons = {fc};
  if (d.center().norm() + tail > s.enclosing_radius * (1.0 - 1e-12))
    cons.push_back(ball_clip_constraint(d, s.enclosing_radius));

  if (level == CertLevel::Recheck)
    return certify_constraints(cons, 256, 1024, 24000000);
  return certify_constraints(cons, 64, 256, 6000000);
}

SlitDiscDomain::SlitDiscDomain(Complex a, Complex b, double enclosing_radius)
    : a_(a), b_(b), radius_(enclosing_radius) {}

bool SlitDiscDomain::is_interior(const CVector& z) const {
  return dist_to_segment(z[0], a_, b_) > 0 && std::abs(z[0]) < radius_;
}

double SlitDiscDomain::interior_distance_lower(const CVector& z) const {
  return std::min(dist_to_segment(z[0], a_, b_), radius_ - std::abs(z[0]));
}

double SlitDiscDomain::sample_max(const AnalyticDisc& d) const {
  Constraint c;
  c.value = [this, &d](Complex zeta) { return -dist_to_segment(d.eval(zeta)[0], a_, b_); };
  std::vector<Constraint> cons = {c, ball_clip_constraint(d, radius_)};
  return coarse_sample_max(cons, 48, 192);
}

ContainmentResult SlitDiscDomain::certify(const AnalyticDisc& d, CertLevel level) const {
  Constraint c;
  c.value = [this, &d](Complex zeta) { return -dist_to_segment(d.eval(zeta)[0], a_, b_); };
  // Distance to a fixed set is 1-Lipschitz; no curvature data.
  c.lip = d.deriv_sup();
  std::vector<Constraint> cons = {c};
  if (d.center().norm() + d.tail_norm() > radius_ * (1.0 - 1e-12))
    cons.push_back(ball_clip_constraint(d, radius_));
  if (level == CertLevel::Recheck)
    return certify_constraints(cons, 256, 1024, 24000000);
  return certify_constraints(cons, 64, 256, 6000000);
}

PolydiscDiscDomain::PolydiscDiscDomain(std::vector<double> radii) : radii_(std::move(radii)) {}

bool PolydiscDiscDomain::is_interior(const CVector& z) const {
  for (size_t j = 0; j < radii_.size(); ++j)
    if (std::abs(z[j]) >= radii_[j]) return false;
  return true;
}

double PolydiscDiscDomain::interior_distance_lower(const CVector& z) const {
  double best = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < radii_.size(); ++j) best = std::min(best, radii_[j] - std::abs(z[j]));
  return best;
}

double PolydiscDiscDomain::sample_max(const AnalyticDisc& d) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 512; ++k) {
    Complex zeta = std::polar(1.0, 2 * M_PI * k / 512);
    CVector v = d.eval(zeta);
    for (size_t j = 0; j < radii_.size(); ++j)
      worst = std::max(worst, std::norm(v[j]) - radii_[j] * radii_[j]);
  }
  return worst;
}

ContainmentResult PolydiscDiscDomain::certify(const AnalyticDisc& d, CertLevel level) const {
  // |Phi_j|^2 is subharmonic: its sup over the closed disc is attained on the
  // unit circle, so a 1-d certificate along the boundary suffices.
  ContainmentResult out;
  out.ok = true;
  out.margin = std::numeric_limits<double>::infinity();
  out.max_sampled = -std::numeric_limits<double>::infinity();
  const int base = (level == CertLevel::Recheck) ? 16384 : 4096;
  for (size_t j = 0; j < radii_.size(); ++j) {
    double sup_j = std::abs(d.coeffs(0, j));
    double dsup_j = 0;
    for (int k = 1; k <= d.degree(); ++k) {
      sup_j += std::abs(d.coeffs(k, j));
      dsup_j += k * std::abs(d.coeffs(k, j));
    }
    double lip = 2.0 * sup_j * dsup_j;  // d/dtheta of |Phi_j|^2 along the circle
    double h = M_PI / base;
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < base; ++k) {
      Complex zeta = std::polar(1.0, 2 * M_PI * (k + 0.5) / base);
      double v = std::norm(d.eval(zeta)[j]) - radii_[j] * radii_[j];
      ++out.evaluations;
      out.max_sampled = std::max(out.max_sampled, v);
      worst = std::max(worst, v + lip * h);
      if (v >= 0) {
        out.ok = false;
        out.margin = -v;
        return out;
      }
    }
    if (worst >= 0) {
      out.ok = false;
      out.inconclusive = true;
      return out;
    }
    out.margin = std::min(out.margin, -worst);
  }
  return out;
}

ContainmentResult certify_disc_containment(const DomainSpec& spec, const AnalyticDisc& d,
                                           CertLevel level) {
  return ExprDiscDomain(spec).certify(d, level);
}

}  // namespace koblab
