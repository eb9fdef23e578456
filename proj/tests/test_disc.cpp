#include "doctest.h"

#include <cmath>
#include <random>

#include "koblab/disc.hpp"
#include "koblab/upper_bounds.hpp"

using namespace koblab;

namespace {

CVector cv1(Complex a) {
  CVector z(1);
  z << a;
  return z;
}

CVector cv2(Complex a, Complex b) {
  CVector z(2);
  z << a, b;
  return z;
}

}  // namespace

TEST_CASE("containment certifier accepts the shrunk disc and rejects the full one") {
  DomainSpec disc = make_disc_domain(1.0);
  AnalyticDisc half = AnalyticDisc::linear(cv1(0), cv1(0.5));
  ContainmentResult ok = certify_disc_containment(disc, half);
  CHECK(ok.ok);
  CHECK(ok.margin > 0.1);

  AnalyticDisc full = AnalyticDisc::linear(cv1(0), cv1(1.0));
  ContainmentResult bad = certify_disc_containment(disc, full);
  CHECK_FALSE(bad.ok);
}

TEST_CASE("containment certifier is sound under a 4x density recheck") {
  DomainSpec d = make_saddle_domain(0.5, 2.0);
  validate_domain(d);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int accepted = 0;
  for (int t = 0; t < 40; ++t) {
    AnalyticDisc disc;
    disc.coeffs = CMatrix::Zero(3, 2);
    disc.coeffs.row(0) = cv2(Complex(0.2 * u(rng), 0.2 * u(rng)),
                             Complex(-0.3 + 0.1 * u(rng), 0.1 * u(rng)))
                             .transpose();
    disc.coeffs.row(1) =
        cv2(Complex(0.3 * u(rng), 0.3 * u(rng)), Complex(0.2 * u(rng), 0.2 * u(rng))).transpose();
    disc.coeffs.row(2) = cv2(Complex(0.1 * u(rng), 0), Complex(0, 0.1 * u(rng))).transpose();
    if (eval_field(d.field, disc.center()) >= 0) continue;
    ContainmentResult c = certify_disc_containment(d, disc, CertLevel::Certify);
    if (!c.ok) continue;
    ++accepted;
    ContainmentResult re = certify_disc_containment(d, disc, CertLevel::Recheck);
    CHECK(re.ok);
    CHECK(re.max_sampled < 0);
  }
  CHECK(accepted > 3);
}

TEST_CASE("optimizer reproduces the disc metric at the origin") {
  DomainSpec disc = make_disc_domain(1.0);
  ExprDiscDomain dom(disc);
  OptimizeOptions opts;
  opts.degree = 1;
  UpperBound u = disc_upper_bound_optimize(dom, cv1(0), cv1(1), opts);
  REQUIRE(u.ok);
  CHECK(u.value >= 1.0 - 1e-12);
  CHECK(u.value <= 1.001);
}

TEST_CASE("optimizer reproduces the ball metric at the center within 0.1%") {
  DomainSpec ball = make_ball_domain(2, 1.0);
  ExprDiscDomain dom(ball);
  OptimizeOptions opts;
  opts.degree = 1;
  CVector x = cv2(Complex(0.6, 0.3), Complex(-0.2, 0.7));
  UpperBound u = disc_upper_bound_optimize(dom, cv2(0, 0), x, opts);
  REQUIRE(u.ok);
  CHECK(u.value >= x.norm() * (1 - 1e-12));
  CHECK(u.value <= x.norm() * 1.001);
}

TEST_CASE("optimizer on the slit complement sits inside the certified sandwich") {
  SlitDiscDomain dom(Complex(0, 0), Complex(-1, 0), 10.0);
  CVector z = cv1(0.01), x = cv1(1);
  OptimizeOptions opts;
  opts.degree = 2;
  UpperBound u = disc_upper_bound_optimize(dom, z, x, opts);
  REQUIRE(u.ok);
  double d = dist_to_segment(0.01, 0, -1);
  double lower = slit_complement_lower_bound(0.01, 1.0, 0.0, -1.0);
  CHECK(u.value <= 1.0 / d * (1 + 1e-9));
  CHECK(u.value >= lower * (1 - 1e-12));
  CHECK(u.value >= 24.75);
}

TEST_CASE("optimizer never exceeds the trivial-disc baseline") {
  DomainSpec ball = make_ball_domain(2, 1.0);
  ExprDiscDomain dom(ball);
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int t = 0; t < 6; ++t) {
    CVector z = cv2(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
    if (z.norm() > 0.8) continue;
    CVector x = cv2(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
    if (x.norm() < 0.1) continue;
    OptimizeOptions opts;
    opts.degree = 2;
    opts.effort = 1;
    UpperBound ub = disc_upper_bound_optimize(dom, z, x, opts);
    REQUIRE(ub.ok);
    double d = 1.0 - z.norm();
    CHECK(ub.value <= x.norm() / d * (1 + 1e-9));
    // witness re-verification
    CHECK((ub.witness.center() - z).norm() < 1e-12);
    CVector dv = ub.witness.deriv_origin();
    CHECK(std::abs(std::abs(cpair(dv, x.conjugate())) - dv.norm() * x.norm()) < 1e-10);
  }
}

TEST_CASE("optimizer rejects exterior points") {
  DomainSpec disc = make_disc_domain(1.0);
  ExprDiscDomain dom(disc);
  UpperBound u = disc_upper_bound_optimize(dom, cv1(2.0), cv1(1));
  CHECK_FALSE(u.ok);
}

TEST_CASE("degree-3 optimizer approaches the disc geodesic at moderate points") {
  DomainSpec disc = make_disc_domain(1.0);
  ExprDiscDomain dom(disc);
  OptimizeOptions opts;
  opts.degree = 3;
  opts.effort = 3;
  for (double r : {0.05, 0.1}) {
    double exact = 1.0 / (1.0 - r * r);
    UpperBound u = disc_upper_bound_optimize(dom, cv1(r), cv1(1), opts);
    REQUIRE(u.ok);
    CHECK(u.value >= exact * (1 - 1e-9));
    CHECK(u.value <= exact * 1.005);
  }
}

TEST_CASE("polydisc containment uses the boundary circle") {
  PolydiscDiscDomain dom({1.0, 2.0});
  AnalyticDisc d;
  d.coeffs = CMatrix::Zero(2, 2);
  d.coeffs.row(1) = cv2(0.9, 1.8).transpose();
  ContainmentResult c = dom.certify(d, CertLevel::Certify);
  CHECK(c.ok);
  d.coeffs.row(1) = cv2(1.01, 0).transpose();
  c = dom.certify(d, CertLevel::Certify);
  CHECK_FALSE(c.ok);

  OptimizeOptions opts;
  opts.degree = 1;
  UpperBound u = disc_upper_bound_optimize(dom, cv2(0, 0), cv2(1, 1), opts);
  REQUIRE(u.ok);
  // exact polydisc metric at the center: max(1/1, 1/2) for X = (1,1)
  double exact = 1.0;
  CHECK(u.value >= exact * (1 - 1e-9));
  CHECK(u.value <= exact * 1.01);
}
