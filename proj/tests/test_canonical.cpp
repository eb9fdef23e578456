#include "doctest.h"

#include <cmath>
#include <random>

#include "koblab/canonical.hpp"

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

TEST_CASE("poincare distance") {
  CHECK(poincare_distance(0, 0) == doctest::Approx(0.0));
  CHECK(poincare_distance(0, 0.5) == doctest::Approx(0.5493061443340548).epsilon(1e-12));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int t = 0; t < 10; ++t) {
    Complex a(u(rng), u(rng)), b(u(rng), u(rng));
    CHECK(std::abs(poincare_distance(a, b) - poincare_distance(b, a)) < 1e-14);
  }
  CHECK_THROWS_AS(poincare_distance(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("canonical closed forms") {
  auto disc = CanonicalDomain::unit_disc();
  MetricValue m = kobayashi_canonical(disc, cv1(0), cv1(1));
  CHECK(m.exact);
  CHECK(m.value == doctest::Approx(1.0));

  auto hp = CanonicalDomain::right_half_plane();
  m = kobayashi_canonical(hp, cv1(1), cv1(1));
  CHECK(m.value == doctest::Approx(0.5));

  auto ball = CanonicalDomain::ball(1.0);
  CVector x = cv2(Complex(0.3, 0.4), Complex(0, -1));
  m = kobayashi_canonical(ball, cv2(0, 0), x);
  CHECK(m.value == doctest::Approx(x.norm()).epsilon(1e-13));

  // Radial slice equals the disc geodesic: F((r,0), e1) = 1/(1-r^2).
  for (double r : {0.1, 0.5, 0.8}) {
    m = kobayashi_canonical(ball, cv2(r, 0), cv2(1, 0));
    CHECK(m.value == doctest::Approx(1.0 / (1.0 - r * r)).epsilon(1e-13));
  }

  auto poly = CanonicalDomain::polydisc({1.0, 2.0});
  m = kobayashi_canonical(poly, cv2(0, 0), cv2(1, 1));
  CHECK(m.value == doctest::Approx(1.0));  // max(1/1, 1/2)

  CHECK_THROWS_AS(kobayashi_canonical(disc, cv1(1.2), cv1(1)), std::invalid_argument);
}

TEST_CASE("slit complement lower bound: frozen evaluation of the closed-form map") {
  // Segment [-1, 0], z = 0.01 just off the tip, X = 1.
  // f(z) = sqrt(z/(z+1)) = 0.0995037..., bound = |f'| / (2 Re f) = 1/(4 z (z+1)).
  double b = slit_complement_lower_bound(0.01, 1.0, 0.0, -1.0);
  CHECK(b == doctest::Approx(24.752475247524753).epsilon(1e-12));
  CHECK(b >= 12.5);  // (1/8) |X| / d with d = 0.01

  // 1-homogeneity.
  CHECK(slit_complement_lower_bound(0.01, 2.0, 0.0, -1.0) == doctest::Approx(2 * b));

  // Never exceeds the universal upper bound |X|/d for d <= eps0.
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.6, 1.0);
  int checked = 0;
  while (checked < 40) {
    Complex z(u(rng), u(rng) * 0.5);
    double d = dist_to_segment(z, 0.0, -1.0);
    if (d < 1e-3 || d > 1.0) continue;
    ++checked;
    double lo = slit_complement_lower_bound(z, 1.0, 0.0, -1.0);
    CHECK(lo <= 1.0 / d + 1e-12);
    CHECK(lo >= 0.125 / d - 1e-12);
  }

  CHECK_THROWS_AS(slit_complement_lower_bound(-0.5, 1.0, 0.0, -1.0), std::invalid_argument);
}

TEST_CASE("slit bound is invariant under rigid motions of the segment") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    Complex rot = std::polar(1.0, u(rng) * 3.0);
    Complex shift(u(rng), u(rng));
    Complex z(0.3, 0.4);
    double a = slit_complement_lower_bound(z, 1.0, 0.0, -1.0);
    double b = slit_complement_lower_bound(rot * z + shift, rot, rot * Complex(0.0) + shift,
                                           rot * Complex(-1.0) + shift);
    CHECK(a == doctest::Approx(b).epsilon(1e-11));
  }
}

TEST_CASE("ray complement bound dominates the 1/8 floor") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int t = 0; t < 50; ++t) {
    Complex z(u(rng), u(rng));
    double base = 0.3;
    double d = dist_to_ray(z, base);
    if (d < 1e-6) continue;
    double lo = ray_complement_lower_bound(z, 1.0, base);
    CHECK(lo >= 0.125 / d - 1e-12);
    CHECK(lo <= 1.0 / d + 1e-12);
  }
}

TEST_CASE("enlarging the domain does not increase the slit reduction bound") {
  // C minus [-2,0] sits inside C minus [-1,0]; the longer obstruction gives
  // the larger certified bound.
  for (double zr : {0.01, 0.05, 0.3}) {
    double small_domain = slit_complement_lower_bound(zr, 1.0, 0.0, -2.0);
    double large_domain = slit_complement_lower_bound(zr, 1.0, 0.0, -1.0);
    CHECK(large_domain <= small_domain + 1e-12);
  }
}

TEST_CASE("contraction transfer") {
  // Identity disc -> disc reproduces the closed form.
  auto disc = CanonicalDomain::unit_disc();
  HoloMapSpec id = identity_map(1);
  for (double r : {0.0, 0.3, 0.6}) {
    double v = contraction_transfer(id, disc, cv1(r), cv1(1));
    CHECK(v == doctest::Approx(1.0 / (1.0 - r * r)).epsilon(1e-13));
  }

  // Inclusion D(0, 1/2) -> D: transferred bound is below the small-disc metric.
  for (double r : {0.0, 0.2, 0.4}) {
    double incl = contraction_transfer(id, disc, cv1(r), cv1(1));
    double small = 0.5 / (0.25 - r * r);
    CHECK(incl <= small + 1e-12);
  }

  // Coordinate projection of { Re z2 < 0 } onto the right half-plane (w = -z2):
  // at z = (0, -delta), X = e2 this gives exactly 1/(2 delta).
  HoloMapSpec proj;
  proj.dim_in = 2;
  proj.dim_out = 1;
  proj.components = {hm::scale(-1.0, hm::var(1))};
  auto hp = CanonicalDomain::right_half_plane();
  double delta = 1e-3;
  double v = contraction_transfer(proj, hp, cv2(0, -delta), cv2(0, 1));
  CHECK(v == doctest::Approx(1.0 / (2 * delta)).epsilon(1e-12));
}

TEST_CASE("localization factor: exact disc-in-disc edge and monotonicity") {
  DomainSpec disc = make_disc_domain(1.0);
  // z = 0, patch D(0, 1/2): lhat = arctanh(1/2) and coth(lhat) = 2 exactly.
  LocalizationResult loc = localization_factor(disc, cv1(0), cv1(0), 0.5);
  REQUIRE(loc.usable);
  CHECK(loc.lhat == doctest::Approx(std::atanh(0.5)).epsilon(1e-14));
  CHECK(loc.factor == doctest::Approx(2.0).epsilon(1e-12));

  // Sandwich with both metrics exact: F_D <= F_U <= coth(lhat) F_D.
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto big = CanonicalDomain::unit_disc();
  int done = 0;
  while (done < 50) {
    Complex c(0.3 * u(rng), 0.3 * u(rng));
    double rho = 0.2 + 0.25 * std::abs(u(rng));
    if (std::abs(c) + rho > 0.95) continue;
    Complex z = c + 0.5 * rho * Complex(u(rng), u(rng));
    if (std::abs(z - c) >= 0.9 * rho || std::abs(z) >= 1.0) continue;
    ++done;
    LocalizationResult l = localization_factor(disc, cv1(z), cv1(c), rho);
    if (!l.usable) continue;
    double f_big = kobayashi_canonical(big, cv1(z), cv1(1)).value;
    // patch D(c, rho) metric via the scaled disc formula
    double f_patch = rho / (rho * rho - std::norm(z - c));
    CHECK(f_big <= f_patch * (1 + 1e-12));
    CHECK(f_patch <= l.factor * f_big * (1 + 1e-9));
  }

  // Patch radius growing to the enclosing radius sends the factor to 1.
  double prev = 1e9;
  for (double rho : {0.5, 0.7, 0.9, 0.999}) {
    LocalizationResult l = localization_factor(disc, cv1(0), cv1(0), rho);
    REQUIRE(l.usable);
    CHECK(l.factor <= prev + 1e-15);
    prev = l.factor;
  }
  CHECK(prev < 1.01);

  // z on the patch boundary: unusable certificate.
  LocalizationResult bad = localization_factor(disc, cv1(Complex(0.499999999, 0)), cv1(0), 0.5);
  CHECK_FALSE(bad.usable);
}

TEST_CASE("ball kobayashi distance") {
  CVector z = cv2(0, 0), w = cv2(0.5, 0);
  CHECK(ball_kobayashi_distance(1.0, z, w) == doctest::Approx(std::atanh(0.5)).epsilon(1e-13));
  // Scaling invariance: distance in B(0,2) of doubled points is the same.
  CHECK(ball_kobayashi_distance(2.0, 2 * z, 2 * w) ==
        doctest::Approx(std::atanh(0.5)).epsilon(1e-13));
}

TEST_CASE("homogeneity and unitary invariance of the ball formula") {
  auto ball = CanonicalDomain::ball(1.0);
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int t = 0; t < 20; ++t) {
    CVector z = cv2(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
    CVector x = cv2(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
    if (z.norm() > 0.9 || x.norm() < 1e-3) continue;
    double f = kobayashi_canonical(ball, z, x).value;
    CHECK(kobayashi_canonical(ball, z, 2.0 * x).value == doctest::Approx(2 * f).epsilon(1e-12));
    CHECK(kobayashi_canonical(ball, z, Complex(0, 1) * x).value ==
          doctest::Approx(f).epsilon(1e-12));
    CMatrix q = random_unitary(2, rng);
    CHECK(kobayashi_canonical(ball, q * z, q * x).value == doctest::Approx(f).epsilon(1e-12));
  }

  // Monotonicity under inclusion: B(1) inside B(2).
  auto ball2 = CanonicalDomain::ball(2.0);
  for (int t = 0; t < 10; ++t) {
    CVector z = cv2(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
    CVector x = cv2(1, Complex(u(rng), u(rng)));
    CHECK(kobayashi_canonical(ball2, z, x).value <=
          kobayashi_canonical(ball, z, x).value + 1e-12);
  }
}
