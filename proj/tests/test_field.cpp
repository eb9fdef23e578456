#include "doctest.h"

#include <cmath>
#include <random>

#include "koblab/geometry.hpp"
#include "koblab/scalar_field.hpp"

using namespace koblab;

namespace {

ScalarFieldExpr saddle_field() {
  // Re z2 - |z1|^2
  return fe::field(2, fe::sum({fe::re(1), fe::scale(-1.0, fe::abs2(0))}));
}

CVector cv2(Complex a, Complex b) {
  CVector z(2);
  z << a, b;
  return z;
}

// Central finite differences of eval_field, the independent oracle for all
// derivative code.
RVector fd_gradient(const ScalarFieldExpr& f, const CVector& z, double h) {
  RVector x = to_real(z);
  RVector g(x.size());
  for (int i = 0; i < x.size(); ++i) {
    RVector xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (eval_field(f, to_complex(xp)) - eval_field(f, to_complex(xm))) / (2 * h);
  }
  return g;
}

RMatrix fd_hessian(const ScalarFieldExpr& f, const CVector& z, double h) {
  RVector x = to_real(z);
  const int m = static_cast<int>(x.size());
  RMatrix hess(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      RVector a = x, b = x, c = x, d = x;
      a[i] += h; a[j] += h;
      b[i] += h; b[j] -= h;
      c[i] -= h; c[j] += h;
      d[i] -= h; d[j] -= h;
      hess(i, j) = (eval_field(f, to_complex(a)) - eval_field(f, to_complex(b)) -
                    eval_field(f, to_complex(c)) + eval_field(f, to_complex(d))) /
                   (4 * h * h);
    }
  return hess;
}

}  // namespace

TEST_CASE("field evaluation matches direct substitution") {
  ScalarFieldExpr f = saddle_field();
  CHECK(eval_field(f, cv2(0, 0)) == doctest::Approx(0.0));
  CHECK(eval_field(f, cv2(1, 0)) == doctest::Approx(-1.0));

  DomainSpec ball = make_ball_domain(2, 1.0);
  CVector z(2);
  z << Complex(0.6, 0.0), Complex(0.0, 0.8);
  CHECK(eval_field(ball.field, z) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("field evaluation rejects dimension mismatch") {
  ScalarFieldExpr f = saddle_field();
  CVector z(3);
  z.setZero();
  CHECK_THROWS_AS(eval_field(f, z), std::invalid_argument);
}

TEST_CASE("wirtinger gradient closed forms") {
  // d(Re z1)/dz1 = 1/2
  ScalarFieldExpr f1 = fe::field(2, fe::re(0));
  CVector g = wirtinger_gradient(f1, cv2(Complex(0.3, -0.4), Complex(1, 2)));
  CHECK(std::abs(g[0] - Complex(0.5, 0.0)) < 1e-14);
  CHECK(std::abs(g[1]) < 1e-14);

  // d(|z1|^2)/dz1 = conj(z1)
  ScalarFieldExpr f2 = fe::field(2, fe::abs2(0));
  Complex c(0.7, 0.2);
  g = wirtinger_gradient(f2, cv2(c, 0));
  CHECK(std::abs(g[0] - std::conj(c)) < 1e-14);
  CHECK(std::abs(g[1]) < 1e-14);
}

TEST_CASE("wirtinger gradient agrees with the finite-difference oracle") {
  ScalarFieldExpr f = saddle_field();
  CVector z = cv2(Complex(1, 1), Complex(0, 0));
  CVector g = wirtinger_gradient(f, z);
  CHECK(std::abs(g[0] - Complex(-1, 1)) < 1e-12);  // -conj(1+i)
  CHECK(std::abs(g[1] - Complex(0.5, 0)) < 1e-12);

  RVector fd = fd_gradient(f, z, 1e-5);
  Jet1 jet = eval_field_grad(f, z);
  for (int i = 0; i < fd.size(); ++i)
    CHECK(jet.g[i] == doctest::Approx(fd[i]).epsilon(1e-6));
}

TEST_CASE("derivatives match finite differences at random interior points") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<ScalarFieldExpr> fields = {
      saddle_field(),
      make_ball_domain(2, 1.0).field,
      make_quartic_domain(2.0).field,
      fe::field(2, fe::sum({fe::ipow(fe::re(0), 3), fe::prod({fe::im(1), fe::abs2(0)}),
                            fe::absp(1, 3.0)})),
  };
  for (const auto& f : fields) {
    for (int t = 0; t < 20; ++t) {
      CVector z = cv2(Complex(u(rng), u(rng)), Complex(u(rng) - 0.7, u(rng)));
      Jet2 jet = eval_field_hess(f, z);
      if (jet.singular) continue;
      RVector fg = fd_gradient(f, z, 1e-5);
      RMatrix fh = fd_hessian(f, z, 1e-4);
      double gscale = std::max(1.0, fg.norm());
      double hscale = std::max(1.0, fh.norm());
      CHECK((RVector(jet.g) - fg).norm() / gscale < 1e-5);
      CHECK((RMatrix(jet.h) - fh).norm() / hscale < 1e-5);
    }
  }
}

TEST_CASE("odd modulus powers flag the singular locus") {
  ScalarFieldExpr f = fe::field(1, fe::absp(0, 3.0));
  CVector z(1);
  z << Complex(0, 0);
  Jet2 jet = eval_field_hess(f, z);
  CHECK(jet.singular);
  CHECK(jet.v == doctest::Approx(0.0));
  CHECK_THROWS_AS(wirtinger_gradient(f, z), std::domain_error);

  z << Complex(0.2, 0.1);
  jet = eval_field_hess(f, z);
  CHECK_FALSE(jet.singular);
}

TEST_CASE("levi form closed forms and hermitian symmetry") {
  // Re z2 + |z1|^2: Levi = diag(1, 0), restricted eigenvalue {1}
  ScalarFieldExpr bowl = fe::field(2, fe::sum({fe::re(1), fe::abs2(0)}));
  LeviData ld = levi_form(bowl, cv2(0, 0));
  CHECK(std::abs(ld.matrix(0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(ld.matrix(1, 1)) < 1e-14);
  REQUIRE(ld.restricted_eigenvalues.size() == 1);
  CHECK(ld.restricted_eigenvalues[0] == doctest::Approx(1.0));

  LeviData sd = levi_form(saddle_field(), cv2(0, 0));
  REQUIRE(sd.restricted_eigenvalues.size() == 1);
  CHECK(sd.restricted_eigenvalues[0] == doctest::Approx(-1.0));

  // Unit ball at (1, 0): identity matrix, restricted eigenvalues all 1.
  DomainSpec ball = make_ball_domain(2, 1.0);
  LeviData bd = levi_form(ball.field, cv2(1, 0));
  CHECK((bd.matrix - CMatrix::Identity(2, 2)).norm() < 1e-14);
  REQUIRE(bd.restricted_eigenvalues.size() == 1);
  CHECK(bd.restricted_eigenvalues[0] == doctest::Approx(1.0));

  // Hermitian within evaluation tolerance on a generic field.
  ScalarFieldExpr g = fe::field(2, fe::sum({fe::prod({fe::re(0), fe::im(1)}),
                                            fe::ipow(fe::im(0), 2), fe::absp(1, 4.0)}));
  LeviData gd = levi_form(g, cv2(Complex(0.3, 0.2), Complex(-0.1, 0.4)));
  CHECK((gd.matrix - gd.matrix.adjoint()).norm() < 1e-12);
}

TEST_CASE("levi form reports a degenerate gradient") {
  ScalarFieldExpr f = fe::field(2, fe::abs2(0));  // gradient vanishes at 0
  LeviData ld = levi_form(f, cv2(0, 0));
  CHECK(ld.gradient_degenerate);
  CHECK(ld.restricted_eigenvalues.empty());
}

TEST_CASE("linear composition evaluates the rotated field") {
  DomainSpec ball = make_ball_domain(2, 1.0);
  std::mt19937_64 rng(7);
  CMatrix u = random_unitary(2, rng);
  DomainSpec rot = transform_domain(ball, u);
  CVector z = cv2(Complex(0.3, 0.1), Complex(-0.2, 0.4));
  CHECK(eval_field(rot.field, u * z) == doctest::Approx(eval_field(ball.field, z)).epsilon(1e-12));
  Jet2 a = eval_field_hess(rot.field, u * z);
  Jet2 b = eval_field_hess(ball.field, z);
  CHECK(a.v == doctest::Approx(b.v));
  CHECK(a.g.norm() == doctest::Approx(b.g.norm()).epsilon(1e-10));  // unitary preserves norms
}
