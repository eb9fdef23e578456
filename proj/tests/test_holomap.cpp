#include "doctest.h"

#include <cmath>
#include <random>

#include "koblab/holomap.hpp"

using namespace koblab;

namespace {

// Central-difference Jacobian oracle (independent of the jet propagation).
CMatrix fd_jacobian(const HoloMapSpec& m, const CVector& z, double h) {
  CMatrix j(m.dim_out, m.dim_in);
  for (int k = 0; k < m.dim_in; ++k) {
    CVector zp = z, zm = z;
    zp[k] += h;
    zm[k] -= h;
    CVector dre = (map_eval(m, zp) - map_eval(m, zm)) / (2 * h);
    zp = z; zm = z;
    zp[k] += Complex(0, h);
    zm[k] -= Complex(0, h);
    CVector dim = (map_eval(m, zp) - map_eval(m, zm)) / (2 * h);
    // holomorphic: d/dz = (d/dx - i d/dy)/2
    j.col(k) = 0.5 * (dre - Complex(0, 1) * dim);
  }
  return j;
}

}  // namespace

TEST_CASE("map evaluation and jacobian on polynomials and quotients") {
  // w = (z1^2 + 2 z2, z1 / (1 + z2))
  HoloMapSpec m;
  m.dim_in = m.dim_out = 2;
  m.components = {
      hm::sum({hm::ipow(hm::var(0), 2), hm::scale(2.0, hm::var(1))}),
      hm::quot(hm::var(0), hm::sum({hm::constant(1.0), hm::var(1)})),
  };
  CVector z(2);
  z << Complex(0.3, 0.1), Complex(-0.2, 0.4);
  CVector w = map_eval(m, z);
  CHECK(std::abs(w[0] - (z[0] * z[0] + 2.0 * z[1])) < 1e-14);
  CHECK(std::abs(w[1] - z[0] / (1.0 + z[1])) < 1e-14);

  CMatrix j = map_jacobian(m, z);
  CMatrix fd = fd_jacobian(m, z, 1e-6);
  CHECK((j - fd).norm() / fd.norm() < 1e-6);
}

TEST_CASE("quotient with vanishing denominator reports an error") {
  HoloMapSpec m;
  m.dim_in = m.dim_out = 1;
  m.components = {hm::quot(hm::constant(1.0), hm::var(0))};
  CVector z(1);
  z << Complex(0, 0);
  CHECK_THROWS_AS(map_eval(m, z), std::domain_error);
}

TEST_CASE("ball automorphism maps the ball to itself and swaps 0 and a") {
  CVector a(2);
  a << Complex(0.3, 0), Complex(0, 0);
  HoloMapSpec phi = ball_automorphism(a);

  CVector zero = CVector::Zero(2);
  CHECK((map_eval(phi, zero) - a).norm() < 1e-13);
  CHECK(map_eval(phi, a).norm() < 1e-13);

  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int t = 0; t < 50; ++t) {
    CVector z(2);
    z << Complex(u(rng), u(rng)), Complex(u(rng), u(rng));
    if (z.norm() >= 0.999) continue;
    CVector w = map_eval(phi, z);
    CHECK(w.norm() < 1.0 + 1e-12);
    // involution: phi(phi(z)) = z
    CHECK((map_eval(phi, w) - z).norm() < 1e-10);
  }

  CMatrix j = map_jacobian(phi, 0.3 * CVector::Ones(2));
  CMatrix fd = fd_jacobian(phi, 0.3 * CVector::Ones(2), 1e-6);
  CHECK((j - fd).norm() / fd.norm() < 1e-6);
}
