#pragma once

#include <complex>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace koblab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// Real derivative containers sized 2n, interleaved (x_1, y_1, ..., x_n, y_n).
// Stack-allocated up to n = 8.
using GradVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 16, 1>;
using HessMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 16, 16>;

// Hermitian pairing <u, v> = sum u_j conj(v_j).
inline Complex herm(const CVector& u, const CVector& v) {
  Complex s = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) s += u[j] * std::conj(v[j]);
  return s;
}

// Bilinear pairing <u, v> = sum u_j v_j (no conjugation); this is the pairing
// used for <dr(z), X> with a Wirtinger gradient.
inline Complex cpair(const CVector& u, const CVector& v) {
  Complex s = 0.0;
  for (Eigen::Index j = 0; j < u.size(); ++j) s += u[j] * v[j];
  return s;
}

// Interleaved real representation of a complex vector and back.
inline RVector to_real(const CVector& z) {
  RVector x(2 * z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    x[2 * j] = z[j].real();
    x[2 * j + 1] = z[j].imag();
  }
  return x;
}

inline CVector to_complex(const RVector& x) {
  if (x.size() % 2 != 0) throw std::invalid_argument("to_complex: odd length");
  CVector z(x.size() / 2);
  for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = Complex(x[2 * j], x[2 * j + 1]);
  return z;
}

inline CVector unit_vector(int n, int j) {
  CVector e = CVector::Zero(n);
  e[j] = 1.0;
  return e;
}

// Unitary with prescribed last column (|a| = 1 required); remaining columns
// complete an orthonormal basis via Householder QR.
inline CMatrix unitary_with_last_column(const CVector& a) {
  const int n = static_cast<int>(a.size());
  if (std::abs(a.norm() - 1.0) > 1e-10)
    throw std::invalid_argument("unitary_with_last_column: column not unit");
  // Gram-Schmidt the identity columns against a, dropping the most aligned one.
  int drop = 0;
  double best = -1.0;
  for (int j = 0; j < n; ++j) {
    double c = std::abs(a[j]);
    if (c > best) { best = c; drop = j; }
  }
  CMatrix q(n, n);
  q.col(n - 1) = a;
  int out = 0;
  for (int j = 0; j < n; ++j) {
    if (j == drop) continue;
    CVector v = CVector::Zero(n);
    v[j] = 1.0;
    v -= herm(v, q.col(n - 1)) * q.col(n - 1);
    for (int k = 0; k < out; ++k) v -= herm(v, q.col(k)) * q.col(k);
    double nv = v.norm();
    if (nv < 1e-12) throw std::runtime_error("unitary_with_last_column: degenerate basis");
    q.col(out++) = v / nv;
  }
  return q;
}

inline CMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMatrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<CMatrix> qr(a);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    Complex d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

}  // namespace koblab
