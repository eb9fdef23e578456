#include "koblab/scalar_field.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace koblab {

namespace {

constexpr double kOriginTol = 1e-300;

bool is_even_integer(double m) {
  double r = std::round(m / 2.0);
  return std::abs(m - 2.0 * r) < 1e-12;
}

double value_rec(const FieldNode& n, const CVector& z) {
  using K = FieldNode::Kind;
  switch (n.kind) {
    case K::Constant: return n.cval;
    case K::Re: return z[n.var].real();
    case K::Im: return z[n.var].imag();
    case K::Abs2: return std::norm(z[n.var]);
    case K::Norm: return z.norm();
    case K::AbsPow: return std::pow(std::abs(z[n.var]), n.mpow);
    case K::Sum: {
      double s = 0;
      for (const auto& k : n.kids) s += value_rec(*k, z);
      return s;
    }
    case K::Product: {
      double s = 1;
      for (const auto& k : n.kids) s *= value_rec(*k, z);
      return s;
    }
    case K::IntPow: return std::pow(value_rec(*n.kids[0], z), n.ipow);
    case K::ComposeLinear: {
      CVector w = n.lin_map * z + n.lin_shift;
      return value_rec(*n.kids[0], w);
    }
  }
  return 0;
}

// Real 2p x 2n Jacobian of the complex-linear map z -> M z + b.
RMatrix real_jacobian(const CMatrix& m) {
  RMatrix j(2 * m.rows(), 2 * m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      j(2 * r, 2 * c) = m(r, c).real();
      j(2 * r, 2 * c + 1) = -m(r, c).imag();
      j(2 * r + 1, 2 * c) = m(r, c).imag();
      j(2 * r + 1, 2 * c + 1) = m(r, c).real();
    }
  return j;
}

Jet2 jet2_rec(const FieldNode& n, const CVector& z, bool want_hess) {
  using K = FieldNode::Kind;
  const int d2 = 2 * static_cast<int>(z.size());
  Jet2 out;
  out.g = GradVec::Zero(d2);
  if (want_hess) out.h = HessMat::Zero(d2, d2);
  switch (n.kind) {
    case K::Constant:
      out.v = n.cval;
      return out;
    case K::Re:
      out.v = z[n.var].real();
      out.g[2 * n.var] = 1.0;
      return out;
    case K::Im:
      out.v = z[n.var].imag();
      out.g[2 * n.var + 1] = 1.0;
      return out;
    case K::Abs2: {
      double x = z[n.var].real(), y = z[n.var].imag();
      out.v = x * x + y * y;
      out.g[2 * n.var] = 2 * x;
      out.g[2 * n.var + 1] = 2 * y;
      if (want_hess) {
        out.h(2 * n.var, 2 * n.var) = 2.0;
        out.h(2 * n.var + 1, 2 * n.var + 1) = 2.0;
      }
      return out;
    }
    case K::Norm: {
      double t = z.squaredNorm();
      double v = std::sqrt(t);
      out.v = v;
      if (v < 1e-14) {
        out.singular = true;
        return out;
      }
      GradVec r = GradVec::Zero(d2);
      for (int j = 0; j < static_cast<int>(z.size()); ++j) {
        r[2 * j] = z[j].real();
        r[2 * j + 1] = z[j].imag();
      }
      out.g = r / v;
      if (want_hess) {
        out.h = HessMat::Identity(d2, d2) / v - (r * r.transpose()) / (v * t);
      }
      return out;
    }
    case K::AbsPow: {
      double x = z[n.var].real(), y = z[n.var].imag();
      double t = x * x + y * y;
      double m = n.mpow;
      out.v = std::pow(t, m / 2.0);
      if (t < kOriginTol) {
        // One-sided values at the singular locus; flagged unless the power is
        // an even integer (then the function is a polynomial in |z_j|^2).
        out.v = 0.0;
        if (!is_even_integer(m)) out.singular = true;
        if (want_hess && std::abs(m - 2.0) < 1e-12) {
          out.h(2 * n.var, 2 * n.var) = 2.0;
          out.h(2 * n.var + 1, 2 * n.var + 1) = 2.0;
        }
        return out;
      }
      double p1 = m * std::pow(t, m / 2.0 - 1.0);
      out.g[2 * n.var] = p1 * x;
      out.g[2 * n.var + 1] = p1 * y;
      if (want_hess) {
        double p2 = m * (m - 2.0) * std::pow(t, m / 2.0 - 2.0);
        out.h(2 * n.var, 2 * n.var) = p1 + p2 * x * x;
        out.h(2 * n.var + 1, 2 * n.var + 1) = p1 + p2 * y * y;
        out.h(2 * n.var, 2 * n.var + 1) = p2 * x * y;
        out.h(2 * n.var + 1, 2 * n.var) = p2 * x * y;
      }
      return out;
    }
    case K::Sum: {
      for (const auto& k : n.kids) {
        Jet2 a = jet2_rec(*k, z, want_hess);
        out.v += a.v;
        out.g += a.g;
        if (want_hess) out.h += a.h;
        out.singular = out.singular || a.singular;
      }
      return out;
    }
    case K::Product: {
      out.v = 1.0;
      bool first = true;
      for (const auto& k : n.kids) {
        Jet2 a = jet2_rec(*k, z, want_hess);
        out.singular = out.singular || a.singular;
        if (first) {
          out.v = a.v;
          out.g = a.g;
          if (want_hess) out.h = a.h;
          first = false;
          continue;
        }
        if (want_hess) {
          out.h = out.h * a.v + a.h * out.v + out.g * a.g.transpose() +
                  a.g * out.g.transpose();
        }
        GradVec g = out.g * a.v + a.g * out.v;
        out.g = g;
        out.v *= a.v;
      }
      return out;
    }
    case K::IntPow: {
      Jet2 a = jet2_rec(*n.kids[0], z, want_hess);
      out.singular = a.singular;
      int k = n.ipow;
      if (k == 0) {
        out.v = 1.0;
        return out;
      }
      double um1 = std::pow(a.v, k - 1);
      out.v = um1 * a.v;
      out.g = k * um1 * a.g;
      if (want_hess) {
        double um2 = (k >= 2) ? std::pow(a.v, k - 2) : 0.0;
        out.h = k * um1 * a.h + double(k) * (k - 1) * um2 * (a.g * a.g.transpose());
      }
      return out;
    }
    case K::ComposeLinear: {
      CVector w = n.lin_map * z + n.lin_shift;
      Jet2 a = jet2_rec(*n.kids[0], w, want_hess);
      RMatrix j = real_jacobian(n.lin_map);
      out.v = a.v;
      out.singular = a.singular;
      out.g = j.transpose() * a.g;
      if (want_hess) out.h = j.transpose() * a.h * j;
      return out;
    }
  }
  return out;
}

void check_dim(const ScalarFieldExpr& f, const CVector& z) {
  if (static_cast<int>(z.size()) != f.dim)
    throw std::invalid_argument("field evaluation: dimension mismatch (point has " +
                                std::to_string(z.size()) + " entries, field expects " +
                                std::to_string(f.dim) + ")");
}

void to_text_rec(const FieldNode& n, std::ostringstream& os) {
  using K = FieldNode::Kind;
  switch (n.kind) {
    case K::Constant: os << "(const " << n.cval << ")"; return;
    case K::Re: os << "(re " << n.var + 1 << ")"; return;
    case K::Im: os << "(im " << n.var + 1 << ")"; return;
    case K::Abs2: os << "(abs2 " << n.var + 1 << ")"; return;
    case K::Norm: os << "(norm)"; return;
    case K::AbsPow: os << "(absp " << n.var + 1 << " " << n.mpow << ")"; return;
    case K::Sum:
      os << "(+";
      for (const auto& k : n.kids) { os << " "; to_text_rec(*k, os); }
      os << ")";
      return;
    case K::Product:
      os << "(*";
      for (const auto& k : n.kids) { os << " "; to_text_rec(*k, os); }
      os << ")";
      return;
    case K::IntPow:
      os << "(^ ";
      to_text_rec(*n.kids[0], os);
      os << " " << n.ipow << ")";
      return;
    case K::ComposeLinear:
      os << "(composed)";
      return;
  }
}

}  // namespace

double eval_field(const ScalarFieldExpr& f, const CVector& z) {
  check_dim(f, z);
  return value_rec(*f.root, z);
}

Jet1 eval_field_grad(const ScalarFieldExpr& f, const CVector& z) {
  check_dim(f, z);
  Jet2 a = jet2_rec(*f.root, z, false);
  return Jet1{a.v, a.g, a.singular};
}

Jet2 eval_field_hess(const ScalarFieldExpr& f, const CVector& z) {
  check_dim(f, z);
  return jet2_rec(*f.root, z, true);
}

std::string field_to_text(const ScalarFieldExpr& f) {
  std::ostringstream os;
  to_text_rec(*f.root, os);
  return os.str();
}

namespace fe {

namespace {
FieldPtr make(FieldNode n) { return std::make_shared<const FieldNode>(std::move(n)); }
}  // namespace

FieldPtr constant(double c) {
  FieldNode n;
  n.kind = FieldNode::Kind::Constant;
  n.cval = c;
  return make(std::move(n));
}

FieldPtr re(int j) {
  FieldNode n;
  n.kind = FieldNode::Kind::Re;
  n.var = j;
  return make(std::move(n));
}

FieldPtr im(int j) {
  FieldNode n;
  n.kind = FieldNode::Kind::Im;
  n.var = j;
  return make(std::move(n));
}

FieldPtr abs2(int j) {
  FieldNode n;
  n.kind = FieldNode::Kind::Abs2;
  n.var = j;
  return make(std::move(n));
}

FieldPtr absp(int j, double m) {
  if (m < 1.0) throw std::invalid_argument("absp: exponent must be >= 1");
  FieldNode n;
  n.kind = FieldNode::Kind::AbsPow;
  n.var = j;
  n.mpow = m;
  return make(std::move(n));
}

FieldPtr norm() {
  FieldNode n;
  n.kind = FieldNode::Kind::Norm;
  return make(std::move(n));
}

FieldPtr sum(std::vector<FieldPtr> kids) {
  FieldNode n;
  n.kind = FieldNode::Kind::Sum;
  n.kids = std::move(kids);
  return make(std::move(n));
}

FieldPtr prod(std::vector<FieldPtr> kids) {
  FieldNode n;
  n.kind = FieldNode::Kind::Product;
  n.kids = std::move(kids);
  return make(std::move(n));
}

FieldPtr ipow(FieldPtr base, int k) {
  if (k < 0) throw std::invalid_argument("ipow: negative exponent");
  FieldNode n;
  n.kind = FieldNode::Kind::IntPow;
  n.ipow = k;
  n.kids = {std::move(base)};
  return make(std::move(n));
}

FieldPtr scale(double c, FieldPtr a) { return prod({constant(c), std::move(a)}); }

FieldPtr compose_linear(FieldPtr inner, const CMatrix& m, const CVector& b) {
  FieldNode n;
  n.kind = FieldNode::Kind::ComposeLinear;
  n.kids = {std::move(inner)};
  n.lin_map = m;
  n.lin_shift = b;
  return make(std::move(n));
}

}  // namespace fe

}  // namespace koblab
