#include "koblab/holomap.hpp"

#include <cmath>
#include <stdexcept>

namespace koblab {

namespace {

struct CJet {
  Complex v;
  CVector d;  // derivative w.r.t. each input variable
};

CJet jet_rec(const MapNode& n, const CVector& z) {
  using K = MapNode::Kind;
  const int m = static_cast<int>(z.size());
  CJet out{Complex(0, 0), CVector::Zero(m)};
  switch (n.kind) {
    case K::Constant:
      out.v = n.cval;
      return out;
    case K::Var:
      out.v = z[n.var];
      out.d[n.var] = 1.0;
      return out;
    case K::Sum:
      for (const auto& k : n.kids) {
        CJet a = jet_rec(*k, z);
        out.v += a.v;
        out.d += a.d;
      }
      return out;
    case K::Product: {
      out.v = 1.0;
      bool first = true;
      for (const auto& k : n.kids) {
        CJet a = jet_rec(*k, z);
        if (first) {
          out = a;
          first = false;
          continue;
        }
        out.d = out.d * a.v + a.d * out.v;
        out.v *= a.v;
      }
      return out;
    }
    case K::IntPow: {
      CJet a = jet_rec(*n.kids[0], z);
      if (n.ipow == 0) {
        out.v = 1.0;
        return out;
      }
      Complex um1 = std::pow(a.v, n.ipow - 1);
      out.v = um1 * a.v;
      out.d = double(n.ipow) * um1 * a.d;
      return out;
    }
    case K::Quotient: {
      CJet num = jet_rec(*n.kids[0], z);
      CJet den = jet_rec(*n.kids[1], z);
      if (std::abs(den.v) < 1e-14)
        throw std::domain_error("holomorphic map: denominator vanishes at evaluation point");
      out.v = num.v / den.v;
      out.d = (num.d - out.v * den.d) / den.v;
      return out;
    }
  }
  return out;
}

Complex value_rec(const MapNode& n, const CVector& z) {
  using K = MapNode::Kind;
  switch (n.kind) {
    case K::Constant: return n.cval;
    case K::Var: return z[n.var];
    case K::Sum: {
      Complex s = 0;
      for (const auto& k : n.kids) s += value_rec(*k, z);
      return s;
    }
    case K::Product: {
      Complex s = 1;
      for (const auto& k : n.kids) s *= value_rec(*k, z);
      return s;
    }
    case K::IntPow: return std::pow(value_rec(*n.kids[0], z), n.ipow);
    case K::Quotient: {
      Complex den = value_rec(*n.kids[1], z);
      if (std::abs(den) < 1e-14)
        throw std::domain_error("holomorphic map: denominator vanishes at evaluation point");
      return value_rec(*n.kids[0], z) / den;
    }
  }
  return 0;
}

}  // namespace

CVector map_eval(const HoloMapSpec& m, const CVector& z) {
  if (static_cast<int>(z.size()) != m.dim_in)
    throw std::invalid_argument("map_eval: dimension mismatch");
  CVector w(m.dim_out);
  for (int i = 0; i < m.dim_out; ++i) w[i] = value_rec(*m.components[i], z);
  return w;
}

CMatrix map_jacobian(const HoloMapSpec& m, const CVector& z) {
  if (static_cast<int>(z.size()) != m.dim_in)
    throw std::invalid_argument("map_jacobian: dimension mismatch");
  CMatrix j(m.dim_out, m.dim_in);
  for (int i = 0; i < m.dim_out; ++i) {
    CJet a = jet_rec(*m.components[i], z);
    j.row(i) = a.d.transpose();
  }
  return j;
}

namespace hm {

namespace {
MapPtr make(MapNode n) { return std::make_shared<const MapNode>(std::move(n)); }
}  // namespace

MapPtr constant(Complex c) {
  MapNode n;
  n.kind = MapNode::Kind::Constant;
  n.cval = c;
  return make(std::move(n));
}

MapPtr var(int j) {
  MapNode n;
  n.kind = MapNode::Kind::Var;
  n.var = j;
  return make(std::move(n));
}

MapPtr sum(std::vector<MapPtr> kids) {
  MapNode n;
  n.kind = MapNode::Kind::Sum;
  n.kids = std::move(kids);
  return make(std::move(n));
}

MapPtr prod(std::vector<MapPtr> kids) {
  MapNode n;
  n.kind = MapNode::Kind::Product;
  n.kids = std::move(kids);
  return make(std::move(n));
}

MapPtr ipow(MapPtr base, int k) {
  if (k < 0) throw std::invalid_argument("map ipow: negative exponent");
  MapNode n;
  n.kind = MapNode::Kind::IntPow;
  n.ipow = k;
  n.kids = {std::move(base)};
  return make(std::move(n));
}

MapPtr quot(MapPtr num, MapPtr den) {
  MapNode n;
  n.kind = MapNode::Kind::Quotient;
  n.kids = {std::move(num), std::move(den)};
  return make(std::move(n));
}

MapPtr scale(Complex c, MapPtr a) { return prod({constant(c), std::move(a)}); }

}  // namespace hm

HoloMapSpec identity_map(int n) {
  HoloMapSpec m;
  m.dim_in = m.dim_out = n;
  for (int j = 0; j < n; ++j) m.components.push_back(hm::var(j));
  return m;
}

HoloMapSpec linear_map(const CMatrix& u) {
  HoloMapSpec m;
  m.dim_in = static_cast<int>(u.cols());
  m.dim_out = static_cast<int>(u.rows());
  for (int i = 0; i < m.dim_out; ++i) {
    std::vector<MapPtr> terms;
    for (int j = 0; j < m.dim_in; ++j) terms.push_back(hm::scale(u(i, j), hm::var(j)));
    m.components.push_back(hm::sum(std::move(terms)));
  }
  return m;
}

HoloMapSpec ball_automorphism(const CVector& a) {
  const int n = static_cast<int>(a.size());
  double a2 = a.squaredNorm();
  if (a2 >= 1.0) throw std::invalid_argument("ball_automorphism: |a| must be < 1");
  HoloMapSpec m;
  m.dim_in = m.dim_out = n;
  if (a2 < 1e-30) {
    for (int j = 0; j < n; ++j) m.components.push_back(hm::scale(-1.0, hm::var(j)));
    return m;
  }
  double s = std::sqrt(1.0 - a2);
  // <z, a> as a holomorphic linear form
  std::vector<MapPtr> ip_terms;
  for (int j = 0; j < n; ++j) ip_terms.push_back(hm::scale(std::conj(a[j]), hm::var(j)));
  MapPtr za = hm::sum(std::move(ip_terms));
  MapPtr den = hm::sum({hm::constant(1.0), hm::scale(-1.0, za)});
  for (int j = 0; j < n; ++j) {
    // phi_j = (a_j - P_j - s (z_j - P_j)) / (1 - <z,a>), with P the projection
    // of z onto the a-line: P_j = (<z,a>/|a|^2) a_j.
    MapPtr pj = hm::scale(a[j] / a2, za);
    MapPtr num = hm::sum({hm::constant(a[j]), hm::scale(-1.0, pj),
                          hm::scale(-s, hm::sum({hm::var(j), hm::scale(-1.0, pj)}))});
    m.components.push_back(hm::quot(num, den));
  }
  return m;
}

}  // namespace koblab
