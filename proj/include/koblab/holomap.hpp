#pragma once

#include <memory>
#include <vector>

#include "koblab/linalg.hpp"

namespace koblab {

// Expression tree for one component of a holomorphic map: polynomials and
// quotients with declared nonvanishing denominators, over variables z_1..z_n.
struct MapNode {
  enum class Kind { Constant, Var, Sum, Product, IntPow, Quotient };
  Kind kind = Kind::Constant;
  Complex cval;
  int var = 0;
  int ipow = 0;
  std::vector<std::shared_ptr<const MapNode>> kids;
};

using MapPtr = std::shared_ptr<const MapNode>;

struct HoloMapSpec {
  int dim_in = 0;
  int dim_out = 0;
  std::vector<MapPtr> components;
};

CVector map_eval(const HoloMapSpec& m, const CVector& z);
// Complex Jacobian, dim_out x dim_in.
CMatrix map_jacobian(const HoloMapSpec& m, const CVector& z);

namespace hm {

MapPtr constant(Complex c);
MapPtr var(int j);
MapPtr sum(std::vector<MapPtr> kids);
MapPtr prod(std::vector<MapPtr> kids);
MapPtr ipow(MapPtr base, int k);
MapPtr quot(MapPtr num, MapPtr den);
MapPtr scale(Complex c, MapPtr a);

}  // namespace hm

HoloMapSpec identity_map(int n);
HoloMapSpec linear_map(const CMatrix& u);
// Moebius automorphism of the unit ball exchanging 0 and a.
HoloMapSpec ball_automorphism(const CVector& a);

}  // namespace koblab
