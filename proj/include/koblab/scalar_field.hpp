#pragma once

#include <memory>
#include <string>
#include <vector>

#include "koblab/linalg.hpp"

namespace koblab {

// Expression tree for a real-valued function of z in C^n, written in the
// real coordinates x_1, y_1, ..., x_n, y_n. Leaves address coordinates of a
// single complex variable z_j (1-based j in the text format, 0-based here).
struct FieldNode {
  enum class Kind {
    Constant,   // cval
    Re,         // Re z_j
    Im,         // Im z_j
    Abs2,       // |z_j|^2
    Norm,       // |z| (euclidean norm of the full vector)
    AbsPow,     // |z_j|^m, real m >= 1
    Sum,        // children
    Product,    // children
    IntPow,     // child ^ ipow, integer ipow >= 0
    ComposeLinear,  // child evaluated at M z + b
  };

  Kind kind = Kind::Constant;
  double cval = 0.0;
  int var = 0;     // coordinate index j for Re/Im/Abs2/AbsPow
  double mpow = 0; // exponent for AbsPow
  int ipow = 0;    // exponent for IntPow
  std::vector<std::shared_ptr<const FieldNode>> kids;
  CMatrix lin_map;   // ComposeLinear
  CVector lin_shift; // ComposeLinear
};

using FieldPtr = std::shared_ptr<const FieldNode>;

struct ScalarFieldExpr {
  int dim = 0;  // number of complex variables
  FieldPtr root;
};

// value + first derivatives (2n real gradient, interleaved)
struct Jet1 {
  double v = 0.0;
  GradVec g;
  bool singular = false;
};

// value + first + second derivatives
struct Jet2 {
  double v = 0.0;
  GradVec g;
  HessMat h;
  bool singular = false;
};

double eval_field(const ScalarFieldExpr& f, const CVector& z);
Jet1 eval_field_grad(const ScalarFieldExpr& f, const CVector& z);
Jet2 eval_field_hess(const ScalarFieldExpr& f, const CVector& z);

std::string field_to_text(const ScalarFieldExpr& f);

namespace fe {

FieldPtr constant(double c);
FieldPtr re(int j);
FieldPtr im(int j);
FieldPtr abs2(int j);
FieldPtr absp(int j, double m);
FieldPtr norm();
FieldPtr sum(std::vector<FieldPtr> kids);
FieldPtr prod(std::vector<FieldPtr> kids);
FieldPtr ipow(FieldPtr base, int k);
FieldPtr scale(double c, FieldPtr a);
// Evaluates `inner` (a field over m variables) at M z + b.
FieldPtr compose_linear(FieldPtr inner, const CMatrix& m, const CVector& b);

inline ScalarFieldExpr field(int dim, FieldPtr root) { return ScalarFieldExpr{dim, std::move(root)}; }

}  // namespace fe

}  // namespace koblab
