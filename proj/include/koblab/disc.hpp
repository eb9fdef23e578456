#pragma once

#include <memory>
#include <string>

#include "koblab/canonical.hpp"
#include "koblab/domain.hpp"

namespace koblab {

// Polynomial analytic disc Phi(zeta) = sum_d a_d zeta^d, rows of `coeffs`.
struct AnalyticDisc {
  CMatrix coeffs;  // (degree+1) x n

  static AnalyticDisc linear(const CVector& center, const CVector& a1);

  int degree() const { return static_cast<int>(coeffs.rows()) - 1; }
  int dim() const { return static_cast<int>(coeffs.cols()); }
  CVector center() const { return coeffs.row(0).transpose(); }
  CVector deriv_origin() const { return coeffs.row(1).transpose(); }

  CVector eval(Complex zeta) const;
  CVector deriv(Complex zeta) const;

  double tail_norm() const;         // sum_{d>=1} ||a_d||
  double deriv_sup() const;         // bound for sup_{|zeta|<=1} ||Phi'||
  double second_deriv_sup() const;  // bound for sup ||Phi''||

  // Precomposition with zeta -> s zeta.
  AnalyticDisc scaled_parameter(double s) const;
};

struct ContainmentResult {
  bool ok = false;
  double margin = 0.0;       // sup of the violation is <= -margin when ok
  double max_sampled = 0.0;  // largest violation seen at any sample
  long evaluations = 0;
  bool inconclusive = false; // refinement budget exhausted without a verdict
};

enum class CertLevel { Certify, Recheck };

// Containment oracle used by the disc optimizer: a domain that can certify
// Phi(closed unit disc) inside itself with a positive margin.
class DiscDomain {
 public:
  virtual ~DiscDomain() = default;
  virtual int dim() const = 0;
  virtual std::string name() const = 0;
  virtual bool is_interior(const CVector& z) const = 0;
  // Lower bound for the distance from an interior point to the boundary.
  virtual double interior_distance_lower(const CVector& z) const = 0;
  // Sound certificate (grid + Lipschitz/curvature margins, adaptive).
  virtual ContainmentResult certify(const AnalyticDisc& d, CertLevel level) const = 0;
  // Cheap screen: max sampled violation on a coarse grid, no soundness claim.
  virtual double sample_max(const AnalyticDisc& d) const = 0;
};

class ExprDiscDomain : public DiscDomain {
 public:
  explicit ExprDiscDomain(DomainSpec spec);
  int dim() const override { return spec_.dim; }
  std::string name() const override { return spec_.name; }
  bool is_interior(const CVector& z) const override;
  double interior_distance_lower(const CVector& z) const override;
  ContainmentResult certify(const AnalyticDisc& d, CertLevel level) const override;
  double sample_max(const AnalyticDisc& d) const override;
  const DomainSpec& spec() const { return spec_; }

 private:
  DomainSpec spec_;
  bool curvature_ok_;  // second-order margins only for C^2 expression trees
};

// Complement of a segment, clipped to a ball: image must avoid the segment
// and stay inside the enclosing ball.
class SlitDiscDomain : public DiscDomain {
 public:
  SlitDiscDomain(Complex a, Complex b, double enclosing_radius);
  int dim() const override { return 1; }
  std::string name() const override { return "slit-complement"; }
  bool is_interior(const CVector& z) const override;
  double interior_distance_lower(const CVector& z) const override;
  ContainmentResult certify(const AnalyticDisc& d, CertLevel level) const override;
  double sample_max(const AnalyticDisc& d) const override;

 private:
  Complex a_, b_;
  double radius_;
};

class PolydiscDiscDomain : public DiscDomain {
 public:
  explicit PolydiscDiscDomain(std::vector<double> radii);
  int dim() const override { return static_cast<int>(radii_.size()); }
  std::string name() const override { return "polydisc"; }
  bool is_interior(const CVector& z) const override;
  double interior_distance_lower(const CVector& z) const override;
  ContainmentResult certify(const AnalyticDisc& d, CertLevel level) const override;
  double sample_max(const AnalyticDisc& d) const override;

 private:
  std::vector<double> radii_;
};

// Certified containment of the disc image in { r < 0 } cap B(0, R_enc).
ContainmentResult certify_disc_containment(const DomainSpec& spec, const AnalyticDisc& d,
                                           CertLevel level = CertLevel::Certify);

// True when every node of the tree has locally bounded second derivatives
// (no |z| or first-power modulus terms), so curvature-based margins apply.
bool field_is_c2(const ScalarFieldExpr& f);

}  // namespace koblab
