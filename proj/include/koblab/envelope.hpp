#pragma once

#include "koblab/geometry.hpp"

namespace koblab {

// Holomorphic normalization at a boundary point: translate p0 to the origin,
// rotate the outward normal onto +Re w_n, optionally remove the holomorphic
// Hessian by a quadratic shear in w_n, then rotate the tangential block.
// Frame coordinates: v = post * sigma(V^*(z - base)), with
// sigma(w) = (w_hat, w_n + w^T shear w).
struct LocalFrame {
  CVector base;
  CMatrix rotation;      // V, unitary
  double field_scale = 1.0;
  bool has_shear = false;
  CMatrix shear;         // symmetric n x n
  CMatrix post;          // unitary, identity unless the tangential block is rotated

  CVector world_to_frame(const CVector& z) const;
  CMatrix frame_jacobian(const CVector& z) const;  // d(frame)/dz
  CVector frame_to_world(const CVector& v) const;

  static LocalFrame plain(const CVector& base, const CMatrix& v, double scale);
};

// Certified envelope: the framed domain patch satisfies
//   Re v_n < a (|v_hat|^m + |v_n||v|)   on  B(0, r_model),
// so the patch includes holomorphically into the model cone domain.
struct EnvelopeParams {
  double m = 2.0;
  double a = 1.0;
  double r_model = 0.0;
  LocalFrame frame;
  double rho_patch = 0.0;  // world patch radius around base for localization
  double margin = 0.0;     // worst validation-grid slack (diagnostic)
  bool from_model_certificate = false;
  // True when the stronger form Re v_n < a |v_hat|^m holds (no |v_n||v| term),
  // as it does algebraically for the model factories.
  bool hat_only = false;
  double derivative_bound = 0.0;  // sampled Hessian (m=2) or third-order (m=3) constant
};

struct EnvelopeOptions {
  double eta = 0.1;         // headroom multiplier on the analytic slope
  int validation_samples = 20000;
  double levi_tolerance = 1e-8;  // admissible negativity for the m = 3 route
  double patch_radius = 0.0;     // 0: derive from the tubular radius
  uint64_t seed = 2;
};

struct EnvelopeError : std::runtime_error {
  explicit EnvelopeError(const std::string& what) : std::runtime_error(what) {}
};

EnvelopeParams envelope_fit(const DomainSpec& d, const CVector& p0, double m,
                            const EnvelopeOptions& opts = {});

// Envelope carried by a model-domain factory (algebraic certificate at the
// origin frame), usable without fitting.
EnvelopeParams envelope_from_model(const DomainSpec& d);

}  // namespace koblab
