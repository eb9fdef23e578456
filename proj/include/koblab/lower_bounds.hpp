#pragma once

#include <map>
#include <string>

#include "koblab/canonical.hpp"
#include "koblab/envelope.hpp"

namespace koblab {

enum class LowerCertificateKind { SlitReduction, ContractionMap, Localized };

std::string certificate_name(LowerCertificateKind k);

struct LowerBound {
  bool ok = false;
  std::string error;
  double value = 0.0;
  LowerCertificateKind kind = LowerCertificateKind::SlitReduction;
  double localization = 1.0;  // tanh(lhat) multiplier already applied
  std::map<std::string, double> params;
};

// Cone lower bound for the framed model domain: the competitor disc's normal
// coordinate, rescaled by c delta^{1/m}, avoids the ray { Re w >= delta },
// giving F >= c delta^{1/m} |X_n| / (8 dist(z_n, ray)).
LowerBound normal_slice_lower_bound(const EnvelopeParams& env, const CVector& z,
                                    const CVector& x, double cone_k = 0.9);

// Sharper exponent 1 - 1/(2m) for directions with |X| <= K |X_n|: the ray is
// pushed to delta + (lambda |X|)^m delta^{1/2} and the admissible lambda is
// the smallest fixed point of the resulting implicit inequality.
LowerBound tangential_weighted_lower_bound(const EnvelopeParams& env, const CVector& z,
                                           const CVector& x, double direction_cap_k,
                                           double cone_k = 0.9);

struct PipelineOptions {
  double cone_k = 0.9;
  double direction_cap_k = 0.0;  // 0: normal-component route only
  EnvelopeOptions envelope;
};

// Full near-boundary pipeline: boundary projection, quadratic envelope,
// cone bound in the patch, Royden localization. Exponent 1/2.
LowerBound normal_estimate_c11(const DomainSpec& d, const CVector& z, const CVector& x,
                               const PipelineOptions& opts = {});

// Same pipeline with the cubic envelope on pseudoconvex C^3 domains.
// Exponent 2/3.
LowerBound pseudoconvex_lower_bound(const DomainSpec& d, const CVector& z, const CVector& x,
                                    const PipelineOptions& opts = {});

// Pipeline with a caller-provided envelope (avoids refitting inside sweeps).
LowerBound localized_cone_lower_bound(const DomainSpec& d, const EnvelopeParams& env,
                                      const CVector& z, const CVector& x,
                                      const PipelineOptions& opts = {});

}  // namespace koblab
