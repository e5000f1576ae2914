#pragma once
#include "fhopf/charge.hpp"
#include "fhopf/geometry.hpp"
#include "fhopf/metric.hpp"
#include "fhopf/profile.hpp"
#include "fhopf/quadrature.hpp"

namespace fhopf {

// Standard chart point on the target S^2: x = (cos t, sin t e^{iu}).
struct TargetPoint {
    double t;  // polar angle in [0, pi]
    double u;  // azimuth, reduced mod 2 pi
};

// phi(p) = (cos alpha(s), sin alpha(s) e^{i(k x1 + l x2)}).
TargetPoint evaluate_map(const AnsatzCharge& charge, const Profile& profile,
                         const TorusPoint& point);

// Eigenvalues of the pulled-back target metric restricted to the horizontal
// space: lambda1^2 along E1 (the d/ds direction), lambda2^2 along E2.
struct PullbackSpectrum {
    double lambda1_sq;
    double lambda2_sq;
    double s;
};

// Closed-form eigenvalues under any metric of the block family:
//   lambda1^2 = alpha'^2 / g33,
//   lambda2^2 = sin^2(alpha) (k^2 g22 - 2kl g12 + l^2 g11) / det2.
PullbackSpectrum pullback_spectrum(const AnsatzCharge& charge,
                                   const Profile& profile,
                                   const MetricFamily& metric, double s);

// Same eigenvalues via the 2x2 eigenproblem of the pullback form expressed
// in the adapted frame; an independent route used for cross-checks.
PullbackSpectrum pullback_spectrum_eigen(const AnsatzCharge& charge,
                                         const Profile& profile,
                                         const MetricFamily& metric, double s);

// d/ds of the closed-form eigenvalues (needs the metric jet derivatives and
// two profile derivatives).
struct PullbackSpectrumJet {
    double lambda1_sq, lambda2_sq;
    double dlambda1_sq, dlambda2_sq;
};

PullbackSpectrumJet pullback_spectrum_jet(const AnsatzCharge& charge,
                                          const Profile& profile,
                                          const MetricFamily& metric,
                                          double s);

// Whitehead-integral evaluation of the Hopf invariant: Q = int A ^ F with
// F the pullback of the area form normalized to unit total measure. The
// equivariant structure reduces everything to 1-D quadrature in s; the gauge
// potential A = p(s) dx1 + q(s) dx2 is fixed by q(0) = 0, p(pi/2) = 0 and
// the orientation ds ^ dx1 ^ dx2 > 0.
double hopf_charge_numeric(const AnsatzCharge& charge, const Profile& profile,
                           const QuadratureSpec& quad = {});

}  // namespace fhopf
