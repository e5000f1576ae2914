#pragma once
#include <optional>
#include <vector>

#include "fhopf/charge.hpp"
#include "fhopf/profile.hpp"
#include "fhopf/scalar_field.hpp"

namespace fhopf {

struct ShootingConfig {
    double eps = 1e-6;      // start offset from the singular endpoints
    double c_lo = 1e-3;     // slope bracket for bisection / scans
    double c_hi = 1e3;
    double rel_tol = 1e-10;  // integrator step control
    double abs_tol = 1e-12;
    int max_bisect = 200;
    int grid_size = 1601;      // nodes of the returned profile
    bool linear_route = true;  // shoot_sigma2: disable to force bisection
};

// BVP solver for the strongly coupled equation with alpha(0) = 0,
// alpha(pi/2) = pi. Default strategy substitutes u = cos(alpha), under which
// the bracket becomes linear in u and a single quadrature fixes the profile;
// with linear_route off it falls back to bisection on the starting slope.
DiscreteProfile shoot_sigma2(const AnsatzCharge& charge,
                             const ShootingConfig& config = {});

// Result of harmonic shooting. Either a profile (plus the coefficient C of
// the closed form fitted at s = pi/4) or the boundary-mismatch scan over
// log-spaced starting slopes, kept as an empirical witness of nonexistence.
struct MismatchScan {
    std::vector<double> slopes;
    std::vector<double> mismatches;  // alpha(pi/2) - pi
    bool sign_change = false;
};

struct HarmonicShot {
    std::optional<DiscreteProfile> profile;
    double fitted_C = 0.0;
    MismatchScan scan;
    bool found() const { return profile.has_value(); }
};

HarmonicShot shoot_harmonic(const AnsatzCharge& charge,
                            const ShootingConfig& config = {});

// Conformal exponent gamma(s), gauge gamma(pi/4) = 0, solving
// gamma'(s) = -rho_h(s)/alpha'(s) with rho_h the reduced harmonic residual
// of the horizontally conformal profile; e^{2 gamma} times the round metric
// then makes that profile harmonic. Nodes avoid the chart endpoints.
struct GammaGrid {
    std::vector<double> nodes;
    std::vector<double> values;
    std::vector<double> derivs;

    // Cubic Hermite interpolant (clamped to the node range).
    ScalarField field() const;
};

GammaGrid conformal_gamma_for_harmonicity(const ProfilePtr& hc_profile,
                                          const AnsatzCharge& charge,
                                          int nodes = 257);

}  // namespace fhopf
