#pragma once
#include <string>
#include <vector>

#include "fhopf/charge.hpp"
#include "fhopf/metric.hpp"
#include "fhopf/profile.hpp"
#include "fhopf/scalar_field.hpp"
#include "fhopf/shooting.hpp"

namespace fhopf {

// Dilation lambda(s) of a horizontally conformal equivariant map, together
// with the profile it came from (null for synthetic dilations).
struct DilationProfile {
    ScalarField lambda;
    ProfilePtr source;

    static DilationProfile constant(double value);
    // lambda = alpha'/R: the dilation of the ansatz map under the round
    // metric of radius R when the profile is horizontally conformal.
    static DilationProfile from_profile(const ProfilePtr& profile, double R);
    // lambda = alpha'/sqrt(g33): the dilation under an arbitrary family
    // metric (first latitude eigenvalue of the pullback).
    static DilationProfile from_metric(const ProfilePtr& profile,
                                       const MetricFamily& metric);
};

// a^2(s) = [1 + K(n-1) lambda^2]^{2/(m-2)}: the map is critical for the
// coupled energy exactly when it is harmonic under a^2 * g. Dimension 2 is
// excluded by the exponent.
ScalarField conformal_sigma12_factor(const DilationProfile& dilation, int m,
                                     int n, double K);

// lambda^{4/(m-2)}: the strongly coupled branch of the same equivalence
// (critical for the quartic energy iff harmonic under lambda^{4/(m-2)} g).
ScalarField conformal_sigma2_factor(const DilationProfile& dilation, int m);

// lambda^{4/(4-m)}: conformal factor under which a submersive harmonic
// morphism becomes critical for the strongly coupled energy. Unavailable in
// dimension 4, where the quartic energy is conformally invariant.
ScalarField sigma2_critical_conformal_factor(const DilationProfile& dilation,
                                             int m);

// Positive root b = [theta + sqrt(theta^2 - 4K(n-1)lambda^2)]/2 of
// b^2 - theta b + K(n-1)lambda^2 = 0. In dimension 3 it makes the certified
// combination b^{m-4}(b^2 + K(n-1)lambda^2) identically theta, so b^2 * g
// deforms a harmonic-morphism metric into a coupled-criticality one.
// Requires theta^2 > 4K(n-1)lambda^2 pointwise (checked at evaluation).
ScalarField coupled_conformal_scale(const DilationProfile& dilation, int n,
                                    double K, double theta);

// rho^{-2} g^H + rho^{(2n-4)/(m-n)} g^V, split against the vertical
// direction of the charge. For n = 2, m = 3 the vertical exponent vanishes,
// so rho = 1/lambda turns a harmonic morphism into a Riemannian submersion.
MetricFamily biconformal_metric(const MetricFamily& base,
                                const AnsatzCharge& charge,
                                const ScalarField& rho, int m, int n);

// sigma^{-2} g^H + rho^{-2} g^V with independent positive factors.
MetricFamily hv_metric(const MetricFamily& base, const AnsatzCharge& charge,
                       const ScalarField& sigma, const ScalarField& rho,
                       std::string label = "hv-scaled");

// d/ds of b^{m-4}(b^2 + K(n-1) lambda^2); zero certifies criticality of the
// coupled energy under b^2 * g for s-dependent data, where the horizontal
// gradient reduces to the latitude derivative. At m = 4 the first factor is
// b^0 and b drops out of it, as expected.
double prop_key_ii_residual(const ScalarField& b,
                            const DilationProfile& dilation, int m, int n,
                            double K, double s);

// d/ds of sigma^2 rho^{2-m}; zero means strong-coupling criticality survives
// replacing g by sigma^{-2} g^H + rho^{-2} g^V.
double lemma_le_predicate(const ScalarField& sigma, const ScalarField& rho,
                          int m, double s);

// sigma(s), gauge sigma(pi/4) = 1, such that under
// sigma^{-2} g^H + sigma^{-4} g^V the profile is simultaneously harmonic and
// critical for the strongly coupled energy: the vertical factor sigma^{-4}
// preserves strong-coupling criticality (rho = sigma^2 above), and sigma is
// integrated from (ln sigma^{-2})' = -rho_h / alpha' with rho_h the reduced
// harmonicity residual, which cancels the tension. sigma = exp(...) stays
// positive by construction.
GammaGrid sigma_for_full_criticality(const ProfilePtr& profile,
                                     const AnsatzCharge& charge,
                                     int nodes = 513);

// Serializable description of a metric deformation: the parameter function
// sampled on an interior grid, plus the dimensional parameters.
struct MetricRecipe {
    std::string kind;
    int m = 3;
    int n = 2;
    double K = 0.0;
    std::vector<double> s;
    std::vector<double> value;

    std::string to_json() const;
    static MetricRecipe sample(std::string kind, const ScalarField& f, int m,
                               int n, double K, int samples = 65);
};

}  // namespace fhopf
