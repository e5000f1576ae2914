#include "fhopf/metricchange.hpp"

#include <cmath>
#include <numbers>

#include "fhopf/errors.hpp"
#include "fhopf/quadrature.hpp"
#include "fhopf/residuals.hpp"

#include "json.hpp"

namespace fhopf {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

DilationProfile DilationProfile::constant(double value) {
    if (!(value > 0.0)) throw InvalidParameter("dilation must be positive");
    return {ScalarField::constant(value), nullptr};
}

DilationProfile DilationProfile::from_profile(const ProfilePtr& profile,
                                              double R) {
    if (!profile) throw InvalidParameter("null profile");
    if (!(R > 0.0)) throw InvalidParameter("radius must be positive");
    ScalarField lam{
        [profile, R](double s) { return profile->deriv(s) / R; },
        [profile, R](double s) { return profile->deriv2(s) / R; }};
    return {lam, profile};
}

DilationProfile DilationProfile::from_metric(const ProfilePtr& profile,
                                             const MetricFamily& metric) {
    if (!profile) throw InvalidParameter("null profile");
    auto jet = [metric](double s) { return metric.jet(s); };
    ScalarField lam{
        [profile, jet](double s) {
            return profile->deriv(s) / std::sqrt(jet(s).g33);
        },
        [profile, jet](double s) {
            const MetricJet j = jet(s);
            const double rt = std::sqrt(j.g33);
            return (profile->deriv2(s) * rt -
                    profile->deriv(s) * j.d33 / (2.0 * rt)) /
                   j.g33;
        }};
    return {lam, profile};
}

ScalarField conformal_sigma12_factor(const DilationProfile& dilation, int m,
                                     int n, double K) {
    if (m == 2)
        throw InvalidDimension("conformal factor undefined in dimension 2");
    if (K < 0.0) throw InvalidParameter("coupling constant must be >= 0");
    const double c = K * (n - 1);
    auto lam = dilation.lambda;
    ScalarField base{
        [lam, c](double s) {
            const double l = lam.value(s);
            return 1.0 + c * l * l;
        },
        [lam, c](double s) {
            return 2.0 * c * lam.value(s) * lam.deriv(s);
        }};
    return base.pow(2.0 / (m - 2));
}

ScalarField conformal_sigma2_factor(const DilationProfile& dilation, int m) {
    if (m == 2)
        throw InvalidDimension("conformal factor undefined in dimension 2");
    return dilation.lambda.pow(4.0 / (m - 2));
}

ScalarField sigma2_critical_conformal_factor(const DilationProfile& dilation,
                                             int m) {
    if (m == 4)
        throw InvalidDimension(
            "quartic energy is conformally invariant in dimension 4; no "
            "conformal factor exists");
    return dilation.lambda.pow(4.0 / (4 - m));
}

ScalarField coupled_conformal_scale(const DilationProfile& dilation, int n,
                                    double K, double theta) {
    if (!(theta > 0.0)) throw InvalidParameter("theta must be positive");
    if (K < 0.0) throw InvalidParameter("coupling constant must be >= 0");
    const double c = K * (n - 1);
    auto lam = dilation.lambda;
    auto disc = [lam, c, theta](double s) {
        const double l = lam.value(s);
        const double d = theta * theta - 4.0 * c * l * l;
        if (!(d > 0.0))
            throw InvalidParameter(
                "theta too small: discriminant not positive");
        return d;
    };
    return {[disc, theta](double s) {
                return 0.5 * (theta + std::sqrt(disc(s)));
            },
            [lam, disc, c](double s) {
                return -2.0 * c * lam.value(s) * lam.deriv(s) /
                       std::sqrt(disc(s));
            }};
}

MetricFamily biconformal_metric(const MetricFamily& base,
                                const AnsatzCharge& charge,
                                const ScalarField& rho, int m, int n) {
    if (m == n)
        throw InvalidDimension("vertical exponent undefined for m = n");
    const double vexp = (2.0 * n - 4.0) / (m - n);
    return MetricFamily::frame_scaled(base, charge, rho.pow(-2.0),
                                      rho.pow(vexp), "biconformal");
}

MetricFamily hv_metric(const MetricFamily& base, const AnsatzCharge& charge,
                       const ScalarField& sigma, const ScalarField& rho,
                       std::string label) {
    return MetricFamily::frame_scaled(base, charge, sigma.pow(-2.0),
                                      rho.pow(-2.0), std::move(label));
}

double prop_key_ii_residual(const ScalarField& b,
                            const DilationProfile& dilation, int m, int n,
                            double K, double s) {
    require_interior(s);
    const double bv = b.value(s), bd = b.deriv(s);
    const double lv = dilation.lambda.value(s);
    const double ld = dilation.lambda.deriv(s);
    const double c = K * (n - 1);
    const double F = bv * bv + c * lv * lv;
    const double Fd = 2.0 * bv * bd + 2.0 * c * lv * ld;
    return (m - 4) * std::pow(bv, m - 5) * bd * F +
           std::pow(bv, m - 4) * Fd;
}

double lemma_le_predicate(const ScalarField& sigma, const ScalarField& rho,
                          int m, double s) {
    require_interior(s);
    const double sv = sigma.value(s), sd = sigma.deriv(s);
    const double rv = rho.value(s), rd = rho.deriv(s);
    return 2.0 * sv * sd * std::pow(rv, 2.0 - m) +
           (2.0 - m) * sv * sv * std::pow(rv, 1.0 - m) * rd;
}

GammaGrid sigma_for_full_criticality(const ProfilePtr& profile,
                                     const AnsatzCharge& charge, int nodes) {
    if (!profile) throw InvalidParameter("null profile");
    if (nodes < 9) throw InvalidParameter("sigma grid too small");
    const Profile& prof = *profile;

    // (ln sigma)' = rho_h / (2 alpha')
    auto log_sigma_prime = [&prof, charge](double s) {
        const double ap = prof.deriv(s);
        if (std::abs(ap) < 1e-10)
            throw DivisionNearZero(
                "profile slope vanishes; deformation factor undefined");
        return residual_harmonic(prof, charge, s) / (2.0 * ap);
    };

    const double lo = 1e-4, hi = kHalfPi - 1e-4;
    GammaGrid g;
    g.nodes.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double t = std::sin(kHalfPi * i / (nodes - 1));
        g.nodes[i] = lo + (hi - lo) * t * t;
    }
    // tol matched to the noise floor of closed-form profile curvature near
    // the endpoints (arccos cancellation), not to machine precision
    CumulativeIntegral integral(log_sigma_prime, lo, hi, kHalfPi / 2.0, 512,
                                1e-9);
    g.values.resize(nodes);
    g.derivs.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double sv = std::exp(integral(g.nodes[i]));
        g.values[i] = sv;
        g.derivs[i] = sv * log_sigma_prime(g.nodes[i]);
    }
    return g;
}

std::string MetricRecipe::to_json() const {
    nlohmann::json j;
    j["kind"] = kind;
    j["m"] = m;
    j["n"] = n;
    j["K"] = K;
    j["parameters"] = {{"s", s}, {"value", value}};
    return j.dump(2);
}

MetricRecipe MetricRecipe::sample(std::string kind, const ScalarField& f,
                                  int m, int n, double K, int samples) {
    if (samples < 2) throw InvalidParameter("need at least 2 samples");
    MetricRecipe r;
    r.kind = std::move(kind);
    r.m = m;
    r.n = n;
    r.K = K;
    r.s.resize(samples);
    r.value.resize(samples);
    for (int i = 0; i < samples; ++i) {
        r.s[i] = kHalfPi * (i + 1) / (samples + 1);
        r.value[i] = f.value(r.s[i]);
    }
    return r;
}

}  // namespace fhopf
