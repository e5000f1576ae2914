#include "fhopf/energy.hpp"

#include <cmath>
#include <numbers>

#include "fhopf/ansatz.hpp"
#include "fhopf/errors.hpp"
#include "fhopf/geometry.hpp"

#include "json.hpp"

namespace fhopf {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;
const double kPi2 = kPi * kPi;

void check_radius(double R) {
    if (!(R > 0.0)) throw InvalidParameter("radius must be positive");
}
}  // namespace

std::string EnergyReport::to_json() const {
    nlohmann::json j;
    j["k"] = k;
    j["l"] = l;
    j["Q"] = Q;
    j["R"] = R;
    j["K"] = K;
    j["e_sigma1"] = e_sigma1;
    j["e_sigma2"] = e_sigma2;
    j["e_full"] = e_full;
    j["bound"] = bound;
    j["bound_ratio"] = bound_ratio;
    j["quad"] = {{"panels", quad.panels}, {"nodes", quad.nodes}};
    return j.dump(2);
}

BoundReport BoundReport::from(const EnergyReport& report, double tol) {
    return {report.bound_ratio, std::abs(report.bound_ratio - 1.0) <= tol};
}

double reduced_sigma2_energy(const Profile& profile,
                             const AnsatzCharge& charge, double R,
                             const QuadratureSpec& quad) {
    check_radius(R);
    auto f = [&](double s) {
        const double ap = profile.deriv(s);
        const double sa = std::sin(profile.value(s));
        const double W = charge.k * charge.k * std::tan(s) +
                         charge.l * charge.l / std::tan(s);
        return W * ap * ap * sa * sa;
    };
    return 2.0 * kPi2 / R *
           integrate_to_convergence(f, 0.0, kHalfPi, quad);
}

double closed_form_sigma2_energy(const AnsatzCharge& charge, double R) {
    check_radius(R);
    const double k2 = static_cast<double>(charge.k) * charge.k;
    const double l2 = static_cast<double>(charge.l) * charge.l;
    if (k2 == l2) return 16.0 * kPi2 * k2 / R;
    return 16.0 * kPi2 * (k2 - l2) / (R * std::log(k2 / l2));
}

double reduced_dirichlet_energy(const Profile& profile,
                                const AnsatzCharge& charge, double R,
                                const QuadratureSpec& quad) {
    check_radius(R);
    auto f = [&](double s) {
        const double ap = profile.deriv(s);
        const double sa = std::sin(profile.value(s));
        const double c = std::cos(s), sn = std::sin(s);
        const double P = charge.k * charge.k / (c * c) +
                         charge.l * charge.l / (sn * sn);
        return (ap * ap + sa * sa * P) * c * sn;
    };
    return 2.0 * kPi2 * R *
           integrate_to_convergence(f, 0.0, kHalfPi, quad);
}

EnergyReport full_energy(const Profile& profile, const AnsatzCharge& charge,
                         double R, double K, const QuadratureSpec& quad) {
    if (K < 0.0) throw InvalidParameter("coupling constant must be >= 0");
    EnergyReport rep;
    rep.k = charge.k;
    rep.l = charge.l;
    rep.Q = charge.hopf();
    rep.R = R;
    rep.K = K;
    rep.quad = quad;
    rep.e_sigma1 = reduced_dirichlet_energy(profile, charge, R, quad);
    rep.e_sigma2 = reduced_sigma2_energy(profile, charge, R, quad);
    rep.e_full = rep.e_sigma1 + K * rep.e_sigma2;
    rep.bound = 16.0 * kPi2 * std::abs(static_cast<double>(rep.Q)) / R;
    rep.bound_ratio = rep.e_sigma2 / rep.bound;
    return rep;
}

EnergyReport generalized_energy(const Profile& profile,
                                const AnsatzCharge& charge,
                                const MetricFamily& metric, double K,
                                const QuadratureSpec& quad) {
    if (K < 0.0) throw InvalidParameter("coupling constant must be >= 0");
    auto density1 = [&](double s) {
        const PullbackSpectrum sp =
            pullback_spectrum(charge, profile, metric, s);
        return 0.5 * (sp.lambda1_sq + sp.lambda2_sq) *
               volume_density(metric, s);
    };
    auto density2 = [&](double s) {
        const PullbackSpectrum sp =
            pullback_spectrum(charge, profile, metric, s);
        return 0.5 * sp.lambda1_sq * sp.lambda2_sq *
               volume_density(metric, s);
    };
    EnergyReport rep;
    rep.k = charge.k;
    rep.l = charge.l;
    rep.Q = charge.hopf();
    rep.R = metric.radius();
    rep.K = K;
    rep.quad = quad;
    // 4 pi^2 from the two angular circles
    rep.e_sigma1 = 4.0 * kPi2 *
                   integrate_to_convergence(density1, 0.0, kHalfPi, quad);
    rep.e_sigma2 = 4.0 * kPi2 *
                   integrate_to_convergence(density2, 0.0, kHalfPi, quad);
    rep.e_full = rep.e_sigma1 + K * rep.e_sigma2;
    const double R = rep.R > 0.0 ? rep.R : 1.0;
    rep.bound = 16.0 * kPi2 * std::abs(static_cast<double>(rep.Q)) / R;
    rep.bound_ratio = rep.e_sigma2 / rep.bound;
    return rep;
}

}  // namespace fhopf
