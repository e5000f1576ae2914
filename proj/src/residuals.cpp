#include "fhopf/residuals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "fhopf/ansatz.hpp"
#include "fhopf/errors.hpp"
#include "fhopf/geometry.hpp"

#include "json.hpp"

namespace fhopf {

namespace {

constexpr double kPi = std::numbers::pi;

double coupling(const AnsatzCharge& charge, double s) {
    const double c = std::cos(s), sn = std::sin(s);
    return static_cast<double>(charge.k) * charge.k / (c * c) +
           static_cast<double>(charge.l) * charge.l / (sn * sn);
}

double coupling_deriv(const AnsatzCharge& charge, double s) {
    const double c = std::cos(s), sn = std::sin(s);
    return 2.0 * charge.k * charge.k * sn / (c * c * c) -
           2.0 * charge.l * charge.l * c / (sn * sn * sn);
}

}  // namespace

double residual_hc(const Profile& profile, const AnsatzCharge& charge,
                   double s) {
    require_interior(s);
    return profile.deriv(s) -
           std::sin(profile.value(s)) * std::sqrt(coupling(charge, s));
}

double residual_harmonic(const Profile& profile, const AnsatzCharge& charge,
                         double s) {
    require_interior(s);
    const double a = profile.value(s);
    const double ap = profile.deriv(s);
    const double app = profile.deriv2(s);
    const double cot_tan = std::cos(s) / std::sin(s) -
                           std::sin(s) / std::cos(s);
    return app + cot_tan * ap -
           coupling(charge, s) * std::sin(a) * std::cos(a);
}

double harmonic_scale(const Profile& profile, const AnsatzCharge& charge,
                      double s) {
    const double a = profile.value(s);
    const double ap = profile.deriv(s);
    const double app = profile.deriv2(s);
    const double cot_tan = std::cos(s) / std::sin(s) -
                           std::sin(s) / std::cos(s);
    return std::max({std::abs(app), std::abs(cot_tan * ap),
                     std::abs(coupling(charge, s) * std::sin(a) *
                              std::cos(a)),
                     1.0});
}

Sigma2Residual residual_sigma2(const Profile& profile,
                               const AnsatzCharge& charge, double s) {
    require_interior(s);
    const double a = profile.value(s);
    const double ap = profile.deriv(s);
    const double app = profile.deriv2(s);
    const double sa = std::sin(a), ca = std::cos(a);
    const double cs = std::cos(s), sn = std::sin(s);
    const double P = coupling(charge, s);
    const double D = charge.k * charge.k / (sn * cs * cs * cs) -
                     charge.l * charge.l / (cs * sn * sn * sn);

    // bracket = (alpha'' sin a + alpha'^2 cos a) P + alpha' sin(a) D; the
    // full equation is alpha' sin(a) times it.
    const double t1 = P * (app * sa + ap * ap * ca);
    const double t2 = D * ap * sa;
    const double bracket = t1 + t2;
    const double scale = std::max({std::abs(P * app * sa),
                                   std::abs(P * ap * ap * ca), std::abs(t2),
                                   1.0});
    return {bracket, ap * sa * bracket, scale};
}

SystemResidual residual_system(const Profile& profile,
                               const AnsatzCharge& charge,
                               const MetricFamily& metric, SystemKind kind,
                               double s) {
    require_interior(s);
    const MetricJet j = metric.jet(s);
    const ChristoffelTable ch = christoffel(metric, s);
    const AdaptedFrame fr = adapted_frame(metric, charge, s);
    const VerticalCurvature mu = vertical_mean_curvature(metric, charge, s);
    const PullbackSpectrumJet sp =
        pullback_spectrum_jet(charge, profile, metric, s);

    const double sqrt_g33 = std::sqrt(j.g33);
    // E1 f = f'/sqrt(g33) for any f(s); E2 f = 0 since E2 has no d/ds part.
    const double e1_l1 = sp.dlambda1_sq / sqrt_g33;
    const double e1_l2 = sp.dlambda2_sq / sqrt_g33;

    // g(nabla_{E2} E2, E1): E2 components depend on s alone and E2 carries
    // no d/ds part, so only the Christoffel contraction survives; pairing
    // with E1 picks the s-component times sqrt(g33).
    double acc_s = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int jj = 0; jj < 3; ++jj)
            acc_s += fr.e2[i] * fr.e2[jj] * ch(2, i, jj);
    const double c2 = acc_s * sqrt_g33;

    // g(nabla_{E1} E1, E2): nabla_{E1} E1 points purely along d/ds for this
    // family, and g(d/ds, E2) = 0; computed anyway from the table.
    std::array<double, 3> d_e1{};
    for (int k = 0; k < 3; ++k)
        d_e1[k] = ch(k, 2, 2) / j.g33;
    d_e1[2] += (1.0 / sqrt_g33) * (-0.5 * j.d33 / (j.g33 * sqrt_g33));
    const double c1 = metric_dot(j, d_e1, fr.e2);

    const double l1 = sp.lambda1_sq, l2 = sp.lambda2_sq;

    // Scales sum the magnitudes of the equation's geometric building blocks
    // (not its signed terms): on special profiles individual terms vanish
    // jointly with the residual and a max-of-terms scale would be circular.
    SystemResidual out{};
    if (kind == SystemKind::harmonic) {
        const double t1 = (l2 - l1) * c2;
        const double t2 = l1 * mu.along_e1;
        const double t3 = 0.5 * (e1_l2 - e1_l1);
        out.eq1 = t1 - t2 - t3;
        out.scale1 = (l1 + l2) * (std::abs(c2) + std::abs(mu.along_e1)) +
                     0.5 * (std::abs(e1_l1) + std::abs(e1_l2));
        const double u1 = (l1 - l2) * c1;
        const double u2 = l2 * mu.along_e2;
        out.eq2 = u1 - u2;  // E2(lambda^2) = 0 exactly
        out.scale2 = std::max((l1 + l2) * (std::abs(c1) + std::abs(u2)),
                              out.scale1);
    } else {
        constexpr double m_minus_2 = 1.0;  // domain dimension 3
        const double t1 = 0.5 * l1 * e1_l2;
        const double t2 = 0.5 * l2 * e1_l1;
        const double t3 = m_minus_2 * l1 * l2 * mu.along_e1;
        out.eq1 = t1 + t2 - t3;
        out.scale1 = 0.5 * l1 * std::abs(e1_l2) + 0.5 * l2 * std::abs(e1_l1) +
                     l1 * l2 * std::abs(mu.along_e1);
        const double u2 = m_minus_2 * l1 * l2 * mu.along_e2;
        out.eq2 = -u2;  // the E2-derivative terms vanish identically
        out.scale2 = std::max(std::abs(u2), out.scale1);
    }
    return out;
}

CombinedResidual residual_sigma12(const Profile& profile,
                                  const AnsatzCharge& charge,
                                  const MetricFamily& metric, double K,
                                  double s) {
    if (K < 0.0) throw InvalidParameter("coupling constant must be >= 0");
    const SystemResidual h =
        residual_system(profile, charge, metric, SystemKind::harmonic, s);
    const SystemResidual q =
        residual_system(profile, charge, metric, SystemKind::sigma2, s);
    return {h.eq1 + K * q.eq1, std::max(h.scale1, K * q.scale1)};
}

double el_sigma2_reduced(const Profile& profile, const AnsatzCharge& charge,
                         double R, double s) {
    require_interior(s);
    if (R <= 0.0) throw InvalidParameter("radius must be positive");
    const double a = profile.value(s);
    const double ap = profile.deriv(s);
    const double app = profile.deriv2(s);
    const double sa = std::sin(a);
    const double tn = std::tan(s), ct = 1.0 / tn;
    const double W = charge.k * charge.k * tn + charge.l * charge.l * ct;
    const double Wp = charge.k * charge.k / (std::cos(s) * std::cos(s)) -
                      charge.l * charge.l / (std::sin(s) * std::sin(s));
    const double pref = 2.0 * kPi * kPi / R;
    // d/d alpha of L minus d/ds of d/d alpha' of L.
    return pref * (W * ap * ap * std::sin(2.0 * a) -
                   2.0 * (Wp * ap * sa * sa + W * app * sa * sa +
                          W * ap * ap * std::sin(2.0 * a)));
}

double el_energy4_reduced(const Profile& profile, const AnsatzCharge& charge,
                          double R, double s) {
    require_interior(s);
    if (R <= 0.0) throw InvalidParameter("radius must be positive");
    const double a = profile.value(s);
    const double ap = profile.deriv(s);
    const double app = profile.deriv2(s);
    const double sa = std::sin(a);
    const double sc = std::sin(s) * std::cos(s);
    const double dsc = std::cos(2.0 * s);
    const double P = coupling(charge, s);
    const double Pp = coupling_deriv(charge, s);
    const double B = ap * ap + sa * sa * P;
    const double dB_ds_explicit = sa * sa * Pp;  // at frozen alpha, alpha'
    const double dB_da = std::sin(2.0 * a) * P;
    // L = (pi^2/R) B^2 sin s cos s; full s-derivative of dL/d alpha' needs
    // B' = 2 alpha' alpha'' + sin(2a) alpha' P + sin^2(a) P'.
    const double B_full_p =
        2.0 * ap * app + dB_da * ap + dB_ds_explicit;
    const double pref = kPi * kPi / R;
    const double dL_da = pref * 2.0 * B * dB_da * sc;
    // dL/d alpha' = 4 pref B alpha' sc
    const double ddLdap_ds =
        pref * 4.0 * ((B_full_p * ap + B * app) * sc + B * ap * dsc);
    return dL_da - ddLdap_ds;
}

void ResidualReport::finalize() {
    norm_inf = 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        const double sc = std::max(scales[i], 1e-300);
        const double r = residuals[i] / sc;
        norm_inf = std::max(norm_inf, std::abs(r));
        acc += r * r;
    }
    norm_l2 = residuals.empty() ? 0.0
                                : std::sqrt(acc / static_cast<double>(
                                                      residuals.size()));
}

void ResidualReport::save_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw InvalidParameter("cannot open " + path + " for writing");
    std::fprintf(f, "s,residual,scale\n");
    for (std::size_t i = 0; i < grid.size(); ++i)
        std::fprintf(f, "%.17g,%.17g,%.17g\n", grid[i], residuals[i],
                     scales[i]);
    std::fclose(f);
}

std::string ResidualReport::summary_json() const {
    nlohmann::json j;
    j["equation"] = equation;
    j["norm_inf"] = norm_inf;
    j["norm_l2"] = norm_l2;
    j["grid_size"] = grid.size();
    return j.dump(2);
}

std::vector<double> interior_grid(int n) {
    if (n < 1) throw InvalidParameter("grid size must be >= 1");
    std::vector<double> g(n);
    for (int i = 1; i <= n; ++i)
        g[i - 1] = (kPi / 2.0) * i / (n + 1);
    return g;
}

namespace {

template <typename F>
ResidualReport sweep(std::string equation, int n, const F& eval) {
    ResidualReport rep;
    rep.equation = std::move(equation);
    rep.grid = interior_grid(n);
    rep.residuals.reserve(rep.grid.size());
    rep.scales.reserve(rep.grid.size());
    for (double s : rep.grid) {
        auto [r, sc] = eval(s);
        rep.residuals.push_back(r);
        rep.scales.push_back(sc);
    }
    rep.finalize();
    return rep;
}

}  // namespace

ResidualReport report_hc(const Profile& profile, const AnsatzCharge& charge,
                         int n) {
    return sweep("horizontal-conformality", n, [&](double s) {
        const double r = residual_hc(profile, charge, s);
        const double sc = std::max(
            {std::abs(profile.deriv(s)),
             std::abs(std::sin(profile.value(s))) *
                 std::sqrt(coupling(charge, s)),
             1.0});
        return std::pair<double, double>{r, sc};
    });
}

ResidualReport report_harmonic(const Profile& profile,
                               const AnsatzCharge& charge, int n) {
    return sweep("harmonic", n, [&](double s) {
        return std::pair<double, double>{
            residual_harmonic(profile, charge, s),
            harmonic_scale(profile, charge, s)};
    });
}

ResidualReport report_sigma2(const Profile& profile,
                             const AnsatzCharge& charge, int n) {
    return sweep("sigma2", n, [&](double s) {
        const Sigma2Residual r = residual_sigma2(profile, charge, s);
        return std::pair<double, double>{r.bracket, r.scale};
    });
}

ResidualReport report_system(const Profile& profile,
                             const AnsatzCharge& charge,
                             const MetricFamily& metric, SystemKind kind,
                             int n) {
    const char* name =
        kind == SystemKind::harmonic ? "harmonic-system" : "sigma2-system";
    return sweep(name, n, [&](double s) {
        const SystemResidual r =
            residual_system(profile, charge, metric, kind, s);
        // Fold both equations into one row: worst normalized component,
        // reported against the larger scale.
        const double sc = std::max(r.scale1, r.scale2);
        const double worst =
            std::abs(r.eq1) / std::max(r.scale1, 1e-300) >=
                    std::abs(r.eq2) / std::max(r.scale2, 1e-300)
                ? r.eq1 * sc / std::max(r.scale1, 1e-300)
                : r.eq2 * sc / std::max(r.scale2, 1e-300);
        return std::pair<double, double>{worst, sc};
    });
}

ResidualReport report_sigma12(const Profile& profile,
                              const AnsatzCharge& charge,
                              const MetricFamily& metric, double K, int n) {
    return sweep("sigma12-combined", n, [&](double s) {
        const CombinedResidual r =
            residual_sigma12(profile, charge, metric, K, s);
        return std::pair<double, double>{r.value, r.scale};
    });
}

}  // namespace fhopf
