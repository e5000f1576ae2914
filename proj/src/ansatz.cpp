#include "fhopf/ansatz.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "fhopf/errors.hpp"

namespace fhopf {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2.0;
}

TargetPoint evaluate_map(const AnsatzCharge& charge, const Profile& profile,
                         const TorusPoint& point) {
    if (point.s < 0.0 || point.s > kHalfPi)
        throw DomainError("latitude outside [0, pi/2]");
    const double t = profile.value(point.s);
    double u = charge.k * point.x1 + charge.l * point.x2;
    u = std::fmod(u, 2.0 * std::numbers::pi);
    if (u < 0.0) u += 2.0 * std::numbers::pi;
    return {t, u};
}

PullbackSpectrum pullback_spectrum(const AnsatzCharge& charge,
                                   const Profile& profile,
                                   const MetricFamily& metric, double s) {
    require_interior(s);
    const MetricJet j = metric.jet(s);
    const double ap = profile.deriv(s);
    const double sa = std::sin(profile.value(s));
    const double k = charge.k, l = charge.l;
    const double m = (k * k * j.g22 - 2.0 * k * l * j.g12 + l * l * j.g11) /
                     j.det2();
    return {ap * ap / j.g33, sa * sa * m, s};
}

PullbackSpectrum pullback_spectrum_eigen(const AnsatzCharge& charge,
                                         const Profile& profile,
                                         const MetricFamily& metric,
                                         double s) {
    require_interior(s);
    const AdaptedFrame f = adapted_frame(metric, charge, s);
    const double ap = profile.deriv(s);
    const double sa = std::sin(profile.value(s));
    const double k = charge.k, l = charge.l;

    // phi^*h = alpha'^2 ds^2 + sin^2(alpha) (k dx1 + l dx2)^2 evaluated on
    // the orthonormal horizontal pair; the frame is orthonormal so the
    // 2x2 matrix eigenvalues are the spectrum directly.
    auto pullback = [&](const std::array<double, 3>& a,
                        const std::array<double, 3>& b) {
        return ap * ap * a[2] * b[2] +
               sa * sa * (k * a[0] + l * a[1]) * (k * b[0] + l * b[1]);
    };
    Eigen::Matrix2d B;
    B(0, 0) = pullback(f.e1, f.e1);
    B(0, 1) = B(1, 0) = pullback(f.e1, f.e2);
    B(1, 1) = pullback(f.e2, f.e2);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(B);
    Eigen::Vector2d ev = es.eigenvalues();
    // Assign lambda1 to the eigenvector closer to the E1 frame direction.
    Eigen::Vector2d v0 = es.eigenvectors().col(0);
    if (std::abs(v0(0)) >= std::abs(v0(1))) return {ev(0), ev(1), s};
    return {ev(1), ev(0), s};
}

PullbackSpectrumJet pullback_spectrum_jet(const AnsatzCharge& charge,
                                          const Profile& profile,
                                          const MetricFamily& metric,
                                          double s) {
    require_interior(s);
    const MetricJet j = metric.jet(s);
    const double a = profile.value(s);
    const double ap = profile.deriv(s);
    const double app = profile.deriv2(s);
    const double k = charge.k, l = charge.l;

    const double l1 = ap * ap / j.g33;
    const double dl1 = (2.0 * ap * app * j.g33 - ap * ap * j.d33) /
                       (j.g33 * j.g33);

    const double num = k * k * j.g22 - 2.0 * k * l * j.g12 + l * l * j.g11;
    const double dnum = k * k * j.d22 - 2.0 * k * l * j.d12 + l * l * j.d11;
    const double det = j.det2(), ddet = j.ddet2();
    const double m = num / det;
    const double dm = (dnum * det - num * ddet) / (det * det);
    const double sa = std::sin(a);
    const double l2 = sa * sa * m;
    const double dl2 = std::sin(2.0 * a) * ap * m + sa * sa * dm;
    return {l1, l2, dl1, dl2};
}

double hopf_charge_numeric(const AnsatzCharge& charge, const Profile& profile,
                           const QuadratureSpec& quad) {
    const double lo = 0.0, hi = kHalfPi;
    const GaussRule& rule = gauss_legendre(quad.nodes);
    const GaussRule& inner = gauss_legendre(16);
    const double h = (hi - lo) / quad.panels;

    // f'(s) = sin(alpha) alpha' / (4 pi): curvature 2-form coefficient.
    auto fp = [&](double s) {
        return std::sin(profile.value(s)) * profile.deriv(s) /
               (4.0 * std::numbers::pi);
    };
    auto segment = [&](double a, double b) {
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double sum = 0.0;
        for (std::size_t i = 0; i < inner.nodes.size(); ++i)
            sum += inner.weights[i] * fp(mid + half * inner.nodes[i]);
        return half * sum;
    };

    // Cumulative flux f(s) at panel boundaries.
    std::vector<double> cum(quad.panels + 1, 0.0);
    for (int p = 0; p < quad.panels; ++p)
        cum[p + 1] = cum[p] + segment(lo + p * h, lo + (p + 1) * h);
    const double total = cum[quad.panels];

    // Q = int f' (k q - l p) over the chart, with q = l f, p = -k (total - f),
    // carrying the 4 pi^2 angular volume.
    double integral = 0.0;
    for (int p = 0; p < quad.panels; ++p) {
        const double a = lo + p * h;
        const double mid = a + 0.5 * h;
        double panel = 0.0;
        for (int i = 0; i < quad.nodes; ++i) {
            const double x = mid + 0.5 * h * rule.nodes[i];
            const double f_here = cum[p] + segment(a, x);
            const double pot_p = -charge.k * (total - f_here);
            const double pot_q = charge.l * f_here;
            panel += rule.weights[i] * fp(x) *
                     (charge.k * pot_q - charge.l * pot_p);
        }
        integral += 0.5 * h * panel;
    }
    const double result = 4.0 * std::numbers::pi * std::numbers::pi * integral;
    if (!std::isfinite(result))
        throw QuadratureFailure("Hopf charge quadrature produced non-finite "
                                "value");
    return result;
}

}  // namespace fhopf
