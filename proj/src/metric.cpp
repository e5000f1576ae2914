#include "fhopf/metric.hpp"

#include <cmath>
#include <numbers>

#include "fhopf/errors.hpp"

namespace fhopf {

void require_interior(double s) {
    if (!(s > 0.0) || !(s < 0.5 * std::numbers::pi))
        throw DomainError("latitude s must lie strictly inside (0, pi/2)");
}

MetricJet MetricFamily::jet(double s) const {
    MetricJet j = jet_(s);
    if (!(j.g11 > 0.0) || !(j.det2() > 0.0) || !(j.g33 > 0.0))
        throw DegenerateMetric("metric block not positive definite at s = " +
                               std::to_string(s));
    return j;
}

MetricFamily MetricFamily::canonical(double R) {
    if (!(R > 0.0)) throw InvalidParameter("radius must be positive");
    const double R2 = R * R;
    auto jet = [R2](double s) {
        const double c = std::cos(s), sn = std::sin(s);
        return MetricJet{R2 * c * c, 0.0, R2 * sn * sn, R2,
                         -2.0 * R2 * c * sn, 0.0, 2.0 * R2 * sn * c, 0.0};
    };
    return MetricFamily(std::move(jet), "canonical", R);
}

MetricFamily MetricFamily::conformal(double R, ScalarField gamma) {
    MetricFamily base = canonical(R);
    auto base_jet = [base](double s) { return base.jet(s); };
    auto g = gamma;
    auto jet = [base_jet, g](double s) {
        MetricJet j = base_jet(s);
        const double f = std::exp(2.0 * g.value(s));
        const double df = 2.0 * g.deriv(s) * f;
        MetricJet out;
        out.g11 = f * j.g11;
        out.g12 = f * j.g12;
        out.g22 = f * j.g22;
        out.g33 = f * j.g33;
        out.d11 = df * j.g11 + f * j.d11;
        out.d12 = df * j.g12 + f * j.d12;
        out.d22 = df * j.g22 + f * j.d22;
        out.d33 = df * j.g33 + f * j.d33;
        return out;
    };
    return MetricFamily(std::move(jet), "conformal", R);
}

MetricFamily MetricFamily::frame_scaled(const MetricFamily& base,
                                        const AnsatzCharge& charge,
                                        ScalarField hscale, ScalarField vscale,
                                        std::string label) {
    const double v1 = charge.l, v2 = -charge.k;  // ker(k dx1 + l dx2)
    auto base_jet = [base](double s) { return base.jet(s); };
    auto jet = [base_jet, hscale, vscale, v1, v2](double s) {
        MetricJet j = base_jet(s);
        const double H = hscale.value(s), dH = hscale.deriv(s);
        const double V = vscale.value(s), dV = vscale.deriv(s);

        // Covector q = g(v, .) restricted to the angular block.
        const double q1 = j.g11 * v1 + j.g12 * v2;
        const double q2 = j.g12 * v1 + j.g22 * v2;
        const double dq1 = j.d11 * v1 + j.d12 * v2;
        const double dq2 = j.d12 * v1 + j.d22 * v2;
        const double n = q1 * v1 + q2 * v2;  // |v|^2
        const double dn = dq1 * v1 + dq2 * v2;

        // g^V_ab = q_a q_b / |v|^2; g^H = g - g^V on the angular block,
        // and g^H = g on the s-direction.
        const double gv11 = q1 * q1 / n;
        const double gv12 = q1 * q2 / n;
        const double gv22 = q2 * q2 / n;
        const double dgv11 = (2.0 * q1 * dq1 * n - q1 * q1 * dn) / (n * n);
        const double dgv12 =
            ((dq1 * q2 + q1 * dq2) * n - q1 * q2 * dn) / (n * n);
        const double dgv22 = (2.0 * q2 * dq2 * n - q2 * q2 * dn) / (n * n);

        MetricJet out;
        out.g11 = H * (j.g11 - gv11) + V * gv11;
        out.g12 = H * (j.g12 - gv12) + V * gv12;
        out.g22 = H * (j.g22 - gv22) + V * gv22;
        out.g33 = H * j.g33;
        out.d11 = dH * (j.g11 - gv11) + H * (j.d11 - dgv11) + dV * gv11 +
                  V * dgv11;
        out.d12 = dH * (j.g12 - gv12) + H * (j.d12 - dgv12) + dV * gv12 +
                  V * dgv12;
        out.d22 = dH * (j.g22 - gv22) + H * (j.d22 - dgv22) + dV * gv22 +
                  V * dgv22;
        out.d33 = dH * j.g33 + H * j.d33;
        return out;
    };
    return MetricFamily(std::move(jet), std::move(label), base.radius());
}

}  // namespace fhopf
