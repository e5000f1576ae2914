#include "fhopf/geometry.hpp"

#include <cmath>
#include <cstring>

#include "fhopf/errors.hpp"

namespace fhopf {

double metric_dot(const MetricJet& j, const std::array<double, 3>& a,
                  const std::array<double, 3>& b) {
    return j.g11 * a[0] * b[0] + j.g12 * (a[0] * b[1] + a[1] * b[0]) +
           j.g22 * a[1] * b[1] + j.g33 * a[2] * b[2];
}

ChristoffelTable christoffel(const MetricFamily& metric, double s) {
    require_interior(s);
    const MetricJet j = metric.jet(s);

    ChristoffelTable t;
    std::memset(t.gamma, 0, sizeof(t.gamma));

    // Only d/ds of the metric is nonzero, so the table reduces to
    //   Gamma^s_{ab} = -g'_{ab} / (2 g33)          (a, b angular)
    //   Gamma^a_{b s} = (1/2) (g2^{-1} g2')^a_b
    //   Gamma^s_{s s} = g33' / (2 g33)
    const double det = j.det2();
    const double i11 = j.g22 / det, i12 = -j.g12 / det, i22 = j.g11 / det;

    t.gamma[2][0][0] = -j.d11 / (2.0 * j.g33);
    t.gamma[2][0][1] = t.gamma[2][1][0] = -j.d12 / (2.0 * j.g33);
    t.gamma[2][1][1] = -j.d22 / (2.0 * j.g33);
    t.gamma[2][2][2] = j.d33 / (2.0 * j.g33);

    const double m00 = 0.5 * (i11 * j.d11 + i12 * j.d12);
    const double m01 = 0.5 * (i11 * j.d12 + i12 * j.d22);
    const double m10 = 0.5 * (i12 * j.d11 + i22 * j.d12);
    const double m11 = 0.5 * (i12 * j.d12 + i22 * j.d22);
    t.gamma[0][0][2] = t.gamma[0][2][0] = m00;
    t.gamma[0][1][2] = t.gamma[0][2][1] = m01;
    t.gamma[1][0][2] = t.gamma[1][2][0] = m10;
    t.gamma[1][1][2] = t.gamma[1][2][1] = m11;
    return t;
}

AdaptedFrame adapted_frame(const MetricFamily& metric,
                           const AnsatzCharge& charge, double s) {
    require_interior(s);
    const MetricJet j = metric.jet(s);

    AdaptedFrame f;
    f.e1 = {0.0, 0.0, 1.0 / std::sqrt(j.g33)};

    const double v1 = charge.l, v2 = -charge.k;
    const double nv = std::sqrt(metric_dot(j, {v1, v2, 0.0}, {v1, v2, 0.0}));
    f.e3 = {v1 / nv, v2 / nv, 0.0};

    // Angular vector orthogonal to the fibre direction.
    const double w1 = charge.k * j.g22 - charge.l * j.g12;
    const double w2 = charge.l * j.g11 - charge.k * j.g12;
    const double nw = std::sqrt(metric_dot(j, {w1, w2, 0.0}, {w1, w2, 0.0}));
    f.e2 = {w1 / nw, w2 / nw, 0.0};
    return f;
}

VerticalCurvature vertical_mean_curvature(const MetricFamily& metric,
                                          const AnsatzCharge& charge,
                                          double s) {
    const ChristoffelTable t = christoffel(metric, s);
    const AdaptedFrame f = adapted_frame(metric, charge, s);
    const MetricJet j = metric.jet(s);

    // nabla_{E3} E3: the frame components depend on s only and E3 has no
    // s-component, so the directional-derivative part drops out and the
    // contraction with the Christoffel table remains.
    std::array<double, 3> acc{0.0, 0.0, 0.0};
    for (int k = 0; k < 3; ++k) {
        double sum = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int jj = 0; jj < 3; ++jj)
                sum += f.e3[i] * f.e3[jj] * t(k, i, jj);
        acc[k] = sum;
    }
    return {metric_dot(j, acc, f.e1), metric_dot(j, acc, f.e2)};
}

double volume_density(const MetricFamily& metric, double s) {
    require_interior(s);
    const MetricJet j = metric.jet(s);
    return std::sqrt(j.det2() * j.g33);
}

}  // namespace fhopf
