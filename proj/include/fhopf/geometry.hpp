#pragma once
#include <array>

#include "fhopf/charge.hpp"
#include "fhopf/metric.hpp"

namespace fhopf {

// Point of the torus chart on S^3. Indices: 0 = x1, 1 = x2, 2 = s.
struct TorusPoint {
    double x1;
    double x2;
    double s;
};

// All Christoffel symbols Gamma^k_{ij} at a fixed latitude. Symmetric in the
// lower pair. Only s-derivatives of the metric enter for this family.
struct ChristoffelTable {
    double gamma[3][3][3];  // [upper][lower i][lower j]

    double operator()(int k, int i, int j) const { return gamma[k][i][j]; }
};

ChristoffelTable christoffel(const MetricFamily& metric, double s);

// Orthonormal frame adapted to the ansatz: E1 along d/ds, E3 spanning the
// kernel of the differential (k E3^{x1} + l E3^{x2} = 0), E2 completing the
// horizontal space. Components in coordinate basis (x1, x2, s).
struct AdaptedFrame {
    std::array<double, 3> e1, e2, e3;
};

AdaptedFrame adapted_frame(const MetricFamily& metric,
                           const AnsatzCharge& charge, double s);

// Components of the fibre mean curvature mu^V = nabla_{E3} E3 against the
// horizontal frame. along_e2 vanishes identically for this ansatz family;
// tests assert it rather than assuming it.
struct VerticalCurvature {
    double along_e1;
    double along_e2;
};

VerticalCurvature vertical_mean_curvature(const MetricFamily& metric,
                                          const AnsatzCharge& charge,
                                          double s);

// sqrt(det g) of the full 3x3 metric at s.
double volume_density(const MetricFamily& metric, double s);

// Inner product of coordinate vectors under the block metric.
double metric_dot(const MetricJet& j, const std::array<double, 3>& a,
                  const std::array<double, 3>& b);

}  // namespace fhopf
