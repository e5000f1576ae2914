#pragma once
#include <functional>
#include <string>

#include "fhopf/charge.hpp"
#include "fhopf/scalar_field.hpp"

namespace fhopf {

// Coordinate components of the block metric
//   g = g11 dx1^2 + 2 g12 dx1 dx2 + g22 dx2^2 + g33 ds^2
// at a fixed latitude s, together with their s-derivatives. The s-direction
// never mixes with the torus angles in this family.
struct MetricJet {
    double g11, g12, g22, g33;
    double d11, d12, d22, d33;

    double det2() const { return g11 * g22 - g12 * g12; }
    double ddet2() const {
        return d11 * g22 + g11 * d22 - 2.0 * g12 * d12;
    }
};

class MetricFamily {
public:
    MetricFamily(std::function<MetricJet(double)> jet, std::string label,
                 double radius = 0.0)
        : jet_(std::move(jet)), label_(std::move(label)), radius_(radius) {}

    // Components at s, with positivity enforced (throws DegenerateMetric).
    MetricJet jet(double s) const;

    const std::string& label() const { return label_; }
    double radius() const { return radius_; }

    // Round metric of S^3 with radius R.
    static MetricFamily canonical(double R);

    // e^{2 gamma(s)} times the canonical metric of radius R.
    static MetricFamily conformal(double R, ScalarField gamma);

    // hscale(s) * g^H + vscale(s) * g^V, split against the vertical line
    // ker(k dx1 + l dx2) of the given charge. Cross terms g12 appear in
    // coordinates; the block representation absorbs them natively.
    static MetricFamily frame_scaled(const MetricFamily& base,
                                     const AnsatzCharge& charge,
                                     ScalarField hscale, ScalarField vscale,
                                     std::string label = "frame-diagonal");

private:
    std::function<MetricJet(double)> jet_;
    std::string label_;
    double radius_;
};

// Throws DomainError unless s is strictly inside the chart (0, pi/2).
void require_interior(double s);

}  // namespace fhopf
