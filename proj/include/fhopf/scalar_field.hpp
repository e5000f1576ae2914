#pragma once
#include <cmath>
#include <functional>
#include <utility>

namespace fhopf {

// A smooth function of the latitude s together with its first derivative.
// Metric deformations and criticality predicates all consume these pairs, so
// derivatives stay analytic end to end.
struct ScalarField {
    std::function<double(double)> value;
    std::function<double(double)> deriv;

    double operator()(double s) const { return value(s); }

    static ScalarField constant(double c) {
        return {[c](double) { return c; }, [](double) { return 0.0; }};
    }

    // field^p with the chain rule
    ScalarField pow(double p) const {
        auto v = value;
        auto d = deriv;
        return {[v, p](double s) { return std::pow(v(s), p); },
                [v, d, p](double s) {
                    return p * std::pow(v(s), p - 1.0) * d(s);
                }};
    }

    ScalarField operator*(const ScalarField& o) const {
        auto v1 = value, d1 = deriv, v2 = o.value, d2 = o.deriv;
        return {[v1, v2](double s) { return v1(s) * v2(s); },
                [v1, d1, v2, d2](double s) {
                    return d1(s) * v2(s) + v1(s) * d2(s);
                }};
    }
};

}  // namespace fhopf
