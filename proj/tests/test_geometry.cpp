#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "fhopf/errors.hpp"
#include "fhopf/geometry.hpp"
#include "oracles.hpp"

using namespace fhopf;
using namespace testutil;

namespace {

MetricFamily wavy_conformal() {
    return MetricFamily::conformal(
        1.3, ScalarField{[](double s) { return 0.2 * std::sin(3.0 * s); },
                         [](double s) { return 0.6 * std::cos(3.0 * s); }});
}

MetricFamily split_metric(const AnsatzCharge& c) {
    ScalarField hs{[](double s) { return 1.0 + 0.1 * s; },
                   [](double) { return 0.1; }};
    ScalarField vs{[](double s) { return std::exp(-0.2 * s); },
                   [](double s) { return -0.2 * std::exp(-0.2 * s); }};
    return MetricFamily::frame_scaled(MetricFamily::canonical(0.8), c, hs, vs);
}

}  // namespace

TEST_CASE("metric jets: canonical components and derivatives") {
    const double R = 1.7;
    auto g = MetricFamily::canonical(R);
    for (double s : {0.3, 0.8, 1.2}) {
        const MetricJet j = g.jet(s);
        const double R2 = R * R;
        CHECK(j.g11 == doctest::Approx(R2 * std::cos(s) * std::cos(s)));
        CHECK(j.g22 == doctest::Approx(R2 * std::sin(s) * std::sin(s)));
        CHECK(j.g12 == 0.0);
        CHECK(j.g33 == doctest::Approx(R2));
        CHECK(j.d11 == doctest::Approx(-R2 * std::sin(2.0 * s)));
        CHECK(j.d22 == doctest::Approx(R2 * std::sin(2.0 * s)));
    }
}

TEST_CASE("metric jet derivatives match finite differences of components") {
    const AnsatzCharge c(3, 2);
    const double h = 1e-6;
    for (const auto& g :
         {MetricFamily::canonical(2.0), wavy_conformal(), split_metric(c)}) {
        for (double s : {0.25, 0.7, 1.1, 1.4}) {
            const MetricJet jp = g.jet(s + h), jm = g.jet(s - h);
            const MetricJet j = g.jet(s);
            CHECK(j.d11 ==
                  doctest::Approx((jp.g11 - jm.g11) / (2 * h)).epsilon(1e-5));
            CHECK(j.d12 ==
                  doctest::Approx((jp.g12 - jm.g12) / (2 * h)).epsilon(1e-5));
            CHECK(j.d22 ==
                  doctest::Approx((jp.g22 - jm.g22) / (2 * h)).epsilon(1e-5));
            CHECK(j.d33 ==
                  doctest::Approx((jp.g33 - jm.g33) / (2 * h)).epsilon(1e-5));
        }
    }
}

TEST_CASE("Christoffel symbols match the finite-difference oracle") {
    const AnsatzCharge c(2, 1);
    for (const auto& g :
         {MetricFamily::canonical(1.0), wavy_conformal(), split_metric(c)}) {
        for (double s : {0.3, 0.7854, 1.2, 1.45}) {
            const ChristoffelTable lib = christoffel(g, s);
            const ChristoffelTable ora = christoffel_fd(g, s);
            for (int k = 0; k < 3; ++k)
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j) {
                        CHECK(lib(k, i, j) ==
                              doctest::Approx(ora(k, i, j)).epsilon(1e-7));
                        CHECK(lib(k, i, j) ==
                              doctest::Approx(lib(k, j, i)));  // symmetry
                    }
        }
    }
}

TEST_CASE("adapted frame is orthonormal with a vertical third leg") {
    for (const AnsatzCharge c : {AnsatzCharge(1, 1), AnsatzCharge(3, 2),
                                 AnsatzCharge(-2, 5)}) {
        for (const auto& g : {MetricFamily::canonical(1.4), wavy_conformal(),
                              split_metric(c)}) {
            for (double s : {0.2, 0.9, 1.3}) {
                const MetricJet j = g.jet(s);
                const AdaptedFrame f = adapted_frame(g, c, s);
                CHECK(metric_dot(j, f.e1, f.e1) == doctest::Approx(1.0));
                CHECK(metric_dot(j, f.e2, f.e2) == doctest::Approx(1.0));
                CHECK(metric_dot(j, f.e3, f.e3) == doctest::Approx(1.0));
                CHECK(std::abs(metric_dot(j, f.e1, f.e2)) < 1e-12);
                CHECK(std::abs(metric_dot(j, f.e1, f.e3)) < 1e-12);
                CHECK(std::abs(metric_dot(j, f.e2, f.e3)) < 1e-12);
                // kernel of k dx1 + l dx2
                CHECK(std::abs(c.k * f.e3[0] + c.l * f.e3[1]) < 1e-12);
                CHECK(f.e3[2] == 0.0);
                // e1 points along d/ds
                CHECK(f.e1[0] == 0.0);
                CHECK(f.e1[1] == 0.0);
                CHECK(f.e1[2] == doctest::Approx(1.0 / std::sqrt(j.g33)));
            }
        }
    }
}

TEST_CASE("fibre mean curvature matches the flat-embedding oracle") {
    for (const AnsatzCharge c : {AnsatzCharge(1, 1), AnsatzCharge(2, 1),
                                 AnsatzCharge(3, -2)}) {
        for (double R : {1.0, 1.9}) {
            const auto g = MetricFamily::canonical(R);
            for (double s : {0.3, 0.7854, 1.1, 1.42}) {
                const VerticalCurvature mu = vertical_mean_curvature(g, c, s);
                const double oracle = fibre_curvature_embedded(R, c, s);
                CHECK(mu.along_e1 == doctest::Approx(oracle).epsilon(1e-10));
                CHECK(std::abs(mu.along_e2) < 1e-12);
            }
        }
    }
    // Hopf fibres of the round sphere are geodesics
    const auto g = MetricFamily::canonical(1.0);
    for (double s : {0.4, 0.9})
        CHECK(std::abs(vertical_mean_curvature(g, AnsatzCharge(1, 1), s)
                           .along_e1) < 1e-12);
}

TEST_CASE("volume density: canonical closed form and determinant identity") {
    for (double R : {1.0, 2.3}) {
        const auto g = MetricFamily::canonical(R);
        for (double s : {0.2, 0.7854, 1.3})
            CHECK(volume_density(g, s) ==
                  doctest::Approx(R * R * R * std::cos(s) * std::sin(s)));
    }
    const auto g = wavy_conformal();
    for (double s : {0.5, 1.0}) {
        const MetricJet j = g.jet(s);
        CHECK(volume_density(g, s) ==
              doctest::Approx(std::sqrt(j.det2() * j.g33)));
    }
}

TEST_CASE("degenerate and out-of-chart requests throw") {
    const auto g = MetricFamily::canonical(1.0);
    CHECK_THROWS_AS((void)christoffel(g, 0.0), DomainError);
    CHECK_THROWS_AS((void)christoffel(g, kHalfPi), DomainError);
    MetricFamily bad(
        [](double) {
            return MetricJet{1.0, 2.0, 1.0, 1.0, 0, 0, 0, 0};  // det2 < 0
        },
        "bad");
    CHECK_THROWS_AS((void)bad.jet(0.5), DegenerateMetric);
}
