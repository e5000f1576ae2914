#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "fhopf/profile.hpp"
#include "fhopf/residuals.hpp"
#include "oracles.hpp"

using namespace fhopf;
using namespace testutil;

TEST_CASE("hand-reduced harmonicity ODE on a synthetic profile") {
    // independent re-evaluation of each term
    const AnsatzCharge c(3, 2);
    FourierProfile p({0.2, -0.07});
    for (double s : {0.3, 0.8, 1.2}) {
        const double P = c.k * c.k / (std::cos(s) * std::cos(s)) +
                         c.l * c.l / (std::sin(s) * std::sin(s));
        const double want =
            p.deriv2(s) + (1.0 / std::tan(s) - std::tan(s)) * p.deriv(s) -
            P * std::sin(p.value(s)) * std::cos(p.value(s));
        CHECK(residual_harmonic(p, c, s) == doctest::Approx(want));
    }
}

TEST_CASE("geometric first equation = positive factor * reduced ODEs") {
    // The frame-level system under the round metric of radius R must equal
    // the hand-reduced equations times alpha'/R^3 (harmonic) and
    // sin(alpha) alpha'/R^5 applied to the bracket (coupled), pointwise.
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> su(0.15, kHalfPi - 0.15);
    std::uniform_real_distribution<double> Ru(0.7, 2.5);
    const std::pair<int, int> charges[] = {{1, 1}, {2, 1}, {3, 2}, {-2, 5}};
    for (int trial = 0; trial < 50; ++trial) {
        const auto [k, l] = charges[trial % 4];
        const AnsatzCharge c(k, l);
        const FourierProfile p = random_profile(rng);
        const double R = Ru(rng);
        const double s = su(rng);
        const auto g = MetricFamily::canonical(R);

        const SystemResidual h = residual_system(p, c, g, SystemKind::harmonic, s);
        const double want_h = p.deriv(s) / (R * R * R) *
                              residual_harmonic(p, c, s);
        CHECK(h.eq1 == doctest::Approx(want_h)
                           .epsilon(1e-8)
                           .scale(harmonic_scale(p, c, s) / (R * R * R)));
        CHECK(std::abs(h.eq2) < 1e-10 * std::max(1.0, h.scale2));

        const SystemResidual s2 = residual_system(p, c, g, SystemKind::sigma2, s);
        const Sigma2Residual red = residual_sigma2(p, c, s);
        const double want_s =
            std::sin(p.value(s)) * p.deriv(s) / std::pow(R, 5) * red.bracket;
        CHECK(s2.eq1 == doctest::Approx(want_s)
                            .epsilon(1e-8)
                            .scale(red.scale / std::pow(R, 5)));
        CHECK(std::abs(s2.eq2) < 1e-10 * std::max(1.0, s2.scale2));
    }
}

TEST_CASE("combined equation interpolates the two systems") {
    const AnsatzCharge c(2, 1);
    FourierProfile p({0.1, 0.03});
    const auto g = MetricFamily::canonical(1.0);
    for (double s : {0.4, 1.0}) {
        const auto h = residual_system(p, c, g, SystemKind::harmonic, s);
        const auto s2 = residual_system(p, c, g, SystemKind::sigma2, s);
        for (double K : {0.0, 0.5, 3.0}) {
            const CombinedResidual r = residual_sigma12(p, c, g, K, s);
            CHECK(r.value == doctest::Approx(h.eq1 + K * s2.eq1)
                                 .epsilon(1e-12)
                                 .scale(r.scale));
        }
    }
}

TEST_CASE("closed-form profiles annihilate their residuals") {
    for (auto [k, l] : {std::pair{1, 1}, {2, 1}, {3, 2}, {5, 1}, {4, 4}}) {
        const AnsatzCharge c(k, l);
        const auto rep = report_sigma2(*sigma2_profile(c), c, 500);
        CHECK(rep.norm_inf < 1e-10);
    }
    const auto reph = report_harmonic(HarmonicProfile(1, 1.0),
                                      AnsatzCharge(1, 1), 500);
    CHECK(reph.norm_inf < 1e-12);
    const auto repc = report_hc(HcProfile(AnsatzCharge(3, 2)),
                                AnsatzCharge(3, 2), 500);
    CHECK(repc.norm_inf < 1e-10);
}

TEST_CASE("reduced quartic-energy density is twice the coupled one on "
          "horizontally conformal profiles") {
    for (auto [k, l] : {std::pair{2, 1}, {3, 2}}) {
        const AnsatzCharge c(k, l);
        HcProfile p(c);
        for (double R : {1.0, 1.8})
            for (double s : {0.4, 0.7854, 1.2})
                CHECK(el_sigma2_reduced(p, c, R, s) /
                          el_energy4_reduced(p, c, R, s) ==
                      doctest::Approx(0.5).epsilon(1e-10));
    }
}

TEST_CASE("residual reports normalize by scale and finalize norms") {
    const AnsatzCharge c(2, 1);
    FourierProfile p({0.2});
    auto rep = report_harmonic(p, c, 200);
    REQUIRE(rep.grid.size() == 200);
    REQUIRE(rep.residuals.size() == 200);
    double inf = 0.0;
    for (std::size_t i = 0; i < rep.grid.size(); ++i)
        inf = std::max(inf, std::abs(rep.residuals[i]) / rep.scales[i]);
    CHECK(rep.norm_inf == doctest::Approx(inf));
    CHECK(rep.norm_inf > 1e-3);  // generic profile: far from critical
}
