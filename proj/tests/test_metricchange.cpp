#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fhopf/ansatz.hpp"
#include "fhopf/errors.hpp"
#include "fhopf/metricchange.hpp"
#include "fhopf/profile.hpp"
#include "fhopf/residuals.hpp"
#include "fhopf/shooting.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace fhopf;
using namespace testutil;

namespace {

// harmonic-morphism configuration: first-order profile + the conformal
// metric that makes it harmonic
struct HmSetup {
    AnsatzCharge charge;
    ProfilePtr profile;
    MetricFamily base;
    DilationProfile dilation;
};

HmSetup hm_setup(int k, int l) {
    AnsatzCharge c(k, l);
    ProfilePtr p = std::make_shared<HcProfile>(c);
    auto gamma = conformal_gamma_for_harmonicity(p, c).field();
    auto base = MetricFamily::conformal(1.0, gamma);
    auto d = DilationProfile::from_metric(p, base);
    return {c, p, base, d};
}

double worst_eq1(const Profile& p, const AnsatzCharge& c,
                 const MetricFamily& g, SystemKind kind, int n = 49) {
    double w = 0.0;
    for (double s : interior_grid(n)) {
        const auto r = residual_system(p, c, g, kind, s);
        const auto sp = pullback_spectrum(c, p, g, s);
        w = std::max(w, std::abs(r.eq1) /
                            std::max(r.scale1,
                                     sp.lambda1_sq * sp.lambda2_sq));
    }
    return w;
}

}  // namespace

TEST_CASE("dilation profiles: constant, round-metric, and general-metric") {
    CHECK_THROWS_AS((void)DilationProfile::constant(-1.0), InvalidParameter);
    const AnsatzCharge c(2, 1);
    ProfilePtr p = std::make_shared<HcProfile>(c);
    const auto round = DilationProfile::from_profile(p, 2.0);
    const auto general =
        DilationProfile::from_metric(p, MetricFamily::canonical(2.0));
    for (double s : {0.4, 0.9, 1.3}) {
        CHECK(round.lambda.value(s) == doctest::Approx(p->deriv(s) / 2.0));
        CHECK(general.lambda.value(s) ==
              doctest::Approx(round.lambda.value(s)).epsilon(1e-12));
        // derivative consistent with finite differences
        const double h = 1e-6;
        CHECK(general.lambda.deriv(s) ==
              doctest::Approx((general.lambda.value(s + h) -
                               general.lambda.value(s - h)) /
                              (2 * h))
                  .epsilon(1e-6));
    }
}

TEST_CASE("conformal factors: formulas, guards, and dimension exclusions") {
    const auto d = DilationProfile::constant(1.5);
    // [1 + K(n-1) lambda^2]^{2/(m-2)}
    CHECK(conformal_sigma12_factor(d, 4, 2, 2.0).value(0.7) ==
          doctest::Approx(std::sqrt(1.0 + 2.0 * 2.25) *
                          std::sqrt(1.0 + 2.0 * 2.25)));
    CHECK(conformal_sigma2_factor(d, 6).value(0.5) ==
          doctest::Approx(std::pow(1.5, 1.0)));
    CHECK_THROWS_AS((void)conformal_sigma12_factor(d, 2, 2, 1.0),
                    InvalidDimension);
    CHECK_THROWS_AS((void)conformal_sigma2_factor(d, 2), InvalidDimension);
    CHECK_THROWS_AS((void)sigma2_critical_conformal_factor(d, 4),
                    InvalidDimension);
    CHECK(sigma2_critical_conformal_factor(d, 3).value(0.3) ==
          doctest::Approx(std::pow(1.5, 4.0)));
}

TEST_CASE("biconformal inverse-dilation metric is a Riemannian submersion "
          "and keeps coupled criticality") {
    for (auto [k, l] : {std::pair{1, 1}, {2, 1}, {3, 2}}) {
        const HmSetup hm = hm_setup(k, l);
        const auto g = biconformal_metric(hm.base, hm.charge,
                                          hm.dilation.lambda.pow(-1.0), 3, 2);
        double dev = 0.0;
        for (double s : interior_grid(49)) {
            const auto sp = pullback_spectrum(hm.charge, *hm.profile, g, s);
            dev = std::max({dev, std::abs(sp.lambda1_sq - 1.0),
                            std::abs(sp.lambda2_sq - 1.0)});
        }
        CHECK(dev < 1e-9);
        CHECK(worst_eq1(*hm.profile, hm.charge, g, SystemKind::sigma2) <
              1e-7);
        CHECK(worst_eq1(*hm.profile, hm.charge, g, SystemKind::harmonic) <
              1e-7);
    }
    CHECK_THROWS_AS((void)biconformal_metric(MetricFamily::canonical(1.0),
                                             AnsatzCharge(1, 1),
                                             ScalarField::constant(1.0), 3,
                                             3),
                    InvalidDimension);
}

TEST_CASE("harmonicity survives any biconformal vertical rescaling") {
    const HmSetup hm = hm_setup(2, 1);
    ScalarField rho{[](double s) { return 1.0 + 0.4 * std::sin(s); },
                    [](double s) { return 0.4 * std::cos(s); }};
    const auto g = biconformal_metric(hm.base, hm.charge, rho, 3, 2);
    CHECK(worst_eq1(*hm.profile, hm.charge, g, SystemKind::harmonic) < 1e-6);
}

TEST_CASE("constant-combination predicate: exact zeros and the quartic "
          "dimension") {
    const HmSetup hm = hm_setup(2, 1);
    // constant b and lambda: derivative of a constant
    const auto dconst = DilationProfile::constant(2.0);
    CHECK(prop_key_ii_residual(ScalarField::constant(1.3), dconst, 3, 2, 1.0,
                               0.8) == doctest::Approx(0.0).scale(1.0));
    // m = 4: b^2 = theta - K lambda^2 kills the combination identically
    const double K = 0.25, theta = 120.0;
    const auto lam = hm.dilation.lambda;
    ScalarField b{[lam, K, theta](double s) {
                      const double l = lam.value(s);
                      return std::sqrt(theta - K * l * l);
                  },
                  [lam, K, theta](double s) {
                      const double l = lam.value(s);
                      return -K * l * lam.deriv(s) /
                             std::sqrt(theta - K * l * l);
                  }};
    double w4 = 0.0;
    for (double s : interior_grid(19))
        w4 = std::max(w4,
                      std::abs(prop_key_ii_residual(b, hm.dilation, 4, 2, K, s)));
    CHECK(w4 < 1e-12);
    // strongly-coupled branch b = lambda^2 at m = 3: the K-proportional part
    // of the combination is constant, so residual(K)/K -> 0 as K grows
    const ScalarField b2 = lam.pow(2.0);
    double big = 0.0, small = 0.0;
    for (double s : interior_grid(19)) {
        big = std::max(big, std::abs(prop_key_ii_residual(b2, hm.dilation, 3,
                                                          2, 1e8, s)) /
                                1e8);
        small = std::max(small, std::abs(prop_key_ii_residual(
                                    b2, hm.dilation, 3, 2, 1.0, s)));
    }
    CHECK(big < 1e-5);
    CHECK(small > 1.0);  // the K = 1 residual is genuinely nonzero
}

TEST_CASE("coupled conformal scale solves the quadratic and certifies "
          "criticality") {
    for (auto [k, l] : {std::pair{2, 1}, {3, 2}}) {
        const HmSetup hm = hm_setup(k, l);
        double lmax = 0.0;
        for (double s : interior_grid(199))
            lmax = std::max(lmax, hm.dilation.lambda.value(s));
        for (double K : {0.1, 1.0, 10.0}) {
            const double theta = 5.0 * std::sqrt(K) * lmax;
            const ScalarField b =
                coupled_conformal_scale(hm.dilation, 2, K, theta);
            double wpred = 0.0, wroot = 0.0;
            for (double s : interior_grid(19)) {
                const double bv = b.value(s);
                const double lv = hm.dilation.lambda.value(s);
                wroot = std::max(wroot, std::abs(bv * bv - theta * bv +
                                                 K * lv * lv));
                wpred = std::max(wpred,
                                 std::abs(prop_key_ii_residual(
                                     b, hm.dilation, 3, 2, K, s)));
            }
            CHECK(wroot < 1e-10 * theta * theta);
            CHECK(wpred < 1e-10);
            // deformed metric b^2 * base: combined residual vanishes
            auto gamma0 = conformal_gamma_for_harmonicity(hm.profile,
                                                          hm.charge)
                              .field();
            ScalarField gtot{[gamma0, b](double s) {
                                 return gamma0.value(s) +
                                        std::log(b.value(s));
                             },
                             [gamma0, b](double s) {
                                 return gamma0.deriv(s) +
                                        b.deriv(s) / b.value(s);
                             }};
            const auto g = MetricFamily::conformal(1.0, gtot);
            double wc = 0.0;
            for (double s : interior_grid(49)) {
                const auto r = residual_sigma12(*hm.profile, hm.charge, g, K, s);
                wc = std::max(wc, std::abs(r.value) / r.scale);
            }
            CHECK(wc < 1e-6);
        }
        CHECK_THROWS_AS(
            (void)coupled_conformal_scale(hm.dilation, 2, 1.0, 1e-6)
                .value(0.7854),
            InvalidParameter);
    }
}

TEST_CASE("split-preservation predicate and its dichotomy") {
    // rho = sigma^2 makes sigma^2 rho^{2-m} constant at m = 3
    ScalarField sg{[](double s) { return 1.0 + 0.3 * std::sin(2 * s); },
                   [](double s) { return 0.6 * std::cos(2 * s); }};
    for (double s : {0.3, 0.8, 1.2})
        CHECK(lemma_le_predicate(sg, sg.pow(2.0), 3, s) ==
              doctest::Approx(0.0).scale(1.0));
    CHECK(lemma_le_predicate(ScalarField::constant(1.2),
                             ScalarField::constant(0.7), 5, 0.9) ==
          doctest::Approx(0.0).scale(1.0));
    // equal factors: predicate = d/ds sigma != 0
    CHECK(std::abs(lemma_le_predicate(sg, sg, 3, 0.3)) > 1e-3);

    // downstream: sigma2 criticality preserved iff rho = sigma^2
    const AnsatzCharge c(2, 1);
    const auto p = sigma2_profile(c);
    const auto can = MetricFamily::canonical(1.0);
    const double good = worst_eq1(
        *p, c, hv_metric(can, c, sg, sg.pow(2.0)), SystemKind::sigma2);
    const double bad = worst_eq1(*p, c, hv_metric(can, c, sg, sg.pow(3.0)),
                                 SystemKind::sigma2);
    CHECK(good < 1e-7);
    CHECK(bad > 1e3 * good);
}

TEST_CASE("full-criticality deformation: trivial at equal windings, "
          "positive and effective otherwise") {
    const auto can = MetricFamily::canonical(1.0);
    {
        const AnsatzCharge c(1, 1);
        const GammaGrid gg = sigma_for_full_criticality(sigma2_profile(c), c);
        for (double v : gg.values) CHECK(v == doctest::Approx(1.0));
    }
    for (auto [k, l] : {std::pair{2, 1}, {3, 2}}) {
        const AnsatzCharge c(k, l);
        const auto p = sigma2_profile(c);
        const GammaGrid gg = sigma_for_full_criticality(p, c);
        for (double v : gg.values) CHECK(v > 0.0);
        const auto sgf = gg.field();
        const auto g = hv_metric(can, c, sgf, sgf.pow(2.0));
        // verification away from the chart ends, where sigma blows up like
        // a power of the boundary distance for k != l
        double w2 = 0.0, w12 = 0.0;
        for (int i = 1; i <= 99; ++i) {
            const double s = 0.05 + (kHalfPi - 0.1) * i / 100.0;
            const auto r2 = residual_system(*p, c, g, SystemKind::sigma2, s);
            w2 = std::max(w2, std::abs(r2.eq1) / r2.scale1);
            for (double K : {0.1, 1.0, 10.0}) {
                const auto rc = residual_sigma12(*p, c, g, K, s);
                w12 = std::max(w12, std::abs(rc.value) / rc.scale);
            }
        }
        CHECK(w2 < 1e-7);
        CHECK(w12 < 1e-6);
    }
}

TEST_CASE("metric recipes serialize to parseable JSON") {
    const auto f = ScalarField{[](double s) { return 1.0 + s; },
                               [](double) { return 1.0; }};
    const MetricRecipe r = MetricRecipe::sample("demo", f, 3, 2, 0.5, 17);
    const auto j = nlohmann::json::parse(r.to_json());
    CHECK(j["kind"] == "demo");
    CHECK(j["m"] == 3);
    CHECK(j["n"] == 2);
    CHECK(j["K"] == 0.5);
    REQUIRE(j["parameters"]["s"].size() == 17);
    CHECK(j["parameters"]["value"][0].get<double>() ==
          doctest::Approx(1.0 + j["parameters"]["s"][0].get<double>()));
}
