#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "fhopf/energy.hpp"
#include "fhopf/errors.hpp"
#include "fhopf/profile.hpp"
#include "fhopf/variation.hpp"
#include "oracles.hpp"

using namespace fhopf;
using namespace testutil;

namespace {

// uniform grid with values sampled from a profile
std::pair<std::vector<double>, std::vector<double>> sample(const Profile& p,
                                                           int n) {
    std::vector<double> nodes(n), vals(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = kHalfPi * i / (n - 1);
        vals[i] = p.value(nodes[i]);
    }
    vals.front() = 0.0;
    vals.back() = kPi;
    return {nodes, vals};
}

}  // namespace

TEST_CASE("discrete gradient equals finite differences of the energy") {
    const AnsatzCharge c(2, 1);
    const auto g = MetricFamily::canonical(1.0);
    FourierProfile p({0.2, -0.05});
    auto [nodes, vals] = sample(p, 64);
    for (EnergyKind kind : {EnergyKind::sigma1, EnergyKind::sigma2,
                            EnergyKind::sigma12, EnergyKind::energy4}) {
        const double K = 0.8;
        const auto grad = discrete_el_gradient(nodes, vals, c, kind, g, K);
        const double h = 1e-6;
        for (int j : {1, 13, 31, 62}) {
            auto vp = vals, vm = vals;
            vp[j] += h;
            vm[j] -= h;
            const double fd = (discrete_energy(nodes, vp, c, kind, g, K) -
                               discrete_energy(nodes, vm, c, kind, g, K)) /
                              (2.0 * h);
            // FD roundoff floor: eps * |E| / (2h) with |E| ~ 3e2
            CHECK(grad[j - 1] ==
                  doctest::Approx(fd).epsilon(5e-5).scale(1.0));
        }
    }
}

TEST_CASE("discrete gradient vanishes at closed-form critical profiles") {
    for (auto [k, l] : {std::pair{1, 1}, {2, 1}, {3, 2}}) {
        const AnsatzCharge c(k, l);
        auto [nodes, vals] = sample(*sigma2_profile(c), 2048);
        const auto grad = discrete_el_gradient(nodes, vals, c,
                                               EnergyKind::sigma2,
                                               MetricFamily::canonical(1.0));
        double sup = 0.0;
        for (double gi : grad) sup = std::max(sup, std::abs(gi));
        CHECK(sup < 1e-6);
    }
}

TEST_CASE("discrete Hessian at critical profiles is positive definite") {
    for (auto [k, l] : {std::pair{1, 1}, {3, 1}}) {
        const AnsatzCharge c(k, l);
        auto [nodes, vals] = sample(*sigma2_profile(c), 512);
        const HessianSummary h = hessian_spectrum(nodes, vals, c, 1.0);
        CHECK(h.negative_count == 0);
        CHECK(h.min_eigenvalue > 0.0);
        CHECK(h.dim == 510);
    }
}

TEST_CASE("second-variation form: spot value and positivity") {
    const AnsatzCharge c(1, 1);
    const auto p = sigma2_profile(c);
    // v = sin 2s at the linear profile: 4 pi^2 int sin^2 2s * 4 *
    // (tan + cot) ds = 32 pi^2
    const double spot = second_variation_value(
        *p, c, 1.0, VariationField{[](double s) { return std::sin(2 * s); }});
    CHECK(spot == doctest::Approx(32.0 * kPi * kPi).epsilon(1e-10));

    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double a = u(rng), b = u(rng), d = u(rng);
        const double val = second_variation_value(
            *sigma2_profile(AnsatzCharge(2, 1)), AnsatzCharge(2, 1), 1.0,
            VariationField{[=](double s) {
                return a * std::sin(2 * s) + b * std::sin(4 * s) +
                       d * std::sin(6 * s);
            }});
        CHECK(val >= 0.0);
    }
    CHECK_THROWS_AS(
        (void)second_variation_value(
            *p, c, 1.0, VariationField{[](double) { return 1.0; }}),
        InvalidParameter);
}

TEST_CASE("gradient flow descends from linear data to the closed form") {
    const AnsatzCharge c(2, 1);
    const int n = 258;
    std::vector<double> nodes(n), vals(n);
    for (int i = 0; i < n; ++i) {
        nodes[i] = kHalfPi * i / (n - 1);
        vals[i] = 2.0 * nodes[i];
    }
    FlowPolicy policy;
    policy.grad_tol = 1e-7;
    const FlowState st =
        gradient_flow(DiscreteProfile(nodes, vals), c, EnergyKind::sigma2,
                      MetricFamily::canonical(1.0), 0.0, policy);
    CHECK((st.converged || st.stalled));
    // monotone energy history
    for (std::size_t i = 1; i < st.energy_history.size(); ++i)
        CHECK(st.energy_history[i] <=
              st.energy_history[i - 1] +
                  1e-12 * std::abs(st.energy_history[i - 1]));
    const auto cf = sigma2_profile(c);
    double sup = 0.0;
    for (double s : st.profile.nodes())
        sup = std::max(sup, std::abs(st.profile.value(s) - cf->value(s)));
    CHECK(sup < 2e-4);  // discrete minimizer is O(h^2) from the continuum one
    CHECK(reduced_sigma2_energy(st.profile, c, 1.0) ==
          doctest::Approx(closed_form_sigma2_energy(c, 1.0)).epsilon(1e-7));
}

TEST_CASE("flow with closed-form data at equal windings needs no steps") {
    const AnsatzCharge c(1, 1);
    auto [nodes, vals] = sample(*sigma2_profile(c), 1026);
    FlowPolicy policy;
    policy.grad_tol = 1e-6;
    const FlowState st =
        gradient_flow(DiscreteProfile(nodes, vals), c, EnergyKind::sigma2,
                      MetricFamily::canonical(1.0), 0.0, policy);
    CHECK(st.converged);
    CHECK(st.steps_taken == 0);
}

TEST_CASE("grids must be uniform, pinned, and fine enough") {
    const AnsatzCharge c(1, 1);
    const auto g = MetricFamily::canonical(1.0);
    std::vector<double> few{0.0, 0.5, 1.0, kHalfPi};
    std::vector<double> fewv{0.0, 1.0, 2.0, kPi};
    CHECK_THROWS_AS(
        (void)discrete_energy(few, fewv, c, EnergyKind::sigma2, g),
        GridTooCoarse);
    auto [nodes, vals] = sample(*sigma2_profile(c), 64);
    auto skew = nodes;
    skew[10] += 1e-3;
    CHECK_THROWS_AS(
        (void)discrete_energy(skew, vals, c, EnergyKind::sigma2, g),
        InvalidParameter);
}
