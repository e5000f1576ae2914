#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "fhopf/energy.hpp"
#include "fhopf/profile.hpp"
#include "oracles.hpp"

using namespace fhopf;
using namespace testutil;

namespace {
const double kPi2 = kPi * kPi;
}

TEST_CASE("coupled energy of the linear profile is the topological value") {
    const AnsatzCharge c(1, 1);
    const auto p = sigma2_profile(c);
    CHECK(reduced_sigma2_energy(*p, c, 1.0) ==
          doctest::Approx(16.0 * kPi2).epsilon(1e-12));
    CHECK(reduced_sigma2_energy(*p, c, 2.0) ==
          doctest::Approx(8.0 * kPi2).epsilon(1e-12));
}

TEST_CASE("quadrature matches the closed-form energy table") {
    for (int k = 1; k <= 6; ++k)
        for (int l = 1; l <= k; ++l) {
            const AnsatzCharge c(k, l);
            const auto p = sigma2_profile(c);
            const double want = closed_form_sigma2_energy(c, 1.0);
            CHECK(reduced_sigma2_energy(*p, c, 1.0) ==
                  doctest::Approx(want).epsilon(1e-9));
            if (k == l)
                CHECK(want == doctest::Approx(16.0 * kPi2 * k * k));
        }
}

TEST_CASE("energy exceeds the linking-number bound, equality iff k = l") {
    for (auto [k, l] : {std::pair{1, 1}, {2, 1}, {3, 2}, {4, 4}, {5, 1}}) {
        const AnsatzCharge c(k, l);
        const auto rep = full_energy(*sigma2_profile(c), c, 1.0, 0.0);
        CHECK(rep.bound == doctest::Approx(16.0 * kPi2 * std::abs(k * l)));
        CHECK(rep.bound_ratio >= 1.0 - 1e-10);
        if (k == l)
            CHECK(rep.bound_ratio == doctest::Approx(1.0).epsilon(1e-10));
        else
            CHECK(rep.bound_ratio > 1.0 + 1e-4);
    }
    const auto rep21 = full_energy(*sigma2_profile(AnsatzCharge(2, 1)),
                                   AnsatzCharge(2, 1), 1.0, 0.0);
    CHECK(rep21.bound_ratio ==
          doctest::Approx(3.0 / (2.0 * std::log(4.0))).epsilon(1e-9));
}

TEST_CASE("reduced Dirichlet energy matches blind 3-D chart quadrature") {
    for (auto [k, l] : {std::pair{1, 1}, {2, 1}}) {
        const AnsatzCharge c(k, l);
        const auto p = sigma2_profile(c);
        for (double R : {1.0, 1.6}) {
            const double reduced = reduced_dirichlet_energy(*p, c, R);
            const double oracle = dirichlet_energy_chart_fd(*p, c, R);
            CHECK(reduced == doctest::Approx(oracle).epsilon(1e-6));
        }
    }
    // Hopf map on the unit sphere
    const AnsatzCharge c(1, 1);
    CHECK(reduced_dirichlet_energy(*sigma2_profile(c), c, 1.0) ==
          doctest::Approx(8.0 * kPi2).epsilon(1e-8));
}

TEST_CASE("full and generalized reports agree on the round metric") {
    const AnsatzCharge c(3, 2);
    const auto p = sigma2_profile(c);
    const double R = 1.4, K = 0.7;
    const EnergyReport a = full_energy(*p, c, R, K);
    const EnergyReport b =
        generalized_energy(*p, c, MetricFamily::canonical(R), K);
    CHECK(a.e_sigma1 == doctest::Approx(b.e_sigma1).epsilon(1e-9));
    CHECK(a.e_sigma2 == doctest::Approx(b.e_sigma2).epsilon(1e-9));
    CHECK(a.e_full ==
          doctest::Approx(a.e_sigma1 + K * a.e_sigma2).epsilon(1e-12));
    const BoundReport br = BoundReport::from(a);
    CHECK(br.ratio == doctest::Approx(a.bound_ratio));
    CHECK_FALSE(br.equality);
}

TEST_CASE("energies scale as 1/R and R respectively") {
    const AnsatzCharge c(2, 1);
    const auto p = sigma2_profile(c);
    CHECK(reduced_sigma2_energy(*p, c, 3.0) * 3.0 ==
          doctest::Approx(reduced_sigma2_energy(*p, c, 1.0)).epsilon(1e-11));
    CHECK(reduced_dirichlet_energy(*p, c, 3.0) / 3.0 ==
          doctest::Approx(reduced_dirichlet_energy(*p, c, 1.0))
              .epsilon(1e-11));
}
