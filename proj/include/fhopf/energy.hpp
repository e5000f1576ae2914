#pragma once
#include <string>

#include "fhopf/charge.hpp"
#include "fhopf/metric.hpp"
#include "fhopf/profile.hpp"
#include "fhopf/quadrature.hpp"

namespace fhopf {

struct EnergyReport {
    int k = 0;
    int l = 0;
    long long Q = 0;
    double R = 1.0;
    double K = 0.0;
    double e_sigma1 = 0.0;
    double e_sigma2 = 0.0;
    double e_full = 0.0;
    double bound = 0.0;        // 16 pi^2 |Q| / R
    double bound_ratio = 0.0;  // e_sigma2 / bound
    QuadratureSpec quad;

    std::string to_json() const;
};

struct BoundReport {
    double ratio = 0.0;
    bool equality = false;  // ratio within tol of 1

    static BoundReport from(const EnergyReport& report, double tol = 1e-8);
};

// (2 pi^2 / R) int (k^2 tan s + l^2 cot s) alpha'^2 sin^2(alpha) ds, by
// composite quadrature with panel-doubling convergence control.
double reduced_sigma2_energy(const Profile& profile,
                             const AnsatzCharge& charge, double R,
                             const QuadratureSpec& quad = {});

// 16 pi^2 (k^2 - l^2) / (R ln(k^2/l^2)), continued by 16 pi^2 k^2 / R at
// |k| = |l| (the limit of the quotient).
double closed_form_sigma2_energy(const AnsatzCharge& charge, double R);

// 2 pi^2 R int [alpha'^2 + sin^2(alpha)(k^2/cos^2 s + l^2/sin^2 s)]
//              cos s sin s ds  —  the Dirichlet energy reduced to 1-D.
double reduced_dirichlet_energy(const Profile& profile,
                                const AnsatzCharge& charge, double R,
                                const QuadratureSpec& quad = {});

EnergyReport full_energy(const Profile& profile, const AnsatzCharge& charge,
                         double R, double K, const QuadratureSpec& quad = {});

// Same energies under an arbitrary metric of the family: integrates
// (1/2)(lambda1^2 + lambda2^2) and (1/2) lambda1^2 lambda2^2 against the
// volume density, with the 4 pi^2 angular factor. The report's R field
// carries the metric's nominal radius.
EnergyReport generalized_energy(const Profile& profile,
                                const AnsatzCharge& charge,
                                const MetricFamily& metric, double K,
                                const QuadratureSpec& quad = {});

}  // namespace fhopf
