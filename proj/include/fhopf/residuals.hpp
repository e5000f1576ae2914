#pragma once
#include <string>
#include <vector>

#include "fhopf/charge.hpp"
#include "fhopf/metric.hpp"
#include "fhopf/profile.hpp"

namespace fhopf {

// alpha' - sin(alpha) sqrt(k^2/cos^2 s + l^2/sin^2 s), the + branch of the
// horizontal conformality condition.
double residual_hc(const Profile& profile, const AnsatzCharge& charge,
                   double s);

// Left side of the harmonicity ODE
// alpha'' + (cot s - tan s) alpha' - (k^2/cos^2 s + l^2/sin^2 s) sin a cos a.
double residual_harmonic(const Profile& profile, const AnsatzCharge& charge,
                         double s);

// Magnitude of the largest individual term of the harmonicity ODE at s; used
// to normalize residuals, whose terms grow unboundedly near the endpoints.
double harmonic_scale(const Profile& profile, const AnsatzCharge& charge,
                      double s);

// The strongly coupled Euler-Lagrange ODE in factored form. bracket is the
// second-order factor; full = alpha' sin(alpha) * bracket.
struct Sigma2Residual {
    double bracket;
    double full;
    double scale;  // max magnitude among the bracket's individual terms
};

Sigma2Residual residual_sigma2(const Profile& profile,
                               const AnsatzCharge& charge, double s);

// Frame-level criticality systems evaluated geometrically from Christoffel
// symbols, adapted frames, fibre curvature and the pullback spectrum. This
// route is independent of the hand-reduced ODEs above.
enum class SystemKind { harmonic, sigma2 };

struct SystemResidual {
    double eq1;
    double eq2;
    double scale1;
    double scale2;
};

SystemResidual residual_system(const Profile& profile,
                               const AnsatzCharge& charge,
                               const MetricFamily& metric, SystemKind kind,
                               double s);

// Combined first equation of the full model: harmonic eq1 + K * sigma2 eq1,
// both computed geometrically under the supplied metric.
struct CombinedResidual {
    double value;
    double scale;
};

CombinedResidual residual_sigma12(const Profile& profile,
                                  const AnsatzCharge& charge,
                                  const MetricFamily& metric, double K,
                                  double s);

// Euler-Lagrange density of the reduced strongly coupled energy
// (2 pi^2/R) int (k^2 tan s + l^2 cot s) alpha'^2 sin^2 alpha ds.
double el_sigma2_reduced(const Profile& profile, const AnsatzCharge& charge,
                         double R, double s);

// Euler-Lagrange density of the reduced 4-energy (1/4) int |dphi|^4.
double el_energy4_reduced(const Profile& profile, const AnsatzCharge& charge,
                          double R, double s);

// Per-equation residual sweep over an interior grid. norm_inf and norm_l2
// are taken over scale-normalized residuals; raw values stay in residuals.
struct ResidualReport {
    std::string equation;
    std::vector<double> grid;
    std::vector<double> residuals;
    std::vector<double> scales;
    double norm_inf = 0.0;
    double norm_l2 = 0.0;

    void finalize();
    void save_csv(const std::string& path) const;
    std::string summary_json() const;
};

// Uniform interior grid s_i = (pi/2) i/(n+1), i = 1..n.
std::vector<double> interior_grid(int n);

ResidualReport report_hc(const Profile& profile, const AnsatzCharge& charge,
                         int n);
ResidualReport report_harmonic(const Profile& profile,
                               const AnsatzCharge& charge, int n);
ResidualReport report_sigma2(const Profile& profile,
                             const AnsatzCharge& charge, int n);
ResidualReport report_system(const Profile& profile,
                             const AnsatzCharge& charge,
                             const MetricFamily& metric, SystemKind kind,
                             int n);
ResidualReport report_sigma12(const Profile& profile,
                              const AnsatzCharge& charge,
                              const MetricFamily& metric, double K, int n);

}  // namespace fhopf
