#pragma once
#include <functional>
#include <string>
#include <vector>

#include "fhopf/charge.hpp"
#include "fhopf/metric.hpp"
#include "fhopf/profile.hpp"
#include "fhopf/quadrature.hpp"

namespace fhopf {

enum class EnergyKind { sigma1, sigma2, sigma12, energy4 };

// Fixed-endpoint variation direction: v(0) = v(pi/2) = 0.
struct VariationField {
    std::function<double(double)> value;
};

// Midpoint-cell discretization of the reduced energy on a uniform grid:
// each cell evaluates the Lagrangian at the averaged nodal value and the
// one-sided difference quotient, so rough (alternating) modes are penalized
// and the discrete functional stays bounded below. values includes both
// boundary entries (pinned).
double discrete_energy(const std::vector<double>& nodes,
                       const std::vector<double>& values,
                       const AnsatzCharge& charge, EnergyKind kind,
                       const MetricFamily& metric, double K = 0.0);

// Exact gradient of discrete_energy with respect to the interior nodal
// values (size = values.size() - 2). Each node couples only to its two
// adjacent cells.
std::vector<double> discrete_el_gradient(const std::vector<double>& nodes,
                                         const std::vector<double>& values,
                                         const AnsatzCharge& charge,
                                         EnergyKind kind,
                                         const MetricFamily& metric,
                                         double K = 0.0);

// (4 pi^2 / R) int v^2 alpha'^2 (k^2 tan s + l^2 cot s) ds — the second
// variation of the reduced strongly coupled energy at a critical profile.
double second_variation_value(const Profile& profile,
                              const AnsatzCharge& charge, double R,
                              const VariationField& v,
                              const QuadratureSpec& quad = {});

struct HessianSummary {
    double min_eigenvalue;
    double max_eigenvalue;
    int dim;
    int negative_count;  // eigenvalues below -1e-8 * max
};

// Dense spectrum of the discrete Hessian of the strongly coupled functional
// at the given grid profile (canonical metric of radius R). The matrix is
// tridiagonal by construction and assembled analytically.
HessianSummary hessian_spectrum(const std::vector<double>& nodes,
                                const std::vector<double>& values,
                                const AnsatzCharge& charge, double R);

struct FlowState {
    DiscreteProfile profile;
    int steps_taken = 0;
    bool converged = false;  // gradient sup-norm reached grad_tol
    bool stalled = false;    // descent exhausted at machine precision
    double final_discrete_energy = 0.0;
    std::vector<double> energy_history;
    std::vector<double> grad_norm_history;
    std::vector<double> step_history;

    // CSV rows (step, energy, grad_norm, step_size)
    void save_history_csv(const std::string& path) const;
};

struct FlowPolicy {
    int max_steps = 200000;
    double grad_tol = 1e-8;       // sup-norm termination
    double initial_step = 1e-2;   // Armijo backtracking, factor 0.5
    double armijo_c = 1e-4;
    double max_step = 1.0;
};

// Projected gradient descent on interior nodal values, boundary pinned.
// Accepted steps are reused (and grown) as the next trial step, so the
// line search stays cheap away from the endpoint anisotropy.
FlowState gradient_flow(const DiscreteProfile& initial,
                        const AnsatzCharge& charge, EnergyKind kind,
                        const MetricFamily& metric, double K = 0.0,
                        const FlowPolicy& policy = {});

}  // namespace fhopf
