#pragma once
#include <functional>
#include <vector>

namespace fhopf {

// Gauss-Legendre nodes and weights on [-1, 1]. Cached per order.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

// Composite Gauss-Legendre quadrature specification. All evaluation points
// are strictly interior to (a, b), which keeps tan/cot integrands evaluable
// right up to the chart endpoints.
struct QuadratureSpec {
    int panels = 64;
    int nodes = 16;
};

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec = {});

// Composite quadrature with panel-doubling convergence control. Throws
// QuadratureFailure if doubling the panel count does not settle to rel_tol.
double integrate_to_convergence(const std::function<double(double)>& f,
                                double a, double b,
                                const QuadratureSpec& spec = {},
                                double rel_tol = 1e-10, int max_doublings = 6);

// Adaptive Simpson, tolerant of integrable endpoint behavior.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12, int max_depth = 48);

// F(s) = int_{s0}^{s} f, with checkpoints graded quadratically toward both
// endpoints of [lo, hi] and adaptive refinement between a checkpoint and the
// query point. Evaluation is read-only after construction.
class CumulativeIntegral {
public:
    CumulativeIntegral(std::function<double(double)> f, double lo, double hi,
                       double s0, int checkpoints = 512, double tol = 1e-13);

    double operator()(double s) const;

private:
    std::function<double(double)> f_;
    double lo_, hi_;
    std::vector<double> grid_;
    std::vector<double> cum_;  // integral from s0 to grid_[i]
    double tol_;
};

}  // namespace fhopf
