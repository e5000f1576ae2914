#include "fhopf/variation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "fhopf/errors.hpp"

namespace fhopf {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
const double kFourPi2 = 4.0 * std::numbers::pi * std::numbers::pi;

// s-dependent coefficients of the pointwise Lagrangians:
// lambda1^2 = A alpha'^2, lambda2^2 = M sin^2 alpha, volume density V.
struct Coeffs {
    double A, M, V;
};

Coeffs coeffs(const MetricFamily& metric, const AnsatzCharge& ch, double s) {
    const MetricJet j = metric.jet(s);
    const double M = (ch.k * ch.k * j.g22 - 2.0 * ch.k * ch.l * j.g12 +
                      ch.l * ch.l * j.g11) /
                     j.det2();
    return {1.0 / j.g33, M, std::sqrt(j.det2() * j.g33)};
}

struct Lag {
    double L, La, Lap;
};

Lag lagrangian(const Coeffs& c, EnergyKind kind, double K, double x,
               double y) {
    const double sx = std::sin(x);
    const double l1 = c.A * y * y;
    const double l2 = c.M * sx * sx;
    const double dl1_dy = 2.0 * c.A * y;
    const double dl2_dx = c.M * std::sin(2.0 * x);
    const double w = kFourPi2 * c.V;
    switch (kind) {
        case EnergyKind::sigma1:
            return {0.5 * w * (l1 + l2), 0.5 * w * dl2_dx,
                    0.5 * w * dl1_dy};
        case EnergyKind::sigma2:
            return {0.5 * w * l1 * l2, 0.5 * w * l1 * dl2_dx,
                    0.5 * w * dl1_dy * l2};
        case EnergyKind::sigma12: {
            const Lag a = lagrangian(c, EnergyKind::sigma1, 0.0, x, y);
            const Lag b = lagrangian(c, EnergyKind::sigma2, 0.0, x, y);
            return {a.L + K * b.L, a.La + K * b.La, a.Lap + K * b.Lap};
        }
        case EnergyKind::energy4: {
            const double B = l1 + l2;
            return {0.25 * w * B * B, 0.5 * w * B * dl2_dx,
                    0.5 * w * B * dl1_dy};
        }
    }
    throw InvalidParameter("unknown energy kind");
}

double check_uniform(const std::vector<double>& nodes,
                     const std::vector<double>& values) {
    if (nodes.size() != values.size() || nodes.size() < 34)
        throw GridTooCoarse("need at least 32 interior nodes");
    const double h = nodes[1] - nodes[0];
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (std::abs(nodes[i] - nodes[i - 1] - h) > 1e-12)
            throw InvalidParameter("grid must be uniform");
    if (std::abs(nodes.front()) > 1e-12 ||
        std::abs(nodes.back() - kHalfPi) > 1e-12)
        throw InvalidParameter("grid must span [0, pi/2]");
    return h;
}

}  // namespace

double discrete_energy(const std::vector<double>& nodes,
                       const std::vector<double>& values,
                       const AnsatzCharge& charge, EnergyKind kind,
                       const MetricFamily& metric, double K) {
    const double h = check_uniform(nodes, values);
    const int ncell = static_cast<int>(nodes.size()) - 1;
    double total = 0.0;
    for (int i = 0; i < ncell; ++i) {
        const double x = 0.5 * (values[i] + values[i + 1]);
        const double d = (values[i + 1] - values[i]) / h;
        const Coeffs c = coeffs(metric, charge, nodes[i] + 0.5 * h);
        total += lagrangian(c, kind, K, x, d).L;
    }
    return h * total;
}

std::vector<double> discrete_el_gradient(const std::vector<double>& nodes,
                                         const std::vector<double>& values,
                                         const AnsatzCharge& charge,
                                         EnergyKind kind,
                                         const MetricFamily& metric,
                                         double K) {
    const double h = check_uniform(nodes, values);
    const int n = static_cast<int>(nodes.size()) - 2;
    // per-cell partials; cell i sits between nodes i and i+1
    std::vector<double> La(n + 1), Lap(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double x = 0.5 * (values[i] + values[i + 1]);
        const double d = (values[i + 1] - values[i]) / h;
        const Coeffs c = coeffs(metric, charge, nodes[i] + 0.5 * h);
        const Lag lg = lagrangian(c, kind, K, x, d);
        La[i] = lg.La;
        Lap[i] = lg.Lap;
    }
    std::vector<double> grad(n);
    for (int j = 1; j <= n; ++j)
        grad[j - 1] =
            0.5 * h * (La[j - 1] + La[j]) + (Lap[j - 1] - Lap[j]);
    return grad;
}

double second_variation_value(const Profile& profile,
                              const AnsatzCharge& charge, double R,
                              const VariationField& v,
                              const QuadratureSpec& quad) {
    if (!(R > 0.0)) throw InvalidParameter("radius must be positive");
    if (std::abs(v.value(0.0)) > 1e-10 ||
        std::abs(v.value(kHalfPi)) > 1e-10)
        throw InvalidParameter("variation field must vanish at endpoints");
    auto f = [&](double s) {
        const double vs = v.value(s);
        const double ap = profile.deriv(s);
        const double W = charge.k * charge.k * std::tan(s) +
                         charge.l * charge.l / std::tan(s);
        return vs * vs * ap * ap * W;
    };
    return kFourPi2 / R * integrate_to_convergence(f, 0.0, kHalfPi, quad);
}

HessianSummary hessian_spectrum(const std::vector<double>& nodes,
                                const std::vector<double>& values,
                                const AnsatzCharge& charge, double R) {
    const double h = check_uniform(nodes, values);
    const int n = static_cast<int>(nodes.size()) - 2;
    const MetricFamily metric = MetricFamily::canonical(R);

    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i <= n; ++i) {
        const Coeffs cf = coeffs(metric, charge, nodes[i] + 0.5 * h);
        const double c = 0.5 * kFourPi2 * cf.V * cf.A * cf.M;
        const double x = 0.5 * (values[i] + values[i + 1]);
        const double y = (values[i + 1] - values[i]) / h;
        // L = c y^2 sin^2 x on the cell between nodes i and i+1
        const double Lxx = 2.0 * c * y * y * std::cos(2.0 * x);
        const double Lxy = 2.0 * c * y * std::sin(2.0 * x);
        const double Lyy = 2.0 * c * std::sin(x) * std::sin(x);
        // x couples with weight 1/2 to both cell nodes, y with -/+ 1/h
        const double px = 0.5;
        const double py[2] = {-1.0 / h, 1.0 / h};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                const int ia = i + a, ib = i + b;
                if (ia < 1 || ia > n || ib < 1 || ib > n) continue;
                H(ia - 1, ib - 1) +=
                    h * (Lxx * px * px + Lxy * px * (py[a] + py[b]) +
                         Lyy * py[a] * py[b]);
            }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H,
                                                      Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    HessianSummary out{ev(0), ev(n - 1), n, 0};
    const double floor = -1e-8 * std::max(std::abs(ev(n - 1)), 1.0);
    for (int i = 0; i < n; ++i)
        if (ev(i) < floor) ++out.negative_count;
    return out;
}

void FlowState::save_history_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw InvalidParameter("cannot open " + path + " for writing");
    std::fprintf(f, "step,energy,grad_norm,step_size\n");
    for (std::size_t i = 0; i < energy_history.size(); ++i)
        std::fprintf(f, "%zu,%.17g,%.17g,%.17g\n", i, energy_history[i],
                     grad_norm_history[i], step_history[i]);
    std::fclose(f);
}

FlowState gradient_flow(const DiscreteProfile& initial,
                        const AnsatzCharge& charge, EnergyKind kind,
                        const MetricFamily& metric, double K,
                        const FlowPolicy& policy) {
    const std::vector<double>& nodes = initial.nodes();
    std::vector<double> values = initial.values();
    check_uniform(nodes, values);
    const int n = static_cast<int>(nodes.size()) - 2;

    auto energy = [&](const std::vector<double>& v) {
        return discrete_energy(nodes, v, charge, kind, metric, K);
    };

    FlowState st{DiscreteProfile(nodes, values), 0,  false, false,
                 0.0,
                 {},
                 {},
                 {}};
    double e = energy(values);
    double e_window = e;
    double step = policy.initial_step;
    std::vector<double> trial(values.size());
    std::vector<double> g_prev(n, 0.0), x_prev(n, 0.0);
    int it = 0;
    for (; it < policy.max_steps; ++it) {
        const std::vector<double> g =
            discrete_el_gradient(nodes, values, charge, kind, metric, K);
        double gnorm = 0.0, gsq = 0.0;
        for (double gi : g) {
            gnorm = std::max(gnorm, std::abs(gi));
            gsq += gi * gi;
        }
        st.energy_history.push_back(e);
        st.grad_norm_history.push_back(gnorm);
        st.step_history.push_back(step);
        if (gnorm < policy.grad_tol) {
            st.converged = true;
            break;
        }
        // Barzilai-Borwein trial step (spectral estimate from the last
        // accepted move); Armijo backtracking keeps descent monotone.
        if (it > 0) {
            double sy = 0.0, yy = 0.0;
            for (int j = 0; j < n; ++j) {
                const double sj = values[j + 1] - x_prev[j];
                const double yj = g[j] - g_prev[j];
                sy += sj * yj;
                yy += yj * yj;
            }
            if (sy > 0.0 && yy > 0.0)
                step = std::clamp(sy / yy, 1e-12, policy.max_step);
        }
        for (int j = 0; j < n; ++j) {
            x_prev[j] = values[j + 1];
            g_prev[j] = g[j];
        }
        // measured-progress stop: once the energy decrease over a window
        // falls below the rounding floor of the energy itself, further
        // descent is numerically meaningless
        if (it % 200 == 0) {
            if (it > 0 && e_window - e < 1e-14 * std::abs(e)) {
                st.stalled = true;
                break;
            }
            e_window = e;
        }
        bool accepted = false;
        double t = step;
        const double slack = 4e-16 * std::abs(e);
        while (t > 1e-18) {
            trial = values;
            for (int j = 0; j < n; ++j) trial[j + 1] -= t * g[j];
            const double et = energy(trial);
            if (et <= e - policy.armijo_c * t * gsq + slack) {
                values.swap(trial);
                e = et;
                step = t;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted)
            throw LineSearchFailure("Armijo backtracking stalled");
    }
    st.steps_taken = it;
    st.final_discrete_energy = e;
    st.profile = DiscreteProfile(nodes, values);
    return st;
}

}  // namespace fhopf
