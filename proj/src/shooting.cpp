#include "fhopf/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "fhopf/errors.hpp"
#include "fhopf/ode.hpp"
#include "fhopf/residuals.hpp"

namespace fhopf {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kPi = std::numbers::pi;

void check(const ShootingConfig& c) {
    if (!(c.eps > 0.0) || c.eps >= 0.1)
        throw InvalidParameter("start offset must lie in (0, 0.1)");
    if (!(c.c_lo < c.c_hi) || !(c.c_lo > 0.0))
        throw InvalidParameter("slope bracket must satisfy 0 < c_lo < c_hi");
    if (c.grid_size < 5) throw InvalidParameter("grid too small");
}

double coupling_P(const AnsatzCharge& ch, double s) {
    const double c = std::cos(s), sn = std::sin(s);
    return static_cast<double>(ch.k) * ch.k / (c * c) +
           static_cast<double>(ch.l) * ch.l / (sn * sn);
}

// Q/P of the linearized (u = cos alpha) equation, Q = k^2/(sin s cos^3 s)
// - l^2/(cos s sin^3 s). Behaves like -1/s near 0 and +1/(s - pi/2) near
// pi/2, so exp(-int Q/P) vanishes linearly at both chart ends.
double ratio_QP(const AnsatzCharge& ch, double s) {
    const double c = std::cos(s), sn = std::sin(s);
    const double Q = static_cast<double>(ch.k) * ch.k / (sn * c * c * c) -
                     static_cast<double>(ch.l) * ch.l / (c * sn * sn * sn);
    return Q / coupling_P(ch, s);
}

std::vector<double> uniform_nodes(int n) {
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
        out[i] = kHalfPi * i / (n - 1);
    return out;
}

DiscreteProfile sigma2_linear_route(const AnsatzCharge& charge,
                                    const ShootingConfig& cfg) {
    const double eps = cfg.eps;

    // w(s) = -int_{pi/4}^s Q/P diverges like ln(distance to endpoint), so
    // it is accumulated by adaptive quadrature down to eps only; e^w decays
    // linearly there and is extended linearly onto the eps-tails.
    CumulativeIntegral w_int([&](double s) { return -ratio_QP(charge, s); },
                             eps, kHalfPi - eps, kHalfPi / 2.0, 512, 1e-13);
    const double ew_lo = std::exp(w_int(eps));
    const double ew_hi = std::exp(w_int(kHalfPi - eps));
    auto ew = [&](double s) {
        if (s <= eps) return ew_lo * s / eps;
        if (s >= kHalfPi - eps) return ew_hi * (kHalfPi - s) / eps;
        return std::exp(w_int(s));
    };
    CumulativeIntegral F_int(ew, 0.0, kHalfPi, kHalfPi / 2.0, 256, 1e-13);
    const double F0 = F_int(0.0);
    const double total = F_int(kHalfPi) - F0;
    if (!(total > 0.0) || !std::isfinite(total))
        throw ConvergenceFailure("normalization integral is not positive");

    const std::vector<double> nodes = uniform_nodes(cfg.grid_size);
    const int n = static_cast<int>(nodes.size());
    std::vector<double> val(n), d1(n), d2(n);
    for (int i = 1; i < n - 1; ++i) {
        double u = 1.0 - 2.0 * (F_int(nodes[i]) - F0) / total;
        u = std::clamp(u, -1.0, 1.0);
        const double ews = ew(nodes[i]);
        const double up = -2.0 * ews / total;
        const double upp = 2.0 * ews * ratio_QP(charge, nodes[i]) / total;
        const double sa = std::sqrt(std::max(1.0 - u * u, 1e-300));
        val[i] = std::acos(u);
        d1[i] = -up / sa;
        d2[i] = (-upp - u * d1[i] * d1[i]) / sa;
    }
    val[0] = 0.0;
    val[n - 1] = kPi;
    // u ~ 1 - ew_lo s^2/(eps total) near 0 fixes the limit slope (mirrored
    // at pi/2); alpha is odd there so the second derivative limit is 0.
    d1[0] = std::sqrt(2.0 * ew_lo / (eps * total));
    d1[n - 1] = std::sqrt(2.0 * ew_hi / (eps * total));
    d2[0] = 0.0;
    d2[n - 1] = 0.0;
    return DiscreteProfile(nodes, val, d1, d2);
}

// alpha'' from the bracket: alpha'' = -alpha'^2 cot(alpha) - alpha' Q/P.
struct Sigma2Rhs {
    const AnsatzCharge& charge;
    void operator()(double s, const std::array<double, 2>& y,
                    std::array<double, 2>& dy) const {
        const double sa = std::sin(y[0]);
        const double ca = std::cos(y[0]);
        const double guard = (std::abs(sa) < 1e-14)
                                 ? (sa < 0 ? -1e-14 : 1e-14)
                                 : sa;
        dy[0] = y[1];
        dy[1] = -y[1] * y[1] * ca / guard - y[1] * ratio_QP(charge, s);
    }
};

// Distance from the right-end singular point at which the shooting mismatch
// is measured. The regular branch alpha = pi - c2 (pi/2 - s) + O(tau^3) is
// compared there; integrating all the way to pi/2 - eps is hopeless because
// the singular mode grows like 1/tau and blows up off-solution trajectories.
constexpr double kMatchOffset = 1e-3;

DiscreteProfile sigma2_direct_route(const AnsatzCharge& charge,
                                    const ShootingConfig& cfg) {
    const double eps = cfg.eps;
    const double s_end = kHalfPi - kMatchOffset;
    const OdeOptions opt{cfg.rel_tol, cfg.abs_tol, 1e-5, 1e-15, 2'000'000};
    const Sigma2Rhs rhs{charge};

    // positive for undershoot, negative for overshoot
    auto mismatch = [&](double c1) -> double {
        std::array<double, 2> y{c1 * eps, c1};
        try {
            integrate_ode(rhs, eps, s_end, y, opt);
        } catch (const ConvergenceFailure&) {
            return y[0] > kHalfPi ? -1.0 : 1.0;
        }
        if (!std::isfinite(y[0])) return y[0] > kHalfPi ? -1.0 : 1.0;
        return (kPi - y[0]) - kMatchOffset * y[1];
    };

    // log-spaced scan for a sign change, then bisection
    double lo = cfg.c_lo, hi = cfg.c_hi;
    const int scan_n = 61;
    double prev_c = cfg.c_lo, prev_m = mismatch(prev_c);
    bool bracketed = false;
    for (int i = 1; i < scan_n && !bracketed; ++i) {
        const double c = cfg.c_lo *
                         std::pow(cfg.c_hi / cfg.c_lo,
                                  static_cast<double>(i) / (scan_n - 1));
        const double m = mismatch(c);
        if (prev_m == 0.0 || prev_m * m <= 0.0) {
            lo = prev_c;
            hi = c;
            bracketed = true;
        }
        prev_c = c;
        prev_m = m;
    }
    if (!bracketed)
        throw ConvergenceFailure(
            "no sign change of the boundary mismatch over the slope bracket");
    double m_lo = mismatch(lo);
    for (int it = 0; it < cfg.max_bisect; ++it) {
        const double c = 0.5 * (lo + hi);
        const double m = mismatch(c);
        if (m_lo * m <= 0.0)
            hi = c;
        else {
            lo = c;
            m_lo = m;
        }
        if (hi - lo < 1e-14 * std::max(1.0, lo)) break;
    }
    const double c1 = 0.5 * (lo + hi);

    // Final pass recording the node values; nodes past the matching point
    // are filled from the regular right-end series.
    const std::vector<double> nodes = uniform_nodes(cfg.grid_size);
    const int n = static_cast<int>(nodes.size());
    std::vector<double> val(n), d1(n), d2(n);
    std::array<double, 2> y{c1 * eps, c1};
    double cur = eps;
    int i = 1;
    for (; i < n - 1 && nodes[i] < s_end; ++i) {
        integrate_ode(rhs, cur, nodes[i], y, opt);
        cur = nodes[i];
        std::array<double, 2> dy{};
        rhs(nodes[i], y, dy);
        val[i] = y[0];
        d1[i] = y[1];
        d2[i] = dy[1];
    }
    integrate_ode(rhs, cur, s_end, y, opt);
    const double c2 = y[1];
    if (std::abs((kPi - y[0]) - kMatchOffset * c2) > 1e-6)
        throw BoundaryMismatch("shooting missed alpha(pi/2) = pi",
                               y[0] + kMatchOffset * c2);
    for (; i < n - 1; ++i) {
        val[i] = kPi - c2 * (kHalfPi - nodes[i]);
        d1[i] = c2;
        d2[i] = 0.0;
    }
    val[0] = 0.0;
    d1[0] = c1;
    d2[0] = 0.0;
    val[n - 1] = kPi;
    d1[n - 1] = c2;
    d2[n - 1] = 0.0;
    return DiscreteProfile(nodes, val, d1, d2);
}

}  // namespace

DiscreteProfile shoot_sigma2(const AnsatzCharge& charge,
                             const ShootingConfig& config) {
    check(config);
    if (config.linear_route) return sigma2_linear_route(charge, config);
    return sigma2_direct_route(charge, config);
}

HarmonicShot shoot_harmonic(const AnsatzCharge& charge,
                            const ShootingConfig& config) {
    check(config);
    const double eps = config.eps;
    const OdeOptions opt{config.rel_tol, config.abs_tol, 1e-5, 1e-15,
                         2'000'000};
    const int p = std::abs(charge.l);  // indicial exponent at s = 0

    auto rhs = [&](double s, const std::array<double, 2>& y,
                   std::array<double, 2>& dy) {
        const double cot_tan =
            std::cos(s) / std::sin(s) - std::sin(s) / std::cos(s);
        dy[0] = y[1];
        dy[1] = -cot_tan * y[1] +
                coupling_P(charge, s) * std::sin(y[0]) * std::cos(y[0]);
    };
    const int q = std::abs(charge.k);  // right-end indicial exponent
    const double s_end = kHalfPi - kMatchOffset;

    auto shoot = [&](double c, std::array<double, 2>& y_out) -> bool {
        // series start alpha ~ c s^p
        y_out = {c * std::pow(eps, p), c * p * std::pow(eps, p - 1)};
        try {
            integrate_ode(rhs, eps, s_end, y_out, opt);
        } catch (const ConvergenceFailure&) {
            return false;
        }
        return std::isfinite(y_out[0]);
    };
    // Deviation from the regular right-end branch pi - c2 tau^q, measured
    // at the matching offset; negative for overshoot.
    auto mis = [&](double c) {
        std::array<double, 2> y{};
        if (shoot(c, y)) return (kPi - y[0]) - kMatchOffset * y[1] / q;
        return y[0] > kHalfPi ? -4.0 : 4.0;
    };

    HarmonicShot out;
    const int scan_n = 41;
    double best_c = 0.0, best_m = 1e300;
    for (int i = 0; i < scan_n; ++i) {
        const double c = config.c_lo *
                         std::pow(config.c_hi / config.c_lo,
                                  static_cast<double>(i) / (scan_n - 1));
        const double m = mis(c);
        out.scan.slopes.push_back(c);
        out.scan.mismatches.push_back(m);
        if (std::abs(m) < std::abs(best_m)) {
            best_m = m;
            best_c = c;
        }
        if (i > 0 && out.scan.mismatches[i - 1] * m < 0.0)
            out.scan.sign_change = true;
    }
    if (std::abs(charge.k) == std::abs(charge.l)) {
        // One-parameter family of solutions: pick the symmetric
        // representative alpha(pi/4) = pi/2 (closed-form coefficient C = 1)
        // by bisecting on the midpoint value, which grows with the slope.
        // The right half then follows from the exact reflection symmetry
        // alpha(pi/2 - s) = pi - alpha(s) of the equation at equal windings,
        // which keeps the recorded trajectory clear of the growing singular
        // mode at the right chart end.
        auto sym = [&](double c) {
            std::array<double, 2> y{c * std::pow(eps, p),
                                    c * p * std::pow(eps, p - 1)};
            integrate_ode(rhs, eps, kHalfPi / 2.0, y, opt);
            return y[0] - kHalfPi;
        };
        double lo = config.c_lo, hi = config.c_hi;
        if (!(sym(lo) < 0.0) || !(sym(hi) > 0.0))
            throw ConvergenceFailure(
                "midpoint bisection bracket invalid for the symmetric "
                "representative");
        for (int it = 0; it < config.max_bisect; ++it) {
            const double c = 0.5 * (lo + hi);
            if (sym(c) >= 0.0)
                hi = c;
            else
                lo = c;
        }
        const double c1 = 0.5 * (lo + hi);
        const std::vector<double> nodes = uniform_nodes(config.grid_size);
        const int n = static_cast<int>(nodes.size());
        std::vector<double> val(n), d1(n), d2(n);
        std::array<double, 2> y{c1 * std::pow(eps, p),
                                c1 * p * std::pow(eps, p - 1)};
        double cur = eps;
        for (int i = 1; 2 * i <= n - 1; ++i) {
            integrate_ode(rhs, cur, nodes[i], y, opt);
            cur = nodes[i];
            std::array<double, 2> dy{};
            rhs(nodes[i], y, dy);
            if (2 * i == n - 1) {  // midpoint: odd curvature vanishes
                val[i] = y[0];
                d1[i] = y[1];
                d2[i] = 0.0;
            } else {
                val[i] = y[0];
                d1[i] = y[1];
                d2[i] = dy[1];
                val[n - 1 - i] = kPi - y[0];
                d1[n - 1 - i] = y[1];
                d2[n - 1 - i] = -dy[1];
            }
        }
        val[0] = 0.0;
        d1[0] = (p == 1) ? c1 : 0.0;
        d2[0] = (p == 2) ? 2.0 * c1 : 0.0;
        val[n - 1] = kPi;
        d1[n - 1] = d1[0];
        d2[n - 1] = -d2[0];
        DiscreteProfile prof(nodes, val, d1, d2);
        out.fitted_C = std::tan(0.5 * prof.value(kHalfPi / 2.0));
        out.profile = std::move(prof);
        return out;
    }
    if (!out.scan.sign_change) return out;

    double c1 = best_c;
    {
        // genuine root isolated by the scan: bisect
        std::size_t idx = 0;
        for (std::size_t i = 1; i < out.scan.mismatches.size(); ++i)
            if (out.scan.mismatches[i - 1] * out.scan.mismatches[i] < 0.0) {
                idx = i;
                break;
            }
        double lo = out.scan.slopes[idx - 1], hi = out.scan.slopes[idx];
        double m_lo = out.scan.mismatches[idx - 1];
        for (int it = 0; it < config.max_bisect; ++it) {
            const double c = 0.5 * (lo + hi);
            const double m = mis(c);
            if (m_lo * m <= 0.0)
                hi = c;
            else {
                lo = c;
                m_lo = m;
            }
        }
        c1 = 0.5 * (lo + hi);
    }

    // record the accepted trajectory
    const std::vector<double> nodes = uniform_nodes(config.grid_size);
    const int n = static_cast<int>(nodes.size());
    std::vector<double> val(n), d1(n), d2(n);
    std::array<double, 2> y{c1 * std::pow(eps, p),
                            c1 * p * std::pow(eps, p - 1)};
    double cur = eps;
    int i = 1;
    for (; i < n - 1 && nodes[i] < s_end; ++i) {
        integrate_ode(rhs, cur, nodes[i], y, opt);
        cur = nodes[i];
        std::array<double, 2> dy{};
        rhs(nodes[i], y, dy);
        val[i] = y[0];
        d1[i] = y[1];
        d2[i] = dy[1];
    }
    integrate_ode(rhs, cur, s_end, y, opt);
    if (std::abs((kPi - y[0]) - kMatchOffset * y[1] / q) > 1e-5)
        throw BoundaryMismatch("harmonic shooting missed alpha(pi/2) = pi",
                               y[0] + kMatchOffset * y[1] / q);
    const double c2 = (kPi - y[0]) / std::pow(kMatchOffset, q);
    for (; i < n - 1; ++i) {
        val[i] = kPi - c2 * std::pow(kHalfPi - nodes[i], q);
        d1[i] = c2 * q * std::pow(kHalfPi - nodes[i], q - 1);
        d2[i] = -c2 * q * (q - 1) * std::pow(kHalfPi - nodes[i], q - 2);
    }
    val[0] = 0.0;
    d1[0] = (p == 1) ? c1 : 0.0;
    d2[0] = (p == 2) ? 2.0 * c1 : 0.0;
    val[n - 1] = kPi;
    d1[n - 1] = (q == 1) ? c2 : 0.0;
    d2[n - 1] = (q == 2) ? -2.0 * c2 : 0.0;
    DiscreteProfile prof(nodes, val, d1, d2);
    out.fitted_C = std::tan(0.5 * prof.value(kHalfPi / 2.0));
    out.profile = std::move(prof);
    return out;
}

ScalarField GammaGrid::field() const {
    auto data = std::make_shared<GammaGrid>(*this);
    auto locate = [data](double s) {
        const auto& nd = data->nodes;
        auto it = std::upper_bound(nd.begin(), nd.end(), s);
        int i = static_cast<int>(it - nd.begin()) - 1;
        return std::min(std::max(i, 0), static_cast<int>(nd.size()) - 2);
    };
    auto val = [data, locate](double s) {
        const auto& d = *data;
        s = std::clamp(s, d.nodes.front(), d.nodes.back());
        const int i = locate(s);
        const double h = d.nodes[i + 1] - d.nodes[i];
        const double t = (s - d.nodes[i]) / h;
        const double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
        const double h10 = t * (1 - t) * (1 - t);
        const double h01 = t * t * (3 - 2 * t);
        const double h11 = t * t * (t - 1);
        return h00 * d.values[i] + h * h10 * d.derivs[i] +
               h01 * d.values[i + 1] + h * h11 * d.derivs[i + 1];
    };
    auto der = [data, locate](double s) {
        const auto& d = *data;
        s = std::clamp(s, d.nodes.front(), d.nodes.back());
        const int i = locate(s);
        const double h = d.nodes[i + 1] - d.nodes[i];
        const double t = (s - d.nodes[i]) / h;
        const double g00 = 6 * t * (t - 1) / h;
        const double g10 = (1 - t) * (1 - 3 * t);
        const double g01 = -6 * t * (t - 1) / h;
        const double g11 = t * (3 * t - 2);
        return g00 * d.values[i] + g10 * d.derivs[i] + g01 * d.values[i + 1] +
               g11 * d.derivs[i + 1];
    };
    return {val, der};
}

GammaGrid conformal_gamma_for_harmonicity(const ProfilePtr& hc_profile,
                                          const AnsatzCharge& charge,
                                          int n) {
    if (!hc_profile) throw InvalidParameter("null profile");
    if (n < 9) throw InvalidParameter("gamma grid too small");
    const Profile& prof = *hc_profile;

    auto gamma_prime = [&](double s) {
        const double ap = prof.deriv(s);
        if (std::abs(ap) < 1e-10)
            throw DivisionNearZero(
                "profile slope vanishes; conformal exponent undefined");
        return -residual_harmonic(prof, charge, s) / ap;
    };

    // sin^2-graded nodes, kept strictly interior
    const double lo = 1e-4, hi = kHalfPi - 1e-4;
    GammaGrid g;
    g.nodes.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = std::sin(0.5 * kPi * i / (n - 1));
        g.nodes[i] = lo + (hi - lo) * t * t;
    }
    CumulativeIntegral integral(gamma_prime, lo, hi, kHalfPi / 2.0, 512,
                                1e-13);
    g.values.resize(n);
    g.derivs.resize(n);
    for (int i = 0; i < n; ++i) {
        g.values[i] = integral(g.nodes[i]);
        g.derivs[i] = gamma_prime(g.nodes[i]);
    }
    return g;
}

}  // namespace fhopf
