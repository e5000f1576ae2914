#include "fhopf/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fhopf/errors.hpp"

namespace fhopf {

static GaussRule compute_gauss_legendre(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    // Newton iteration on P_n with the Chebyshev-based initial guess.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int j = 2; j <= n; ++j) {
                double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw InvalidParameter("Gauss rule order must be positive");
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureSpec& spec) {
    const GaussRule& rule = gauss_legendre(spec.nodes);
    const double h = (b - a) / spec.panels;
    // Fixed-order pairwise-style accumulation: panels summed in index order,
    // independent of threading, so results are reproducible.
    double total = 0.0;
    for (int p = 0; p < spec.panels; ++p) {
        const double pa = a + p * h;
        const double mid = pa + 0.5 * h;
        double panel = 0.0;
        for (int i = 0; i < spec.nodes; ++i)
            panel += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
        total += 0.5 * h * panel;
    }
    return total;
}

double integrate_to_convergence(const std::function<double(double)>& f,
                                double a, double b, const QuadratureSpec& spec,
                                double rel_tol, int max_doublings) {
    QuadratureSpec cur = spec;
    double prev = integrate(f, a, b, cur);
    for (int d = 0; d < max_doublings; ++d) {
        cur.panels *= 2;
        double next = integrate(f, a, b, cur);
        double scale = std::max({std::abs(prev), std::abs(next), 1e-300});
        if (std::abs(next - prev) <= rel_tol * scale) return next;
        prev = next;
    }
    throw QuadratureFailure("panel refinement did not converge");
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double fa, double b, double fb, double m, double fm,
                     double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    // second condition: delta at the roundoff floor of the partial sums;
    // recursing further only chases noise (tol and noise halve together)
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol ||
        std::abs(delta) <= 4e-16 * (std::abs(left) + std::abs(right)))
        return left + right + delta / 15.0;
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

CumulativeIntegral::CumulativeIntegral(std::function<double(double)> f,
                                       double lo, double hi, double s0,
                                       int checkpoints, double tol)
    : f_(std::move(f)), lo_(lo), hi_(hi), tol_(tol) {
    if (!(lo < hi)) throw InvalidParameter("CumulativeIntegral: lo >= hi");
    if (s0 < lo || s0 > hi)
        throw InvalidParameter("CumulativeIntegral: anchor outside range");
    grid_.resize(checkpoints + 1);
    // sin^2 grading clusters checkpoints quadratically at both endpoints,
    // where the integrands of this toolkit vary fastest.
    for (int i = 0; i <= checkpoints; ++i) {
        double t = std::sin(0.5 * std::numbers::pi * i / checkpoints);
        grid_[i] = lo + (hi - lo) * t * t;
    }
    cum_.assign(checkpoints + 1, 0.0);
    // anchor index: nearest checkpoint to s0
    int anchor = 0;
    double best = std::abs(grid_[0] - s0);
    for (int i = 1; i <= checkpoints; ++i) {
        double d = std::abs(grid_[i] - s0);
        if (d < best) {
            best = d;
            anchor = i;
        }
    }
    std::vector<double> seg(checkpoints, 0.0);
    for (int i = 0; i < checkpoints; ++i)
        seg[i] = adaptive_simpson(f_, grid_[i], grid_[i + 1], tol_);
    cum_[anchor] = adaptive_simpson(f_, s0, grid_[anchor], tol_);
    for (int i = anchor + 1; i <= checkpoints; ++i)
        cum_[i] = cum_[i - 1] + seg[i - 1];
    for (int i = anchor - 1; i >= 0; --i) cum_[i] = cum_[i + 1] - seg[i];
}

double CumulativeIntegral::operator()(double s) const {
    if (s <= grid_.front()) s = grid_.front();
    if (s >= grid_.back()) s = grid_.back();
    auto it = std::upper_bound(grid_.begin(), grid_.end(), s);
    int idx = static_cast<int>(it - grid_.begin()) - 1;
    if (idx < 0) idx = 0;
    if (idx >= static_cast<int>(grid_.size())) idx = grid_.size() - 1;
    return cum_[idx] + adaptive_simpson(f_, grid_[idx], s, tol_);
}

}  // namespace fhopf
