#include "fhopf/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "fhopf/errors.hpp"

namespace fhopf {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kPi = std::numbers::pi;
constexpr double kEdge = 1e-9;  // clamp for derivative limits at the chart ends

double clamp_interior(double s) {
    return std::min(std::max(s, kEdge), kHalfPi - kEdge);
}

}  // namespace

// ---------------------------------------------------------------------------
// Sigma2Profile

Sigma2Profile::Sigma2Profile(const AnsatzCharge& charge) {
    const double k2 = static_cast<double>(charge.k) * charge.k;
    const double l2 = static_cast<double>(charge.l) * charge.l;
    linear_ = (k2 == l2);
    reflected_ = (k2 < l2);
    q_ = reflected_ ? l2 / k2 : k2 / l2;
}

// alpha = arccos(1 - 2 ln(q sin^2 s + cos^2 s)/ln q), evaluated through
// sin^2(alpha/2) = c L / 2 to stay accurate near both boundary values.
namespace {

struct Sigma2Eval {
    double alpha, dalpha, d2alpha;
};

Sigma2Eval sigma2_eval(double q, double s) {
    const double sn = std::sin(s), cs = std::cos(s);
    const double P = 1.0 + (q - 1.0) * sn * sn;
    const double L = std::log(P);
    const double c = 2.0 / std::log(q);
    const double cl = c * L;  // = 1 - cos(alpha), in [0, 2]

    double alpha;
    if (cl <= 1.0)
        alpha = 2.0 * std::asin(std::sqrt(0.5 * cl));
    else
        alpha = kPi - 2.0 * std::asin(std::sqrt(1.0 - 0.5 * cl));

    const double sin_a = std::sqrt(std::max(cl * (2.0 - cl), 0.0));
    const double cos_a = 1.0 - cl;
    const double s2 = 2.0 * sn * cs;  // sin 2s
    const double Lp = (q - 1.0) * s2 / P;
    const double Lpp =
        (2.0 * (q - 1.0) * (cs * cs - sn * sn) * P -
         (q - 1.0) * s2 * (q - 1.0) * s2) /
        (P * P);
    const double ap = c * Lp / sin_a;
    const double app = (c * Lpp - cos_a * ap * ap) / sin_a;
    return {alpha, ap, app};
}

}  // namespace

double Sigma2Profile::value(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= kHalfPi) return kPi;
    if (linear_) return 2.0 * s;
    if (reflected_) return kPi - sigma2_eval(q_, kHalfPi - s).alpha;
    return sigma2_eval(q_, s).alpha;
}

double Sigma2Profile::deriv(double s) const {
    if (linear_) return 2.0;
    s = clamp_interior(s);
    if (reflected_) return sigma2_eval(q_, kHalfPi - s).dalpha;
    return sigma2_eval(q_, s).dalpha;
}

double Sigma2Profile::deriv2(double s) const {
    if (linear_) return 0.0;
    s = clamp_interior(s);
    if (reflected_) return -sigma2_eval(q_, kHalfPi - s).d2alpha;
    return sigma2_eval(q_, s).d2alpha;
}

// ---------------------------------------------------------------------------
// HarmonicProfile

HarmonicProfile::HarmonicProfile(int k, double C) : k_(k), C_(C) {
    if (!(C > 0.0)) throw InvalidParameter("profile coefficient must be > 0");
    if (k < 1) throw InvalidParameter("winding k must be >= 1");
}

double HarmonicProfile::value(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= kHalfPi) return kPi;
    const double w = C_ * std::pow(std::tan(s), k_);
    return 2.0 * std::atan(w);
}

double HarmonicProfile::deriv(double s) const {
    s = clamp_interior(s);
    const double sc = std::sin(s) * std::cos(s);
    const double w = C_ * std::pow(std::tan(s), k_);
    const double wp = k_ * w / sc;
    return 2.0 * wp / (1.0 + w * w);
}

double HarmonicProfile::deriv2(double s) const {
    s = clamp_interior(s);
    const double sc = std::sin(s) * std::cos(s);
    const double c2 = std::cos(2.0 * s);
    const double w = C_ * std::pow(std::tan(s), k_);
    const double wp = k_ * w / sc;
    const double wpp = k_ * (wp * sc - w * c2) / (sc * sc);
    const double den = 1.0 + w * w;
    return (2.0 * wpp * den - 4.0 * w * wp * wp) / (den * den);
}

// ---------------------------------------------------------------------------
// HcProfile

namespace {

// G(s) = sqrt(k^2/cos^2 s + l^2/sin^2 s), the right side of the horizontal
// conformality ODE divided by sin(alpha).
double hc_rhs_factor(double K, double L, double s) {
    const double cs = std::cos(s), sn = std::sin(s);
    return std::sqrt(K * K / (cs * cs) + L * L / (sn * sn));
}

// G with its simple poles L/s and K/(pi/2 - s) removed; bounded on the chart.
double hc_rhs_regular(double K, double L, double s) {
    s = clamp_interior(s);
    return hc_rhs_factor(K, L, s) - L / s - K / (kHalfPi - s);
}

}  // namespace

HcProfile::HcProfile(const AnsatzCharge& charge, int checkpoints)
    : charge_(charge) {
    const double K = std::abs(charge.k), L = std::abs(charge.l);
    const double s_star = std::atan(std::sqrt(L / K));
    auto reg = [K, L](double s) { return hc_rhs_regular(K, L, s); };
    // Regular part of I(s) = int_{s*}^{s} G; the simple poles of G are
    // integrated in closed form inside value().
    log_tan_half_ = std::make_shared<CumulativeIntegral>(reg, 0.0, kHalfPi,
                                                         s_star, checkpoints);
}

double HcProfile::value(double s) const {
    if (s <= 0.0) return 0.0;
    if (s >= kHalfPi) return kPi;
    const double K = std::abs(charge_.k), L = std::abs(charge_.l);
    const double s_star = std::atan(std::sqrt(L / K));
    const double I = (*log_tan_half_)(s) + L * std::log(s / s_star) -
                     K * std::log((kHalfPi - s) / (kHalfPi - s_star));
    return 2.0 * std::atan(std::exp(I));
}

double HcProfile::deriv(double s) const {
    s = clamp_interior(s);
    const double K = std::abs(charge_.k), L = std::abs(charge_.l);
    return std::sin(value(s)) * hc_rhs_factor(K, L, s);
}

double HcProfile::deriv2(double s) const {
    s = clamp_interior(s);
    const double K = std::abs(charge_.k), L = std::abs(charge_.l);
    const double a = value(s);
    const double G = hc_rhs_factor(K, L, s);
    const double sn = std::sin(s), cs = std::cos(s);
    // G = sqrt(K^2 sin^2 + L^2 cos^2)/(sin cos); differentiate the quotient.
    const double num = std::sqrt(K * K * sn * sn + L * L * cs * cs);
    const double dnum = (K * K - L * L) * sn * cs / num;
    const double sc = sn * cs;
    const double Gp = (dnum * sc - num * (cs * cs - sn * sn)) / (sc * sc);
    return std::sin(a) * (std::cos(a) * G * G + Gp);
}

// ---------------------------------------------------------------------------
// DiscreteProfile

DiscreteProfile::DiscreteProfile(std::vector<double> nodes,
                                 std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)), order_(3) {
    validate();
    // Natural cubic spline: tridiagonal solve for nodal second derivatives.
    const int n = static_cast<int>(nodes_.size());
    spline_m_.assign(n, 0.0);
    if (n > 2) {
        std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0), d(n, 0.0);
        for (int i = 1; i < n - 1; ++i) {
            const double h0 = nodes_[i] - nodes_[i - 1];
            const double h1 = nodes_[i + 1] - nodes_[i];
            a[i] = h0 / 6.0;
            b[i] = (h0 + h1) / 3.0;
            c[i] = h1 / 6.0;
            d[i] = (values_[i + 1] - values_[i]) / h1 -
                   (values_[i] - values_[i - 1]) / h0;
        }
        for (int i = 2; i < n - 1; ++i) {
            const double w = a[i] / b[i - 1];
            b[i] -= w * c[i - 1];
            d[i] -= w * d[i - 1];
        }
        for (int i = n - 2; i >= 1; --i)
            spline_m_[i] = (d[i] - c[i] * (i + 1 < n - 1 ? spline_m_[i + 1]
                                                         : 0.0)) /
                           b[i];
    }
}

DiscreteProfile::DiscreteProfile(std::vector<double> nodes,
                                 std::vector<double> values,
                                 std::vector<double> derivs)
    : nodes_(std::move(nodes)),
      values_(std::move(values)),
      derivs_(std::move(derivs)),
      order_(3) {
    validate();
    if (derivs_.size() != nodes_.size())
        throw InvalidParameter("derivative array size mismatch");
}

DiscreteProfile::DiscreteProfile(std::vector<double> nodes,
                                 std::vector<double> values,
                                 std::vector<double> derivs,
                                 std::vector<double> derivs2)
    : nodes_(std::move(nodes)),
      values_(std::move(values)),
      derivs_(std::move(derivs)),
      derivs2_(std::move(derivs2)),
      order_(5) {
    validate();
    if (derivs_.size() != nodes_.size() || derivs2_.size() != nodes_.size())
        throw InvalidParameter("derivative array size mismatch");
}

void DiscreteProfile::validate() const {
    if (nodes_.size() < 2 || nodes_.size() != values_.size())
        throw InvalidParameter("discrete profile needs matching node/value "
                               "arrays with at least two entries");
    for (std::size_t i = 1; i < nodes_.size(); ++i)
        if (!(nodes_[i] > nodes_[i - 1]))
            throw InvalidParameter("nodes must be strictly increasing");
    if (std::abs(nodes_.front()) > 1e-9 ||
        std::abs(nodes_.back() - kHalfPi) > 1e-9)
        throw InvalidParameter("node range must cover [0, pi/2]");
    if (std::abs(values_.front()) > 1e-9 ||
        std::abs(values_.back() - kPi) > 1e-9)
        throw InvalidParameter("boundary values must be 0 and pi");
}

int DiscreteProfile::locate(double s) const {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), s);
    int i = static_cast<int>(it - nodes_.begin()) - 1;
    return std::min(std::max(i, 0), static_cast<int>(nodes_.size()) - 2);
}

double DiscreteProfile::value(double s) const {
    if (s <= nodes_.front()) return values_.front();
    if (s >= nodes_.back()) return values_.back();
    const int i = locate(s);
    const double h = nodes_[i + 1] - nodes_[i];
    const double t = s - nodes_[i];

    if (order_ == 5) {
        const double y0 = values_[i], d0 = derivs_[i], c0 = derivs2_[i];
        const double r = values_[i + 1] - (y0 + d0 * h + 0.5 * c0 * h * h);
        const double r1 = derivs_[i + 1] - (d0 + c0 * h);
        const double r2 = derivs2_[i + 1] - c0;
        const double a3 = (10.0 * r - 4.0 * r1 * h + 0.5 * r2 * h * h) /
                          (h * h * h);
        const double a4 = (-15.0 * r + 7.0 * r1 * h - r2 * h * h) /
                          (h * h * h * h);
        const double a5 = (6.0 * r - 3.0 * r1 * h + 0.5 * r2 * h * h) /
                          (h * h * h * h * h);
        return y0 + t * (d0 + t * (0.5 * c0 + t * (a3 + t * (a4 + t * a5))));
    }
    if (!derivs_.empty()) {
        // cubic Hermite
        const double y0 = values_[i], y1 = values_[i + 1];
        const double d0 = derivs_[i], d1 = derivs_[i + 1];
        const double u = t / h;
        const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        const double h10 = u * (1.0 - u) * (1.0 - u);
        const double h01 = u * u * (3.0 - 2.0 * u);
        const double h11 = u * u * (u - 1.0);
        return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
    }
    // natural cubic spline
    const double m0 = spline_m_[i], m1 = spline_m_[i + 1];
    const double A = (nodes_[i + 1] - s) / h, B = t / h;
    return A * values_[i] + B * values_[i + 1] +
           ((A * A * A - A) * m0 + (B * B * B - B) * m1) * h * h / 6.0;
}

double DiscreteProfile::deriv(double s) const {
    s = std::min(std::max(s, nodes_.front()), nodes_.back());
    const int i = locate(s);
    const double h = nodes_[i + 1] - nodes_[i];
    const double t = s - nodes_[i];

    if (order_ == 5) {
        const double y0 = values_[i], d0 = derivs_[i], c0 = derivs2_[i];
        const double r = values_[i + 1] - (y0 + d0 * h + 0.5 * c0 * h * h);
        const double r1 = derivs_[i + 1] - (d0 + c0 * h);
        const double r2 = derivs2_[i + 1] - c0;
        const double a3 = (10.0 * r - 4.0 * r1 * h + 0.5 * r2 * h * h) /
                          (h * h * h);
        const double a4 = (-15.0 * r + 7.0 * r1 * h - r2 * h * h) /
                          (h * h * h * h);
        const double a5 = (6.0 * r - 3.0 * r1 * h + 0.5 * r2 * h * h) /
                          (h * h * h * h * h);
        return d0 + t * (c0 + t * (3.0 * a3 + t * (4.0 * a4 + t * 5.0 * a5)));
    }
    if (!derivs_.empty()) {
        const double y0 = values_[i], y1 = values_[i + 1];
        const double d0 = derivs_[i], d1 = derivs_[i + 1];
        const double u = t / h;
        const double g00 = 6.0 * u * (u - 1.0) / h;
        const double g10 = (1.0 - u) * (1.0 - 3.0 * u);
        const double g01 = -g00;
        const double g11 = u * (3.0 * u - 2.0);
        return g00 * y0 + g10 * d0 + g01 * y1 + g11 * d1;
    }
    const double m0 = spline_m_[i], m1 = spline_m_[i + 1];
    const double A = (nodes_[i + 1] - s) / h, B = t / h;
    return (values_[i + 1] - values_[i]) / h -
           (3.0 * A * A - 1.0) * h * m0 / 6.0 +
           (3.0 * B * B - 1.0) * h * m1 / 6.0;
}

double DiscreteProfile::deriv2(double s) const {
    s = std::min(std::max(s, nodes_.front()), nodes_.back());
    const int i = locate(s);
    const double h = nodes_[i + 1] - nodes_[i];
    const double t = s - nodes_[i];

    if (order_ == 5) {
        const double y0 = values_[i], d0 = derivs_[i], c0 = derivs2_[i];
        const double r = values_[i + 1] - (y0 + d0 * h + 0.5 * c0 * h * h);
        const double r1 = derivs_[i + 1] - (d0 + c0 * h);
        const double r2 = derivs2_[i + 1] - c0;
        const double a3 = (10.0 * r - 4.0 * r1 * h + 0.5 * r2 * h * h) /
                          (h * h * h);
        const double a4 = (-15.0 * r + 7.0 * r1 * h - r2 * h * h) /
                          (h * h * h * h);
        const double a5 = (6.0 * r - 3.0 * r1 * h + 0.5 * r2 * h * h) /
                          (h * h * h * h * h);
        return c0 + t * (6.0 * a3 + t * (12.0 * a4 + t * 20.0 * a5));
    }
    if (!derivs_.empty()) {
        const double y0 = values_[i], y1 = values_[i + 1];
        const double d0 = derivs_[i], d1 = derivs_[i + 1];
        const double u = t / h;
        return ((12.0 * u - 6.0) * (y0 - y1) / h + (6.0 * u - 4.0) * d0 +
                (6.0 * u - 2.0) * d1) /
               h;
    }
    const double m0 = spline_m_[i], m1 = spline_m_[i + 1];
    const double A = (nodes_[i + 1] - s) / h, B = t / h;
    return A * m0 + B * m1;
}

void DiscreteProfile::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw InvalidParameter("cannot open " + path + " for writing");
    out << "s,alpha\n";
    char buf[80];
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", nodes_[i],
                      values_[i]);
        out << buf;
    }
}

DiscreteProfile DiscreteProfile::load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidParameter("cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw InvalidParameter("empty profile file " + path);
    std::vector<double> nodes, values;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        double s, a;
        char comma;
        if (!(ss >> s >> comma >> a) || comma != ',')
            throw InvalidParameter(path + ": malformed row at line " +
                                   std::to_string(lineno));
        nodes.push_back(s);
        values.push_back(a);
    }
    if (!nodes.empty()) {
        if (std::abs(nodes.front()) < 1e-9) nodes.front() = 0.0;
        if (std::abs(nodes.back() - kHalfPi) < 1e-9) nodes.back() = kHalfPi;
        if (std::abs(values.front()) < 1e-9) values.front() = 0.0;
        if (std::abs(values.back() - kPi) < 1e-9) values.back() = kPi;
    }
    return DiscreteProfile(std::move(nodes), std::move(values));
}

ProfilePtr sigma2_profile(const AnsatzCharge& charge) {
    return std::make_shared<Sigma2Profile>(charge);
}

ProfilePtr harmonic_profile(int k, double C) {
    return std::make_shared<HarmonicProfile>(k, C);
}

}  // namespace fhopf
