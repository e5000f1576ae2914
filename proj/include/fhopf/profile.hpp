#pragma once
#include <memory>
#include <string>
#include <vector>

#include "fhopf/charge.hpp"
#include "fhopf/quadrature.hpp"

namespace fhopf {

// Reduction function alpha: [0, pi/2] -> [0, pi] with alpha(0) = 0 and
// alpha(pi/2) = pi, exposing two derivatives.
class Profile {
public:
    virtual ~Profile() = default;
    virtual double value(double s) const = 0;
    virtual double deriv(double s) const = 0;
    virtual double deriv2(double s) const = 0;
    virtual std::string kind() const = 0;
};

using ProfilePtr = std::shared_ptr<const Profile>;

// Closed-form solution of the strongly coupled Euler-Lagrange ODE:
// alpha = 2s for |k| = |l|, the arccos-log form for |k| > |l|, and the
// s <-> pi/2 - s, k <-> l reflection for |k| < |l|.
class Sigma2Profile : public Profile {
public:
    explicit Sigma2Profile(const AnsatzCharge& charge);
    double value(double s) const override;
    double deriv(double s) const override;
    double deriv2(double s) const override;
    std::string kind() const override { return "sigma2-closed-form"; }

private:
    double q_;        // k^2 / l^2 for the branch actually evaluated (q > 1)
    bool linear_;     // |k| == |l|
    bool reflected_;  // |k| < |l|
};

// alpha(s) = 2 arctan(C tan^k s), the closed-form harmonic profile (k = l).
class HarmonicProfile : public Profile {
public:
    HarmonicProfile(int k, double C);
    double value(double s) const override;
    double deriv(double s) const override;
    double deriv2(double s) const override;
    std::string kind() const override { return "harmonic-closed-form"; }
    double coefficient() const { return C_; }

private:
    int k_;
    double C_;
};

// Horizontally conformal profile: tan(alpha/2) = exp(int_{s*}^s G) with
// G = sqrt(k^2/cos^2 s + l^2/sin^2 s). The matching point s* is fixed at
// tan^2 s* = |l/k|, so alpha(s*) = pi/2 and the (k,l) <-> (l,k) reflection
// symmetry is exact. Derivatives come from the defining first-order ODE.
class HcProfile : public Profile {
public:
    explicit HcProfile(const AnsatzCharge& charge, int checkpoints = 1024);
    double value(double s) const override;
    double deriv(double s) const override;
    double deriv2(double s) const override;
    std::string kind() const override { return "hc-numeric"; }
    const AnsatzCharge& charge() const { return charge_; }

private:
    AnsatzCharge charge_;
    std::shared_ptr<CumulativeIntegral> log_tan_half_;
};

// Grid profile. With only nodal values it interpolates by a natural cubic
// spline; when nodal first (and optionally second) derivatives are supplied
// it switches to Hermite segments of matching order.
class DiscreteProfile : public Profile {
public:
    DiscreteProfile(std::vector<double> nodes, std::vector<double> values);
    DiscreteProfile(std::vector<double> nodes, std::vector<double> values,
                    std::vector<double> derivs);
    DiscreteProfile(std::vector<double> nodes, std::vector<double> values,
                    std::vector<double> derivs, std::vector<double> derivs2);

    double value(double s) const override;
    double deriv(double s) const override;
    double deriv2(double s) const override;
    std::string kind() const override { return "discrete"; }

    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& values() const { return values_; }
    int interpolant_order() const { return order_; }

    // Two-column CSV (s, alpha) with a header row, 17 significant digits.
    void save_csv(const std::string& path) const;
    static DiscreteProfile load_csv(const std::string& path);

private:
    void validate() const;
    int locate(double s) const;

    std::vector<double> nodes_, values_, derivs_, derivs2_;
    std::vector<double> spline_m_;  // natural-spline second derivatives
    int order_;                     // 3 = cubic spline/Hermite, 5 = quintic
};

// Closed-form sigma2-critical profile (operation form).
ProfilePtr sigma2_profile(const AnsatzCharge& charge);

// Closed-form harmonic profile; throws InvalidParameter unless C > 0, k >= 1.
ProfilePtr harmonic_profile(int k, double C);

}  // namespace fhopf
