#pragma once
#include <cstdint>
#include <cstdlib>

#include "fhopf/errors.hpp"

namespace fhopf {

// Winding pair (k, l) of the toroidal ansatz. Hopf charge is Q = k*l.
struct AnsatzCharge {
    int k;
    int l;

    AnsatzCharge(int k_, int l_) : k(k_), l(l_) {
        if (k == 0 || l == 0)
            throw InvalidCharge("winding numbers must be nonzero");
        if (std::abs(k) > 1000000 || std::abs(l) > 1000000)
            throw InvalidCharge("winding numbers capped at 1e6");
    }

    std::int64_t hopf() const {
        return static_cast<std::int64_t>(k) * static_cast<std::int64_t>(l);
    }
};

inline std::int64_t hopf_charge(const AnsatzCharge& c) { return c.hopf(); }

}  // namespace fhopf
