#pragma once

#include <cmath>

#include "cranesim/errors.hpp"

namespace cranesim {

// Link lengths and linkage offsets of the knuckle boom crane. The linear
// actuator i = 2, 3 closes a triangle with sides b_i1, b_i2 derived from the
// mounting offsets (a_bi, e_bi) on the driving body and (a_pi, e_pi) on the
// driven body.
struct CraneGeometry {
    double l1 = 0.711;
    double l2 = 1.500;
    double l3 = 0.205;
    double l4 = 0.992;

    double a_b2 = 0.550;
    double e_b2 = 0.154;
    double a_p2 = 0.600;
    double e_p2 = 0.130;

    double a_b3 = 0.750;
    double e_b3 = 0.160;
    double a_p3 = 0.167;
    double e_p3 = 0.076;

    double theta4 = -39.4 * M_PI / 180.0;

    double c2 = 0.5 * M_PI;
    double c3 = M_PI;

    // Triangle sides of actuator joint i (2 or 3); derived, never stored.
    double b1(int joint) const {
        return joint == 2 ? std::hypot(a_b2, e_b2) : std::hypot(a_b3, e_b3);
    }
    double b2(int joint) const {
        return joint == 2 ? std::hypot(a_p2, e_p2) : std::hypot(a_p3, e_p3);
    }

    void validate() const {
        const double lengths[] = {l1,   l2,   l3,   l4,   a_b2, a_p2,
                                  a_b3, a_p3, e_b2, e_p2, e_b3, e_p3};
        for (double v : lengths) {
            if (!(v > 0.0)) throw ConfigError("crane geometry lengths must be positive");
        }
    }

    // Desk-scale laboratory crane used throughout the test scenarios.
    static CraneGeometry lab_crane() { return CraneGeometry{}; }
};

}  // namespace cranesim
