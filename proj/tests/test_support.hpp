#pragma once

#include <algorithm>
#include <cmath>

inline bool rel_eq(double a, double b, double tol = 1e-12) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) <= tol * scale;
}
