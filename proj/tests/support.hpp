#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <doctest.h>

namespace testing {

// Mean and standard error of a sample, accumulated online.
struct Moments {
    double n = 0, sum = 0, sum2 = 0;
    void add(double x) {
        n += 1;
        sum += x;
        sum2 += x * x;
    }
    double mean() const { return sum / n; }
    double se() const {
        const double m = mean();
        return std::sqrt(std::max(0.0, sum2 / n - m * m) / (n - 1));
    }
};

inline void check_within_se(double value, double expected, double se, double k = 3.0) {
    INFO("value=" << value << " expected=" << expected << " se=" << se);
    CHECK(std::abs(value - expected) <= k * se + 1e-15);
}

// Standard error of a Bernoulli frequency with true probability p.
inline double freq_se(double p, double n) { return std::sqrt(p * (1 - p) / n); }

}  // namespace testing
