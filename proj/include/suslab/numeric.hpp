#pragma once

// Compensated summation and small sample-statistics helpers shared by the
// analytics and experiment code. Accumulation order is always the caller's
// index order so results do not depend on thread count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>

namespace suslab {

// Neumaier variant of Kahan summation: tracks a running compensation term
// so long mixed-magnitude sums keep close to full double precision.
class NeumaierSum {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - t) + x;
        } else {
            comp_ += (x - t) + sum_;
        }
        sum_ = t;
    }

    double value() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct MeanStderr {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t count = 0;
};

// Mean and standard error of the mean, accumulated in index order.
inline MeanStderr mean_stderr(std::span<const double> xs) {
    MeanStderr r;
    r.count = static_cast<std::int64_t>(xs.size());
    if (xs.empty()) return r;
    NeumaierSum sum;
    for (double x : xs) sum.add(x);
    r.mean = sum.value() / static_cast<double>(xs.size());
    if (xs.size() < 2) return r;
    NeumaierSum sq;
    for (double x : xs) sq.add((x - r.mean) * (x - r.mean));
    const double nd = static_cast<double>(xs.size());
    r.std_error = std::sqrt(std::max(0.0, sq.value()) / (nd * (nd - 1.0)));
    return r;
}

}  // namespace suslab
