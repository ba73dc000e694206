#pragma once

// Extended real values: a finite double or positive infinity, kept as an
// explicit flag so serialization can emit "inf" in JSON and an empty CSV
// cell instead of leaking IEEE infinity text into numeric columns.

#include <limits>
#include <stdexcept>

namespace suslab {

class ExtReal {
  public:
    ExtReal() = default;
    ExtReal(double v) : value_(v) {}  // implicit: finite values convert freely

    static ExtReal infinity() {
        ExtReal r;
        r.finite_ = false;
        r.value_ = std::numeric_limits<double>::infinity();
        return r;
    }

    bool is_finite() const { return finite_; }

    // The finite value; throws on infinity.
    double value() const {
        if (!finite_) throw std::domain_error("value() called on infinite ExtReal");
        return value_;
    }

    // IEEE +inf when infinite; convenient for comparisons.
    double as_double() const {
        return finite_ ? value_ : std::numeric_limits<double>::infinity();
    }

    // 1/x with 1/inf == 0, the quantity the delta metric compares.
    double inverse() const { return finite_ ? 1.0 / value_ : 0.0; }

    friend bool operator==(const ExtReal& a, const ExtReal& b) {
        if (a.finite_ != b.finite_) return false;
        return !a.finite_ || a.value_ == b.value_;
    }

  private:
    double value_ = 0.0;
    bool finite_ = true;
};

}  // namespace suslab
