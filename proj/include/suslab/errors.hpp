#pragma once

// Exception types for precondition violations and sampling failures.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace suslab {

// Total degree is odd, so no pairing of half-edges exists.
class parity_error : public std::invalid_argument {
  public:
    explicit parity_error(std::int64_t total)
        : std::invalid_argument("total degree " + std::to_string(total) +
                                " is odd; no half-edge pairing exists"),
          total_degree_(total) {}

    std::int64_t total_degree() const { return total_degree_; }

  private:
    std::int64_t total_degree_;
};

// Rejection sampling for a simple graph used up its attempt budget.
class exhaustion_error : public std::runtime_error {
  public:
    exhaustion_error(int attempts, double rejection_rate)
        : std::runtime_error("no simple graph found in " + std::to_string(attempts) +
                             " attempts (rejection rate " + std::to_string(rejection_rate) + ")"),
          attempts_(attempts),
          rejection_rate_(rejection_rate) {}

    int attempts() const { return attempts_; }
    double rejection_rate() const { return rejection_rate_; }

  private:
    int attempts_;
    double rejection_rate_;
};

// An iterative numeric routine failed to reach its tolerance.
class convergence_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace suslab
