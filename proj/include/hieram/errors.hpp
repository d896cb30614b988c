#pragma once

#include <stdexcept>
#include <string>

namespace hieram {

// A resolvent denominator came within the pole tolerance of zero: the energy
// sits (numerically) on an eigenvalue of some finite-volume block.
class PoleProximity : public std::runtime_error
{
  public:
    PoleProximity(int level, double magnitude)
        : std::runtime_error("pole proximity at level " + std::to_string(level) +
                             " (|denominator| = " + std::to_string(magnitude) + ")"),
          level_(level), magnitude_(magnitude)
    {}

    int level() const { return level_; }
    double magnitude() const { return magnitude_; }

  private:
    int level_;
    double magnitude_;
};

// Dense assembly or eigensolve requested above the configured size cap.
class DenseCapExceeded : public std::length_error
{
  public:
    DenseCapExceeded(std::size_t size, std::size_t cap)
        : std::length_error("dense size " + std::to_string(size) + " exceeds cap " +
                            std::to_string(cap))
    {}
};

inline constexpr std::size_t kDefaultDenseCap = 4096;
inline constexpr double kPoleTolerance = 1e-12;

} // namespace hieram
