#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace superdiff {

// Neumaier compensated accumulator. Deterministic for a fixed add() order.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

std::uint64_t fnv1a64(std::string_view data,
                      std::uint64_t seed = 14695981039346656037ull);

// Fritsch-Carlson monotone piecewise-cubic interpolant. Overshoot-free on
// monotone data; nodes must be strictly increasing.
class MonotoneCubic {
 public:
  MonotoneCubic() = default;
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  bool empty() const { return x_.empty(); }
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

 private:
  std::vector<double> x_, y_, slope_;
};

}  // namespace superdiff
