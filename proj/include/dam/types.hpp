#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

namespace dam {

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
inline constexpr double kEps = 1e-9;

struct PriceInterval {
  double lower = 0.0;
  double upper = 0.0;

  bool contains(double price, double tol = 0.0) const {
    return price >= lower - tol && price <= upper + tol;
  }
  bool contains(const PriceInterval& other, double tol = 0.0) const {
    return other.lower >= lower - tol && other.upper <= upper + tol;
  }
  double clamp(double price) const { return std::clamp(price, lower, upper); }
  double width() const { return upper - lower; }
  bool operator==(const PriceInterval&) const = default;
};

// Row-major rows x cols table; rows are areas or interconnectors, cols are hours.
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t rows, std::size_t cols, T value = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

// pi(area, hour)
using PriceVector = Grid<double>;
// tau(interconnector, hour)
using FlowMatrix = Grid<double>;

}  // namespace dam
