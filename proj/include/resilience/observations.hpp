#pragma once

#include <span>
#include <vector>

#include "resilience/error.hpp"

namespace resilience {

/// Dense row-major matrix; one row per region, one column per feature.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, fill) {}

  double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
  [[nodiscard]] std::span<const double> row(int i) const {
    return {data.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)};
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

struct Observation {
  int sample_id = 0;
  Matrix w;               // n x p features
  std::vector<double> u;  // n outages

  friend bool operator==(const Observation&, const Observation&) = default;
};

struct ObservationSet {
  int n = 0;
  int p = 0;
  std::vector<Observation> records;

  [[nodiscard]] std::size_t size() const { return records.size(); }
  [[nodiscard]] bool empty() const { return records.empty(); }

  /// Shapes agree, features finite, outages finite and nonnegative.
  void validate() const;

  friend bool operator==(const ObservationSet&, const ObservationSet&) = default;
};

}  // namespace resilience
