#pragma once

#include <vector>

#include <Eigen/Dense>

namespace mmw {

struct Assignment {
  /// Column matched to each row, or -1 when the row fell on padding.
  std::vector<int> row_to_col;
  double cost = 0.0;  // sum over real (row, col) pairs
};

/// Minimum-cost one-to-one matching by the Jonker-Volgenant shortest
/// augmenting path method. Rectangular inputs are padded to square with
/// `sentinel`; costs must be finite.
Assignment jv_assign(const Eigen::MatrixXd& cost, double sentinel = 1e6);

}  // namespace mmw
