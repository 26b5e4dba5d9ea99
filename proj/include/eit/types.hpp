#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace eit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec2 = Eigen::Vector2d;
using SpMat = Eigen::SparseMatrix<double>;

// Error taxonomy. The CLI maps these onto process exit codes:
// ConfigError -> 2, NumericalError -> 3, LineageError -> 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct LineageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caps both Eigen's internal parallelism and the worker pools used for
// per-sample loops. n <= 1 forces fully sequential execution.
void set_num_threads(int n);
int num_threads();

}  // namespace eit
