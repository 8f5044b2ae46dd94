#pragma once

#include <vector>

#include "cspec/graph.hpp"

namespace cspec {

struct DenseSymmetricMatrix {
  int n = 0;
  std::vector<double> a;  // row-major, n*n

  explicit DenseSymmetricMatrix(int order) : n(order), a((size_t)order * order, 0.0) {}

  double& at(int i, int j) { return a[(size_t)i * n + j]; }
  double at(int i, int j) const { return a[(size_t)i * n + j]; }
};

struct Spectrum {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // vectors[i] pairs with values[i]; empty if not requested
};

// L = I - Deg^{-1/2} A Deg^{-1/2}. Requires every vertex to have positive degree.
DenseSymmetricMatrix normalized_laplacian_dense(const Graph& g);

// Cyclic Jacobi rotations. Eigenvalues to ~1e-10 absolute for the dense sizes
// used here (n <= ~512); throws NumericError if 100 sweeps do not converge.
Spectrum eigensolve_dense(const DenseSymmetricMatrix& m, bool want_vectors = true);

}  // namespace cspec
