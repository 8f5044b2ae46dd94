#include "cspec/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cspec/errors.hpp"

namespace cspec {

DenseSymmetricMatrix normalized_laplacian_dense(const Graph& g) {
  int n = g.n();
  for (int v = 0; v < n; ++v)
    if (g.degree(v) <= 0.0)
      throw InvalidArgumentError("vertex " + std::to_string(v) + " has zero degree");
  DenseSymmetricMatrix m(n);
  for (int v = 0; v < n; ++v) {
    m.at(v, v) = 1.0;
    for (const auto& nb : g.neighbors(v))
      m.at(v, nb.to) = -nb.weight / std::sqrt(g.degree(v) * g.degree(nb.to));
  }
  return m;
}

Spectrum eigensolve_dense(const DenseSymmetricMatrix& m, bool want_vectors) {
  int n = m.n;
  if (n <= 0) throw InvalidArgumentError("empty matrix");
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::fabs(m.at(i, j) - m.at(j, i)) > 1e-12)
        throw InvalidArgumentError("matrix is not symmetric");

  std::vector<double> a = m.a;
  std::vector<double> vmat((size_t)n * n, 0.0);
  for (int i = 0; i < n; ++i) vmat[(size_t)i * n + i] = 1.0;

  double frob = 0.0;
  for (double x : a) frob += x * x;
  frob = std::sqrt(frob);
  double thresh = 1e-12 * std::max(1.0, frob);

  auto off_norm = [&] {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) s += a[(size_t)i * n + j] * a[(size_t)i * n + j];
    return std::sqrt(2.0 * s);
  };

  bool converged = false;
  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_norm() <= thresh) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        double apq = a[(size_t)p * n + q];
        if (std::fabs(apq) == 0.0) continue;
        double app = a[(size_t)p * n + p], aqq = a[(size_t)q * n + q];
        double theta = (aqq - app) / (2.0 * apq);
        double t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0) t = -t;
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        double tau = s / (1.0 + c);
        a[(size_t)p * n + p] = app - t * apq;
        a[(size_t)q * n + q] = aqq + t * apq;
        a[(size_t)p * n + q] = 0.0;
        a[(size_t)q * n + p] = 0.0;
        for (int i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          double aip = a[(size_t)i * n + p], aiq = a[(size_t)i * n + q];
          double nip = aip - s * (aiq + tau * aip);
          double niq = aiq + s * (aip - tau * aiq);
          a[(size_t)i * n + p] = a[(size_t)p * n + i] = nip;
          a[(size_t)i * n + q] = a[(size_t)q * n + i] = niq;
        }
        for (int i = 0; i < n; ++i) {
          double vip = vmat[(size_t)i * n + p], viq = vmat[(size_t)i * n + q];
          vmat[(size_t)i * n + p] = vip - s * (viq + tau * vip);
          vmat[(size_t)i * n + q] = viq + s * (vip - tau * viq);
        }
      }
    }
  }
  if (!converged && off_norm() > thresh)
    throw NumericError("eigensolver did not converge in 100 sweeps");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return a[(size_t)i * n + i] < a[(size_t)j * n + j]; });

  Spectrum sp;
  sp.values.reserve(n);
  for (int j : order) sp.values.push_back(a[(size_t)j * n + j]);
  if (want_vectors) {
    sp.vectors.assign(n, std::vector<double>(n));
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) sp.vectors[k][i] = vmat[(size_t)i * n + order[k]];
  }
  return sp;
}

}  // namespace cspec
