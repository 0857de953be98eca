#pragma once

// Shared independent oracles for the test suites. Everything here is written
// against plain std:: containers so it cannot accidentally reuse the library
// implementation it is checking.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "mmsb/rng.hpp"

namespace testutil {

// ---------------------------------------------------------------------------
// Dense linear algebra

// Gaussian elimination with partial pivoting; A is row-major n x n.
inline std::vector<double> solve_linear(std::vector<std::vector<double>> A,
                                        std::vector<double> b) {
  size_t n = A.size();
  for (size_t col = 0; col < n; ++col) {
    size_t pivot = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
    if (std::abs(A[pivot][col]) < 1e-14)
      throw std::runtime_error("solve_linear: singular matrix");
    std::swap(A[col], A[pivot]);
    std::swap(b[col], b[pivot]);
    for (size_t r = col + 1; r < n; ++r) {
      double f = A[r][col] / A[col][col];
      for (size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (size_t i = n; i-- > 0;) {
    double acc = b[i];
    for (size_t j = i + 1; j < n; ++j) acc -= A[i][j] * x[j];
    x[i] = acc / A[i][i];
  }
  return x;
}

// ---------------------------------------------------------------------------
// Brute-force RBF-SVM dual oracle (projected gradient ascent)

struct DualOracle {
  std::vector<double> alpha;
  double objective = 0.0;
};

inline double rbf(const std::vector<double>& a, const std::vector<double>& b,
                  double gamma) {
  double d2 = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

// Maximizes W(a) = sum a_i - 1/2 sum a_i a_j y_i y_j K_ij over the box
// [0, C]^n intersected with { a : sum a_i y_i = 0 }, by projected gradient
// ascent. The projection onto the intersection is computed by bisection on
// the equality multiplier.
inline DualOracle svm_dual_oracle(const std::vector<std::vector<double>>& X,
                                  const std::vector<int>& y_pm, double C,
                                  double gamma, int iters = 20000,
                                  const std::vector<double>* warm_start = nullptr) {
  size_t n = X.size();
  std::vector<std::vector<double>> K(n, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i; j < n; ++j) K[i][j] = K[j][i] = rbf(X[i], X[j], gamma);

  auto project = [&](std::vector<double> z) {
    // find nu such that a_i = clip(z_i - nu*y_i, 0, C) satisfies sum a_i y_i = 0
    auto balance = [&](double nu) {
      double s = 0.0;
      for (size_t i = 0; i < n; ++i) {
        double a = std::clamp(z[i] - nu * y_pm[i], 0.0, C);
        s += a * y_pm[i];
      }
      return s;
    };
    double lo = -1.0, hi = 1.0;
    while (balance(lo) < 0.0) lo *= 2.0;   // balance is non-increasing in nu
    while (balance(hi) > 0.0) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (balance(mid) > 0.0) lo = mid;
      else hi = mid;
    }
    double nu = 0.5 * (lo + hi);
    for (size_t i = 0; i < n; ++i) z[i] = std::clamp(z[i] - nu * y_pm[i], 0.0, C);
    return z;
  };

  auto objective = [&](const std::vector<double>& a) {
    double obj = std::accumulate(a.begin(), a.end(), 0.0);
    for (size_t i = 0; i < n; ++i) {
      if (a[i] == 0.0) continue;
      for (size_t j = 0; j < n; ++j)
        obj -= 0.5 * a[i] * a[j] * y_pm[i] * y_pm[j] * K[i][j];
    }
    return obj;
  };

  std::vector<double> a =
      project(warm_start ? *warm_start : std::vector<double>(n, 0.0));
  double step = 1.0;
  double best = objective(a);
  for (int it = 0; it < iters; ++it) {
    std::vector<double> g(n, 0.0);
    for (size_t i = 0; i < n; ++i) {
      double acc = 1.0;
      for (size_t j = 0; j < n; ++j)
        acc -= a[j] * y_pm[i] * y_pm[j] * K[i][j];
      g[i] = acc;
    }
    // backtracking line search on the projected step
    double s = step;
    for (int bt = 0; bt < 40; ++bt) {
      std::vector<double> z(n);
      for (size_t i = 0; i < n; ++i) z[i] = a[i] + s * g[i];
      z = project(std::move(z));
      double obj = objective(z);
      if (obj > best - 1e-15) {
        if (obj > best) {
          a = std::move(z);
          best = obj;
        }
        break;
      }
      s *= 0.5;
    }
    step = std::max(s * 2.0, 1e-10);
  }
  return {std::move(a), best};
}

// ---------------------------------------------------------------------------
// Representation probes

// Nearest-centroid classifier accuracy; an independent check that a feature
// space separates the classes.
inline double nearest_centroid_accuracy(
    const std::vector<std::vector<double>>& train_X, const std::vector<int>& train_y,
    const std::vector<std::vector<double>>& test_X, const std::vector<int>& test_y) {
  int C = *std::max_element(train_y.begin(), train_y.end()) + 1;
  size_t d = train_X[0].size();
  std::vector<std::vector<double>> centroid(C, std::vector<double>(d, 0.0));
  std::vector<int> count(C, 0);
  for (size_t i = 0; i < train_X.size(); ++i) {
    for (size_t k = 0; k < d; ++k) centroid[train_y[i]][k] += train_X[i][k];
    ++count[train_y[i]];
  }
  for (int c = 0; c < C; ++c)
    if (count[c] > 0)
      for (auto& v : centroid[c]) v /= count[c];
  int correct = 0;
  for (size_t i = 0; i < test_X.size(); ++i) {
    int best = -1;
    double best_d = 0.0;
    for (int c = 0; c < C; ++c) {
      if (count[c] == 0) continue;
      double d2 = 0.0;
      for (size_t k = 0; k < d; ++k) {
        double diff = test_X[i][k] - centroid[c][k];
        d2 += diff * diff;
      }
      if (best < 0 || d2 < best_d) {
        best = c;
        best_d = d2;
      }
    }
    if (best == test_y[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test_X.size());
}

// Multinomial logistic regression trained by plain gradient descent; used as
// a linear probe of a learned representation.
inline double linear_probe_accuracy(const std::vector<std::vector<double>>& train_X,
                                    const std::vector<int>& train_y,
                                    const std::vector<std::vector<double>>& test_X,
                                    const std::vector<int>& test_y,
                                    int epochs = 300, double lr = 0.5) {
  int C = *std::max_element(train_y.begin(), train_y.end()) + 1;
  size_t d = train_X[0].size();
  std::vector<std::vector<double>> W(C, std::vector<double>(d + 1, 0.0));
  auto logits_of = [&](const std::vector<double>& x) {
    std::vector<double> l(C, 0.0);
    for (int c = 0; c < C; ++c) {
      double acc = W[c][d];
      for (size_t k = 0; k < d; ++k) acc += W[c][k] * x[k];
      l[c] = acc;
    }
    return l;
  };
  size_t n = train_X.size();
  for (int e = 0; e < epochs; ++e) {
    std::vector<std::vector<double>> grad(C, std::vector<double>(d + 1, 0.0));
    for (size_t i = 0; i < n; ++i) {
      auto l = logits_of(train_X[i]);
      double mx = *std::max_element(l.begin(), l.end());
      double z = 0.0;
      for (double& v : l) {
        v = std::exp(v - mx);
        z += v;
      }
      for (int c = 0; c < C; ++c) {
        double g = l[c] / z - (c == train_y[i] ? 1.0 : 0.0);
        for (size_t k = 0; k < d; ++k) grad[c][k] += g * train_X[i][k];
        grad[c][d] += g;
      }
    }
    for (int c = 0; c < C; ++c)
      for (size_t k = 0; k <= d; ++k) W[c][k] -= lr * grad[c][k] / n;
  }
  int correct = 0;
  for (size_t i = 0; i < test_X.size(); ++i) {
    auto l = logits_of(test_X[i]);
    int pred = static_cast<int>(std::max_element(l.begin(), l.end()) - l.begin());
    if (pred == test_y[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test_X.size());
}

// ---------------------------------------------------------------------------
// Embedding quality

// Trustworthiness of a low-dimensional embedding: 1 minus a penalty for test
// points whose embedding neighbors were not neighbors in the original space.
inline double trustworthiness(const std::vector<std::vector<double>>& X,
                              const std::vector<std::array<double, 2>>& Y, int k) {
  int n = static_cast<int>(X.size());
  auto ranks_from = [&](auto&& dist2) {
    // ranks[i][j]: rank of j among i's neighbors (1 = closest), self excluded
    std::vector<std::vector<int>> ranks(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) {
      std::vector<int> order;
      for (int j = 0; j < n; ++j)
        if (j != i) order.push_back(j);
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        double da = dist2(i, a), db = dist2(i, b);
        if (da != db) return da < db;
        return a < b;
      });
      for (size_t r = 0; r < order.size(); ++r)
        ranks[i][order[r]] = static_cast<int>(r) + 1;
    }
    return ranks;
  };
  auto dx = [&](int i, int j) {
    double acc = 0.0;
    for (size_t c = 0; c < X[i].size(); ++c) {
      double d = X[i][c] - X[j][c];
      acc += d * d;
    }
    return acc;
  };
  auto dy = [&](int i, int j) {
    double a = Y[i][0] - Y[j][0], b = Y[i][1] - Y[j][1];
    return a * a + b * b;
  };
  auto rank_x = ranks_from(dx);
  auto rank_y = ranks_from(dy);
  double penalty = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i || rank_y[i][j] > k) continue;
      if (rank_x[i][j] > k) penalty += rank_x[i][j] - k;
    }
  double norm = 2.0 / (static_cast<double>(n) * k * (2.0 * n - 3.0 * k - 1.0));
  return 1.0 - norm * penalty;
}

}  // namespace testutil
