#include "mmsb/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mmsb/rng.hpp"

namespace mmsb {

namespace {

constexpr double kMinProb = 1e-12;
constexpr int kMaxBisectionSteps = 50;
constexpr double kEntropyTol = 1e-5;

}  // namespace

TsneResult tsne_2d(const std::vector<std::vector<double>>& X,
                   const ProjectionConfig& cfg) {
  int n = static_cast<int>(X.size());
  if (n < 10) throw std::invalid_argument("tsne_2d: need at least 10 points");
  size_t d = X[0].size();
  if (d < 2) throw std::invalid_argument("tsne_2d: need dimension >= 2");
  for (const auto& row : X)
    if (row.size() != d) throw std::invalid_argument("tsne_2d: ragged input");
  if (cfg.perplexity < 2.0) throw std::invalid_argument("tsne_2d: perplexity < 2");
  if (cfg.iterations < 250) throw std::invalid_argument("tsne_2d: iterations < 250");

  TsneResult result;
  result.effective_perplexity = cfg.perplexity;
  double limit = static_cast<double>(n) / 3.0;
  if (cfg.perplexity >= limit) {
    result.effective_perplexity = std::max(2.0, limit - 1e-6);
    result.perplexity_clamped = true;
  }
  double log_perp = std::log(result.effective_perplexity);

  // squared Euclidean distances on raw features
  std::vector<double> D2(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (size_t k = 0; k < d; ++k) {
        double diff = X[static_cast<size_t>(i)][k] - X[static_cast<size_t>(j)][k];
        acc += diff * diff;
      }
      D2[static_cast<size_t>(i) * n + j] = acc;
      D2[static_cast<size_t>(j) * n + i] = acc;
    }

  // conditional affinities: bisect beta_i until the row entropy matches
  std::vector<double> P(static_cast<size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) {
    double beta = 1.0, beta_lo = 0.0, beta_hi = std::numeric_limits<double>::infinity();
    std::vector<double> row(static_cast<size_t>(n), 0.0);
    for (int step = 0; step < kMaxBisectionSteps; ++step) {
      double sum = 0.0, weighted = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) {
          row[static_cast<size_t>(j)] = 0.0;
          continue;
        }
        double p = std::exp(-beta * D2[static_cast<size_t>(i) * n + j]);
        row[static_cast<size_t>(j)] = p;
        sum += p;
        weighted += p * D2[static_cast<size_t>(i) * n + j];
      }
      if (sum <= 0.0) sum = kMinProb;
      double H = std::log(sum) + beta * weighted / sum;  // Shannon entropy (nats)
      double diff = H - log_perp;
      if (std::abs(diff) < kEntropyTol) break;
      if (diff > 0.0) {  // entropy too high: sharpen
        beta_lo = beta;
        beta = std::isinf(beta_hi) ? beta * 2.0 : 0.5 * (beta_lo + beta_hi);
      } else {
        beta_hi = beta;
        beta = 0.5 * (beta_lo + beta_hi);
      }
    }
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += row[static_cast<size_t>(j)];
    if (sum <= 0.0) sum = kMinProb;
    for (int j = 0; j < n; ++j)
      P[static_cast<size_t>(i) * n + j] = row[static_cast<size_t>(j)] / sum;
  }

  // symmetrize
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double p = (P[static_cast<size_t>(i) * n + j] + P[static_cast<size_t>(j) * n + i]) /
                 (2.0 * n);
      p = std::max(p, kMinProb);
      P[static_cast<size_t>(i) * n + j] = p;
      P[static_cast<size_t>(j) * n + i] = p;
    }
  for (int i = 0; i < n; ++i) P[static_cast<size_t>(i) * n + i] = kMinProb;

  Rng rng(cfg.seed);
  std::vector<std::array<double, 2>> Y(static_cast<size_t>(n));
  for (auto& y : Y) {
    y[0] = rng.normal() * 1e-4;
    y[1] = rng.normal() * 1e-4;
  }
  std::vector<std::array<double, 2>> velocity(static_cast<size_t>(n), {0.0, 0.0});
  std::vector<double> Q(static_cast<size_t>(n) * n, 0.0);

  for (int iter = 0; iter < cfg.iterations; ++iter) {
    bool exaggerating = iter < cfg.exaggeration_iters;
    double exaggeration = exaggerating ? cfg.early_exaggeration : 1.0;
    double momentum = exaggerating ? 0.5 : 0.8;

    // student-t affinities in the embedding
    double q_sum = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double dx = Y[static_cast<size_t>(i)][0] - Y[static_cast<size_t>(j)][0];
        double dy = Y[static_cast<size_t>(i)][1] - Y[static_cast<size_t>(j)][1];
        double w = 1.0 / (1.0 + dx * dx + dy * dy);
        Q[static_cast<size_t>(i) * n + j] = w;
        Q[static_cast<size_t>(j) * n + i] = w;
        q_sum += 2.0 * w;
      }

    double kl = 0.0;
    for (int i = 0; i < n; ++i) {
      double gx = 0.0, gy = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        double p = P[static_cast<size_t>(i) * n + j];
        double w = Q[static_cast<size_t>(i) * n + j];
        double q = std::max(w / q_sum, kMinProb);
        double coeff = 4.0 * (exaggeration * p - q) * w;
        gx += coeff * (Y[static_cast<size_t>(i)][0] - Y[static_cast<size_t>(j)][0]);
        gy += coeff * (Y[static_cast<size_t>(i)][1] - Y[static_cast<size_t>(j)][1]);
        kl += p * std::log(p / q);
      }
      velocity[static_cast<size_t>(i)][0] =
          momentum * velocity[static_cast<size_t>(i)][0] - cfg.learning_rate * gx;
      velocity[static_cast<size_t>(i)][1] =
          momentum * velocity[static_cast<size_t>(i)][1] - cfg.learning_rate * gy;
    }
    for (int i = 0; i < n; ++i) {
      Y[static_cast<size_t>(i)][0] += velocity[static_cast<size_t>(i)][0];
      Y[static_cast<size_t>(i)][1] += velocity[static_cast<size_t>(i)][1];
    }
    // re-center
    double mx = 0.0, my = 0.0;
    for (const auto& y : Y) {
      mx += y[0];
      my += y[1];
    }
    mx /= n;
    my /= n;
    for (auto& y : Y) {
      y[0] -= mx;
      y[1] -= my;
    }
    result.kl_trace.push_back(kl);
  }

  result.points = std::move(Y);
  return result;
}

}  // namespace mmsb
