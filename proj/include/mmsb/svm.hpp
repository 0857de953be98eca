#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mmsb {

struct SvmConfig {
  double C = 1.0;
  double gamma = 0.0;  // 0: defaults to 1 / feature dimension
  double kkt_tol = 1e-3;
  uint64_t seed = 0;
};

// One binary RBF machine: f(x) = sum_i alpha_y[i] * K(sv[i], x) + bias,
// K(a, b) = exp(-gamma * ||a - b||^2).
struct BinarySvm {
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> alpha_y;  // alpha_i * y_i, only for alpha_i > 0
  double bias = 0.0;
  double gamma = 0.0;
  double C = 0.0;

  double decision(const std::vector<double>& x) const;
};

// One-vs-one multiclass model; a single machine for binary problems.
struct SvmModel {
  int num_classes = 0;
  struct Pairwise {
    int class_lo = 0;   // decision < 0 votes class_lo
    int class_hi = 0;   // decision > 0 votes class_hi
    BinarySvm svm;
  };
  std::vector<Pairwise> machines;
};

// Raw SMO output for a +1/-1 problem, exposed for diagnostics and tests.
struct SmoSolution {
  std::vector<double> alpha;
  double bias = 0.0;
  double dual_objective = 0.0;
  int iterations = 0;
};

double rbf_kernel(const std::vector<double>& a, const std::vector<double>& b,
                  double gamma);

// SMO coordinate-pair ascent on the dual. Runs to a tight internal
// tolerance so the dual objective is solver-quality; the config's kkt_tol is
// the contract checked by callers.
SmoSolution smo_solve(const std::vector<std::vector<double>>& X,
                      const std::vector<int>& y_pm, double C, double gamma,
                      uint64_t seed);

// Trains on integer class labels; binary directly, multiclass one-vs-one.
SvmModel svm_train(const std::vector<std::vector<double>>& X,
                   const std::vector<int>& labels, const SvmConfig& cfg);

// Majority vote over pairwise machines; ties go to the lower class id.
int svm_predict(const SvmModel& model, const std::vector<double>& x);

// Binary decision value of the first machine (binary models only).
double svm_decision(const SvmModel& model, const std::vector<double>& x);

std::string svm_to_json(const SvmModel& model);
SvmModel svm_from_json(const std::string& text);

}  // namespace mmsb
