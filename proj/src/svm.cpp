#include "mmsb/svm.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "mmsb/rng.hpp"

namespace mmsb {

namespace {

constexpr double kStepEps = 1e-12;
constexpr double kViolationTol = 1e-10;  // internal convergence tolerance
constexpr long kMaxExaminePasses = 100000;

struct Smo {
  const std::vector<std::vector<double>>& X;
  const std::vector<int>& y;
  double C;
  double gamma;
  Rng rng;
  int n;
  std::vector<double> K;      // full kernel matrix, row-major
  std::vector<double> alpha;
  std::vector<double> E;      // f(x_i) - y_i
  double b = 0.0;

  Smo(const std::vector<std::vector<double>>& X_, const std::vector<int>& y_,
      double C_, double gamma_, uint64_t seed)
      : X(X_), y(y_), C(C_), gamma(gamma_), rng(seed),
        n(static_cast<int>(X_.size())) {
    K.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double k = rbf_kernel(X[static_cast<size_t>(i)], X[static_cast<size_t>(j)], gamma);
        K[static_cast<size_t>(i) * n + j] = k;
        K[static_cast<size_t>(j) * n + i] = k;
      }
    alpha.assign(static_cast<size_t>(n), 0.0);
    E.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) E[static_cast<size_t>(i)] = -y[static_cast<size_t>(i)];
  }

  double k(int i, int j) const { return K[static_cast<size_t>(i) * n + j]; }

  bool take_step(int i1, int i2) {
    if (i1 == i2) return false;
    double a1 = alpha[static_cast<size_t>(i1)], a2 = alpha[static_cast<size_t>(i2)];
    int y1 = y[static_cast<size_t>(i1)], y2 = y[static_cast<size_t>(i2)];
    double E1 = E[static_cast<size_t>(i1)], E2 = E[static_cast<size_t>(i2)];
    double s = y1 * y2;
    double L, H;
    if (y1 != y2) {
      L = std::max(0.0, a2 - a1);
      H = std::min(C, C + a2 - a1);
    } else {
      L = std::max(0.0, a2 + a1 - C);
      H = std::min(C, a2 + a1);
    }
    if (L >= H) return false;
    double eta = k(i1, i1) + k(i2, i2) - 2.0 * k(i1, i2);
    double a2new;
    if (eta > kStepEps) {
      a2new = a2 + y2 * (E1 - E2) / eta;
      a2new = std::clamp(a2new, L, H);
    } else {
      // flat direction: objective is linear in a2, optimum at a bound
      double slope = y2 * (E1 - E2);
      if (slope > kStepEps) a2new = H;
      else if (slope < -kStepEps) a2new = L;
      else return false;
    }
    if (std::abs(a2new - a2) < kStepEps * (a2new + a2 + kStepEps)) return false;
    double a1new = a1 + s * (a2 - a2new);
    double d1 = y1 * (a1new - a1);
    double d2 = y2 * (a2new - a2);
    double b1 = b - E1 - d1 * k(i1, i1) - d2 * k(i1, i2);
    double b2 = b - E2 - d1 * k(i1, i2) - d2 * k(i2, i2);
    double bnew;
    if (a1new > 0.0 && a1new < C) bnew = b1;
    else if (a2new > 0.0 && a2new < C) bnew = b2;
    else bnew = 0.5 * (b1 + b2);
    double db = bnew - b;
    for (int i = 0; i < n; ++i)
      E[static_cast<size_t>(i)] += d1 * k(i1, i) + d2 * k(i2, i) + db;
    alpha[static_cast<size_t>(i1)] = a1new;
    alpha[static_cast<size_t>(i2)] = a2new;
    b = bnew;
    return true;
  }

  bool examine(int i2) {
    double a2 = alpha[static_cast<size_t>(i2)];
    double r2 = E[static_cast<size_t>(i2)] * y[static_cast<size_t>(i2)];
    bool violates = (r2 < -kViolationTol && a2 < C) || (r2 > kViolationTol && a2 > 0.0);
    if (!violates) return false;
    // second-choice heuristic: max |E1 - E2| over non-bound points
    int best = -1;
    double best_gap = 0.0;
    for (int i = 0; i < n; ++i) {
      double a = alpha[static_cast<size_t>(i)];
      if (a <= 0.0 || a >= C) continue;
      double gap = std::abs(E[static_cast<size_t>(i)] - E[static_cast<size_t>(i2)]);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best >= 0 && take_step(best, i2)) return true;
    int start = rng.uniform_int(n);
    for (int off = 0; off < n; ++off) {
      int i = (start + off) % n;
      double a = alpha[static_cast<size_t>(i)];
      if (a <= 0.0 || a >= C) continue;
      if (take_step(i, i2)) return true;
    }
    start = rng.uniform_int(n);
    for (int off = 0; off < n; ++off) {
      int i = (start + off) % n;
      if (take_step(i, i2)) return true;
    }
    return false;
  }

  int solve() {
    int passes = 0;
    bool examine_all = true;
    int changed = 0;
    while ((changed > 0 || examine_all) && passes < kMaxExaminePasses) {
      ++passes;
      changed = 0;
      if (examine_all) {
        for (int i = 0; i < n; ++i) changed += examine(i) ? 1 : 0;
      } else {
        for (int i = 0; i < n; ++i) {
          double a = alpha[static_cast<size_t>(i)];
          if (a > 0.0 && a < C) changed += examine(i) ? 1 : 0;
        }
      }
      if (examine_all) examine_all = false;
      else if (changed == 0) examine_all = true;
    }
    return passes;
  }

  double dual_objective() const {
    double obj = 0.0;
    for (int i = 0; i < n; ++i) obj += alpha[static_cast<size_t>(i)];
    for (int i = 0; i < n; ++i) {
      if (alpha[static_cast<size_t>(i)] == 0.0) continue;
      for (int j = 0; j < n; ++j) {
        if (alpha[static_cast<size_t>(j)] == 0.0) continue;
        obj -= 0.5 * alpha[static_cast<size_t>(i)] * alpha[static_cast<size_t>(j)] *
               y[static_cast<size_t>(i)] * y[static_cast<size_t>(j)] * k(i, j);
      }
    }
    return obj;
  }
};

}  // namespace

double rbf_kernel(const std::vector<double>& a, const std::vector<double>& b,
                  double gamma) {
  if (a.size() != b.size())
    throw std::invalid_argument("rbf_kernel: dimension mismatch");
  double d2 = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

double BinarySvm::decision(const std::vector<double>& x) const {
  double f = bias;
  for (size_t i = 0; i < support_vectors.size(); ++i)
    f += alpha_y[i] * rbf_kernel(support_vectors[i], x, gamma);
  return f;
}

SmoSolution smo_solve(const std::vector<std::vector<double>>& X,
                      const std::vector<int>& y_pm, double C, double gamma,
                      uint64_t seed) {
  if (X.empty() || X.size() != y_pm.size())
    throw std::invalid_argument("smo_solve: bad problem size");
  for (int yi : y_pm)
    if (yi != 1 && yi != -1)
      throw std::invalid_argument("smo_solve: labels must be +1/-1");
  Smo smo(X, y_pm, C, gamma, seed);
  SmoSolution sol;
  sol.iterations = smo.solve();
  sol.alpha = smo.alpha;
  sol.bias = smo.b;
  sol.dual_objective = smo.dual_objective();
  return sol;
}

namespace {

BinarySvm build_binary(const std::vector<std::vector<double>>& X,
                       const std::vector<int>& y_pm, double C, double gamma,
                       uint64_t seed) {
  SmoSolution sol = smo_solve(X, y_pm, C, gamma, seed);
  BinarySvm svm;
  svm.gamma = gamma;
  svm.C = C;
  svm.bias = sol.bias;
  for (size_t i = 0; i < X.size(); ++i) {
    if (sol.alpha[i] <= 0.0) continue;
    svm.support_vectors.push_back(X[i]);
    svm.alpha_y.push_back(sol.alpha[i] * y_pm[i]);
  }
  return svm;
}

}  // namespace

SvmModel svm_train(const std::vector<std::vector<double>>& X,
                   const std::vector<int>& labels, const SvmConfig& cfg) {
  if (X.empty() || X.size() != labels.size())
    throw std::invalid_argument("svm_train: bad problem size");
  std::set<int> classes(labels.begin(), labels.end());
  if (classes.size() < 2)
    throw std::invalid_argument("svm_train: degenerate single-class input");
  double gamma = cfg.gamma > 0.0 ? cfg.gamma
                                 : 1.0 / static_cast<double>(X[0].size());
  SvmModel model;
  model.num_classes = *classes.rbegin() + 1;
  std::vector<int> class_list(classes.begin(), classes.end());
  uint64_t machine_seed = cfg.seed;
  for (size_t a = 0; a < class_list.size(); ++a) {
    for (size_t b = a + 1; b < class_list.size(); ++b) {
      int lo = class_list[a], hi = class_list[b];
      std::vector<std::vector<double>> Xp;
      std::vector<int> yp;
      for (size_t i = 0; i < X.size(); ++i) {
        if (labels[i] == lo) {
          Xp.push_back(X[i]);
          yp.push_back(-1);
        } else if (labels[i] == hi) {
          Xp.push_back(X[i]);
          yp.push_back(1);
        }
      }
      SvmModel::Pairwise pw;
      pw.class_lo = lo;
      pw.class_hi = hi;
      pw.svm = build_binary(Xp, yp, cfg.C, gamma, machine_seed++);
      model.machines.push_back(std::move(pw));
    }
  }
  return model;
}

int svm_predict(const SvmModel& model, const std::vector<double>& x) {
  if (model.machines.empty()) throw std::logic_error("svm_predict: empty model");
  std::vector<int> votes(static_cast<size_t>(model.num_classes), 0);
  for (const auto& pw : model.machines) {
    double f = pw.svm.decision(x);
    ++votes[static_cast<size_t>(f > 0.0 ? pw.class_hi : pw.class_lo)];
  }
  // ties resolve to the lower class id
  int best = 0;
  for (int c = 1; c < model.num_classes; ++c)
    if (votes[static_cast<size_t>(c)] > votes[static_cast<size_t>(best)]) best = c;
  return best;
}

double svm_decision(const SvmModel& model, const std::vector<double>& x) {
  if (model.machines.size() != 1)
    throw std::logic_error("svm_decision: defined for binary models only");
  return model.machines[0].svm.decision(x);
}

std::string svm_to_json(const SvmModel& model) {
  nlohmann::json j;
  j["format"] = "MMSB-SVM-1";
  j["num_classes"] = model.num_classes;
  j["machines"] = nlohmann::json::array();
  for (const auto& pw : model.machines) {
    nlohmann::json m;
    m["class_lo"] = pw.class_lo;
    m["class_hi"] = pw.class_hi;
    m["support_vectors"] = pw.svm.support_vectors;
    m["alpha_y"] = pw.svm.alpha_y;
    m["bias"] = pw.svm.bias;
    m["gamma"] = pw.svm.gamma;
    m["C"] = pw.svm.C;
    j["machines"].push_back(std::move(m));
  }
  return j.dump(2);
}

SvmModel svm_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.value("format", "") != std::string("MMSB-SVM-1"))
    throw std::runtime_error("svm_from_json: unknown format");
  SvmModel model;
  model.num_classes = j.at("num_classes").get<int>();
  for (const auto& m : j.at("machines")) {
    SvmModel::Pairwise pw;
    pw.class_lo = m.at("class_lo").get<int>();
    pw.class_hi = m.at("class_hi").get<int>();
    pw.svm.support_vectors =
        m.at("support_vectors").get<std::vector<std::vector<double>>>();
    pw.svm.alpha_y = m.at("alpha_y").get<std::vector<double>>();
    pw.svm.bias = m.at("bias").get<double>();
    pw.svm.gamma = m.at("gamma").get<double>();
    pw.svm.C = m.at("C").get<double>();
    model.machines.push_back(std::move(pw));
  }
  return model;
}

}  // namespace mmsb
