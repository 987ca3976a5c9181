#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qcs/error.hpp"
#include "qcs/random.hpp"

namespace qcs {

/// Product of linear terms, prod_i (a_i + b_i * x_i).
struct ProductLinearModel {
  std::vector<std::string> feature_names;
  std::vector<std::pair<double, double>> terms;  // (a_i, b_i)

  [[nodiscard]] std::size_t size() const { return terms.size(); }

  static ProductLinearModel identity(std::vector<std::string> names) {
    ProductLinearModel m;
    m.terms.assign(names.size(), {1.0, 0.0});
    m.feature_names = std::move(names);
    return m;
  }

  friend bool operator==(const ProductLinearModel&, const ProductLinearModel&) = default;
};

inline double predict(const ProductLinearModel& model, std::span<const double> x) {
  if (x.size() != model.terms.size())
    throw DimensionError("predict: model has " + std::to_string(model.terms.size()) + " terms, got " +
                         std::to_string(x.size()) + " features");
  double out = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) out *= model.terms[i].first + model.terms[i].second * x[i];
  return out;
}

inline double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw DimensionError("pearson: need two equal-length series of at least 2 values");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) throw ZeroVarianceError("pearson: series has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Pearson, or NaN when either series is constant.
inline double pearson_or_nan(std::span<const double> xs, std::span<const double> ys) {
  try {
    return pearson(xs, ys);
  } catch (const ZeroVarianceError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

struct Sample {
  std::vector<double> x;
  double y = 0.0;
};

struct FitOptions {
  double train_fraction = 0.7;
  std::uint64_t split_seed = 7;
  int max_iter = 200;
  double tol = 1e-9;
};

struct FitReport {
  ProductLinearModel model;
  double train_pearson = 0.0;  // NaN when undefined (constant targets or predictions)
  double test_pearson = 0.0;
  std::uint64_t split_seed = 0;
  double train_fraction = 0.7;
  int iterations = 0;
  double train_sse = 0.0;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
  std::vector<double> sse_history;  // training SSE after each accepted step, starting at the initial point
};

/// Deterministic shuffle split; the training side gets round(n * fraction)
/// samples, clamped so both sides are non-empty.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> train_test_split(std::size_t n, double fraction,
                                                                                      std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(i) - 1));
    std::swap(idx[i - 1], idx[j]);
  }
  auto n_train = static_cast<std::size_t>(std::llround(static_cast<double>(n) * fraction));
  n_train = std::clamp<std::size_t>(n_train, 1, n > 1 ? n - 1 : 1);
  std::vector<std::size_t> train(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> test(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {train, test};
}

namespace detail {

struct ScaledProblem {
  Eigen::MatrixXd x;  // rows = samples, features divided by scale
  Eigen::VectorXd y;
  std::vector<double> scale;
  std::vector<bool> slope_free;
};

inline double sse_of(const ScaledProblem& p, const std::vector<double>& a, const std::vector<double>& b) {
  double sse = 0.0;
  for (Eigen::Index k = 0; k < p.x.rows(); ++k) {
    double f = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) f *= a[i] + b[i] * p.x(k, static_cast<Eigen::Index>(i));
    const double r = p.y(k) - f;
    sse += r * r;
  }
  return sse;
}

}  // namespace detail

/// Fits prod_i (a_i + b_i x_i) by Gauss-Newton with step halving, starting
/// from a_i = 1, b_i = 0. Features are internally rescaled by their largest
/// magnitude. A feature that is constant over the training split keeps
/// b_i = 0. The product has a scale gauge (term i times c, term j over c),
/// so each step takes the minimum-norm least-squares solution.
inline FitReport fit_product_linear(const std::vector<Sample>& samples, const std::vector<std::string>& feature_names,
                                    const FitOptions& opt = {}) {
  const std::size_t d = feature_names.size();
  if (d == 0) throw DimensionError("fit_product_linear: no features");
  if (!(opt.train_fraction > 0.0 && opt.train_fraction < 1.0))
    throw ValidationError("fit_product_linear: train_fraction must be in (0, 1)");
  if (samples.size() < 2 * d)
    throw InsufficientSamplesError("fit_product_linear: need at least " + std::to_string(2 * d) + " samples, got " +
                                   std::to_string(samples.size()));
  for (const auto& s : samples) {
    if (s.x.size() != d) throw DimensionError("fit_product_linear: sample has wrong feature count");
    if (!std::isfinite(s.y)) throw ValidationError("fit_product_linear: non-finite target");
  }

  FitReport report;
  report.split_seed = opt.split_seed;
  report.train_fraction = opt.train_fraction;
  std::tie(report.train_indices, report.test_indices) =
      train_test_split(samples.size(), opt.train_fraction, opt.split_seed);
  const auto& train = report.train_indices;

  detail::ScaledProblem prob;
  const auto rows = static_cast<Eigen::Index>(train.size());
  prob.x.resize(rows, static_cast<Eigen::Index>(d));
  prob.y.resize(rows);
  prob.scale.assign(d, 1.0);
  prob.slope_free.assign(d, false);
  for (std::size_t i = 0; i < d; ++i) {
    double mag = 0.0;
    const double first = samples[train.front()].x[i];
    for (std::size_t k : train) {
      mag = std::max(mag, std::abs(samples[k].x[i]));
      if (samples[k].x[i] != first) prob.slope_free[i] = true;
    }
    prob.scale[i] = mag > 0.0 ? mag : 1.0;
  }
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& s = samples[train[static_cast<std::size_t>(r)]];
    prob.y(r) = s.y;
    for (std::size_t i = 0; i < d; ++i) prob.x(r, static_cast<Eigen::Index>(i)) = s.x[i] / prob.scale[i];
  }

  std::vector<double> a(d, 1.0);
  std::vector<double> b(d, 0.0);
  // parameter layout: a_0..a_{d-1}, then the free slopes in feature order
  std::vector<std::size_t> slope_param;
  for (std::size_t i = 0; i < d; ++i)
    if (prob.slope_free[i]) slope_param.push_back(i);
  const auto n_params = static_cast<Eigen::Index>(d + slope_param.size());

  double sse = detail::sse_of(prob, a, b);
  report.sse_history.push_back(sse);
  Eigen::MatrixXd jac(rows, n_params);
  Eigen::VectorXd resid(rows);
  std::vector<double> term(d);
  std::vector<double> prefix(d + 1);
  std::vector<double> suffix(d + 1);

  int iter = 0;
  bool converged = false;
  for (; iter < opt.max_iter && !converged; ++iter) {
    for (Eigen::Index r = 0; r < rows; ++r) {
      for (std::size_t i = 0; i < d; ++i) term[i] = a[i] + b[i] * prob.x(r, static_cast<Eigen::Index>(i));
      prefix[0] = 1.0;
      for (std::size_t i = 0; i < d; ++i) prefix[i + 1] = prefix[i] * term[i];
      suffix[d] = 1.0;
      for (std::size_t i = d; i-- > 0;) suffix[i] = suffix[i + 1] * term[i];
      resid(r) = prob.y(r) - prefix[d];
      for (std::size_t i = 0; i < d; ++i) jac(r, static_cast<Eigen::Index>(i)) = prefix[i] * suffix[i + 1];
      for (std::size_t k = 0; k < slope_param.size(); ++k) {
        const std::size_t i = slope_param[k];
        jac(r, static_cast<Eigen::Index>(d + k)) = prefix[i] * suffix[i + 1] * prob.x(r, static_cast<Eigen::Index>(i));
      }
    }
    if (sse == 0.0) break;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(jac.rows(), jac.cols());
    // gauge directions are exactly singular; roundoff must not count as rank
    cod.setThreshold(1e-10);
    cod.compute(jac);
    const Eigen::VectorXd step = cod.solve(resid);
    if (!step.allFinite()) break;

    double scale = 1.0;
    bool accepted = false;
    std::vector<double> a_try(d);
    std::vector<double> b_try(d);
    for (int halving = 0; halving <= 20; ++halving, scale *= 0.5) {
      for (std::size_t i = 0; i < d; ++i) {
        a_try[i] = a[i] + scale * step(static_cast<Eigen::Index>(i));
        b_try[i] = b[i];
      }
      for (std::size_t k = 0; k < slope_param.size(); ++k)
        b_try[slope_param[k]] += scale * step(static_cast<Eigen::Index>(d + k));
      const double trial = detail::sse_of(prob, a_try, b_try);
      if (std::isfinite(trial) && trial < sse) {
        const double improvement = (sse - trial) / sse;
        a = a_try;
        b = b_try;
        sse = trial;
        report.sse_history.push_back(sse);
        accepted = true;
        converged = improvement < opt.tol;
        break;
      }
    }
    if (!accepted) break;
  }
  report.iterations = iter;
  report.train_sse = sse;

  report.model.feature_names = feature_names;
  report.model.terms.resize(d);
  for (std::size_t i = 0; i < d; ++i) report.model.terms[i] = {a[i], b[i] / prob.scale[i]};

  auto correlate = [&](const std::vector<std::size_t>& which) {
    if (which.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> pred;
    std::vector<double> actual;
    for (std::size_t k : which) {
      pred.push_back(predict(report.model, samples[k].x));
      actual.push_back(samples[k].y);
    }
    return pearson_or_nan(pred, actual);
  };
  report.train_pearson = correlate(report.train_indices);
  report.test_pearson = correlate(report.test_indices);
  return report;
}

// ---------------------------------------------------------------------------
// Execution time and queue time

/// Per-job inputs of the execution time model, in model order.
struct JobRuntimeFeatures {
  double batch_size = 1;
  double shots = 1024;
  double depth = 0;
  double width = 1;
  double total_gates = 0;
  double machine_size = 1;
  double memory_slots = 1;

  [[nodiscard]] std::vector<double> values() const {
    return {batch_size, shots, depth, width, total_gates, machine_size, memory_slots};
  }
  static const std::vector<std::string>& names() {
    static const std::vector<std::string> n{"batch_size", "shots",        "depth",       "width",
                                            "total_gates", "machine_size", "memory_slots"};
    return n;
  }
};

inline constexpr double kMaxMemorySlots = 75.0;
inline constexpr double kDefaultRuntimeFloor = 1.0;

inline double memory_slots_for(double batch_size) { return std::min(batch_size, kMaxMemorySlots); }

inline double predict_exec_time(const ProductLinearModel& model, const JobRuntimeFeatures& jf,
                                double floor = kDefaultRuntimeFloor) {
  const auto x = jf.values();
  return std::max(predict(model, x), floor);
}

/// Q_M: predicted remainder of the running job plus the predicted execution
/// time of every queued job.
inline double estimate_queue_time(std::span<const JobRuntimeFeatures> queue, const ProductLinearModel& model,
                                  double remaining_current, double floor = kDefaultRuntimeFloor) {
  double total = remaining_current;
  for (const auto& jf : queue) total += predict_exec_time(model, jf, floor);
  return total;
}

/// Ground-truth timing law for synthetic runtime data:
/// per_circuit_scale * batch * (overhead + per_shot * shots) * (1 + per_qubit * machine_size),
/// scaled by a uniform multiplicative noise factor in [1 - noise, 1 + noise].
struct SyntheticTiming {
  double per_circuit_scale = 1.0;
  double circuit_overhead_s = 2.0;
  double per_shot_s = 0.0025;
  double per_qubit = 0.01;
  double noise = 0.05;

  [[nodiscard]] double mean(const JobRuntimeFeatures& jf) const {
    return per_circuit_scale * jf.batch_size * (circuit_overhead_s + per_shot_s * jf.shots) *
           (1.0 + per_qubit * jf.machine_size);
  }
  double draw(const JobRuntimeFeatures& jf, Rng& rng) const {
    return mean(jf) * (1.0 + uniform_real(rng, -noise, noise));
  }
};

// ---------------------------------------------------------------------------
// Model files

inline nlohmann::json to_json_value(const FitReport& r) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [a, b] : r.model.terms) terms.push_back({a, b});
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  return {{"feature_names", r.model.feature_names},
          {"terms", terms},
          {"train_pearson", num(r.train_pearson)},
          {"test_pearson", num(r.test_pearson)},
          {"split_seed", r.split_seed},
          {"train_fraction", r.train_fraction}};
}

inline FitReport fit_report_from_json(const nlohmann::json& j) {
  FitReport r;
  try {
    r.model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    for (const auto& t : j.at("terms")) {
      if (!t.is_array() || t.size() != 2) throw ParseError("model file: terms must be [a, b] pairs");
      r.model.terms.emplace_back(t[0].get<double>(), t[1].get<double>());
    }
    auto num = [&](const char* key) {
      const auto& v = j.at(key);
      return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
    };
    r.train_pearson = num("train_pearson");
    r.test_pearson = num("test_pearson");
    r.split_seed = j.at("split_seed").get<std::uint64_t>();
    r.train_fraction = j.value("train_fraction", 0.7);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("model file: ") + e.what());
  }
  if (r.model.terms.empty() || r.model.terms.size() != r.model.feature_names.size())
    throw ValidationError("model file: terms and feature_names must be non-empty and equal length");
  return r;
}

inline void save_model(const FitReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write model file '" + path + "'");
  out << to_json_value(r).dump(2) << "\n";
}

inline FitReport load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifactError("cannot read model file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return fit_report_from_json(nlohmann::json::parse(buf.str()));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("model file '" + path + "': " + e.what());
  }
}

}  // namespace qcs
