#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qcs/predictors.hpp"
#include "support.hpp"

using namespace qcs;

namespace {

double product_oracle(const std::vector<std::pair<double, double>>& terms, const std::vector<double>& x) {
  double out = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) out *= terms[i].first + terms[i].second * x[i];
  return out;
}

// Covariance form written out by hand.
double pearson_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

std::vector<Sample> two_feature_samples(std::size_t n, std::uint64_t seed, double noise = 0.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> eps(0.0, 1.0);
  std::vector<Sample> out;
  for (std::size_t k = 0; k < n; ++k) {
    Sample s{{u(gen), u(gen)}, 0.0};
    s.y = (1.0 + 0.1 * s.x[0]) * (0.5 - 0.2 * s.x[1]) + noise * eps(gen);
    out.push_back(s);
  }
  return out;
}

JobRuntimeFeatures job(double batch, double shots = 1024, double size = 5) {
  JobRuntimeFeatures jf;
  jf.batch_size = batch;
  jf.shots = shots;
  jf.machine_size = size;
  jf.memory_slots = memory_slots_for(batch);
  return jf;
}

}  // namespace

TEST(Predict, Examples) {
  ProductLinearModel m = ProductLinearModel::identity({"a", "b"});
  EXPECT_EQ(predict(m, std::vector<double>{3.0, 4.0}), 1.0);
  m.terms = {{1.0, -5.0}, {2.0, 0.5}};
  EXPECT_DOUBLE_EQ(predict(m, std::vector<double>{0.1, 2.0}), 0.5 * 3.0);
  EXPECT_THROW(predict(m, std::vector<double>{1.0}), DimensionError);
}

TEST(Predict, MatchesProductOracle) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    ProductLinearModel m = ProductLinearModel::identity({"x", "y", "z"});
    std::vector<double> x(3);
    for (std::size_t i = 0; i < 3; ++i) {
      m.terms[i] = {u(gen), u(gen)};
      x[i] = u(gen);
    }
    EXPECT_NEAR(predict(m, x), product_oracle(m.terms, x), 1e-12);
  }
}

TEST(Pearson, Examples) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_NEAR(pearson(x, std::vector<double>{2, 4, 6, 8, 10}), 1.0, 1e-15);
  EXPECT_NEAR(pearson(x, std::vector<double>{5, 4, 3, 2, 1}), -1.0, 1e-15);
  const std::vector<double> y{1, 3, 2, 5, 4};
  // cov = 2, var_x = var_y = 2.5 (population scale cancels)
  EXPECT_NEAR(pearson(x, y), 0.8, 1e-12);
  EXPECT_NEAR(pearson(x, y), pearson_oracle(x, y), 1e-12);
}

TEST(Pearson, ZeroVarianceAndLength) {
  const std::vector<double> x{1, 2, 3};
  const std::vector<double> flat{7, 7, 7};
  EXPECT_THROW(pearson(x, flat), ZeroVarianceError);
  EXPECT_TRUE(std::isnan(pearson_or_nan(x, flat)));
  EXPECT_THROW(pearson(x, std::vector<double>{1, 2}), DimensionError);
  EXPECT_THROW(pearson(std::vector<double>{1}, std::vector<double>{1}), DimensionError);
}

TEST(Pearson, AffineInvarianceAndOracle) {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> x(20), y(20), ys(20);
    for (std::size_t i = 0; i < 20; ++i) {
      x[i] = g(gen);
      y[i] = 0.5 * x[i] + g(gen);
      ys[i] = 3.0 * y[i] - 11.0;
    }
    const double r = pearson(x, y);
    EXPECT_NEAR(r, pearson_oracle(x, y), 1e-12);
    EXPECT_NEAR(pearson(x, ys), r, 1e-12);
    EXPECT_LE(std::abs(r), 1.0);
  }
}

TEST(Fit, RecoversGeneratingModel) {
  const auto samples = two_feature_samples(200, 5);
  const auto rep = fit_product_linear(samples, {"x0", "x1"});
  EXPECT_GE(rep.test_pearson, 0.999);
  EXPECT_LT(rep.train_sse, 1e-12);
  // the product is only defined up to scale; compare predictions instead
  const std::vector<std::pair<double, double>> truth{{1.0, 0.1}, {0.5, -0.2}};
  for (const auto& s : samples) EXPECT_NEAR(predict(rep.model, s.x), product_oracle(truth, s.x), 1e-6);
}

TEST(Fit, NoisyTargetStillCorrelates) {
  const auto rep = fit_product_linear(two_feature_samples(400, 6, 0.002), {"x0", "x1"});
  EXPECT_GE(rep.test_pearson, 0.95);
}

TEST(Fit, ConstantTarget) {
  auto samples = two_feature_samples(40, 7);
  for (auto& s : samples) s.y = 0.42;
  const auto rep = fit_product_linear(samples, {"x0", "x1"});
  for (const auto& s : samples) EXPECT_NEAR(predict(rep.model, s.x), 0.42, 1e-9);
  EXPECT_TRUE(std::isnan(rep.test_pearson));
}

TEST(Fit, SseHistoryNonIncreasing) {
  for (std::uint64_t seed = 10; seed < 20; ++seed) {
    const auto rep = fit_product_linear(two_feature_samples(60, seed, 0.05), {"x0", "x1"});
    ASSERT_FALSE(rep.sse_history.empty());
    for (std::size_t i = 1; i < rep.sse_history.size(); ++i) EXPECT_LE(rep.sse_history[i], rep.sse_history[i - 1]);
    EXPECT_EQ(rep.sse_history.back(), rep.train_sse);
  }
}

TEST(Fit, ConstantFeatureKeepsZeroSlope) {
  auto samples = two_feature_samples(50, 8);
  for (auto& s : samples) s.x.push_back(3.0);
  const auto rep = fit_product_linear(samples, {"x0", "x1", "flat"});
  EXPECT_EQ(rep.model.terms[2].second, 0.0);
  EXPECT_GE(rep.test_pearson, 0.999);
}

TEST(Fit, InputErrors) {
  const auto samples = two_feature_samples(3, 9);
  EXPECT_THROW(fit_product_linear(samples, {"x0", "x1"}), InsufficientSamplesError);
  EXPECT_THROW(fit_product_linear(samples, {}), DimensionError);
  auto ok = two_feature_samples(10, 9);
  EXPECT_THROW(fit_product_linear(ok, {"x0", "x1"}, FitOptions{1.0}), ValidationError);
  ok[3].y = std::nan("");
  EXPECT_THROW(fit_product_linear(ok, {"x0", "x1"}), ValidationError);
  ok = two_feature_samples(10, 9);
  ok[2].x.pop_back();
  EXPECT_THROW(fit_product_linear(ok, {"x0", "x1"}), DimensionError);
}

TEST(Split, PartitionAndSize) {
  for (std::size_t n : {2u, 3u, 10u, 101u}) {
    for (double f : {0.01, 0.5, 0.7, 0.99}) {
      const auto [train, test] = train_test_split(n, f, 13);
      std::vector<std::size_t> all(train);
      all.insert(all.end(), test.begin(), test.end());
      std::sort(all.begin(), all.end());
      for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(all[i], i);
      EXPECT_GE(train.size(), 1u);
      EXPECT_GE(test.size(), 1u);
      if (n == 101 && f == 0.7) {
        EXPECT_EQ(train.size(), 71u);
      }
    }
  }
  EXPECT_EQ(train_test_split(50, 0.7, 1), train_test_split(50, 0.7, 1));
  EXPECT_NE(train_test_split(50, 0.7, 1), train_test_split(50, 0.7, 2));
}

TEST(ExecTime, FloorClamp) {
  ProductLinearModel m = ProductLinearModel::identity(JobRuntimeFeatures::names());
  m.terms[0] = {-100.0, 1.0};
  EXPECT_EQ(predict_exec_time(m, job(5)), kDefaultRuntimeFloor);
  EXPECT_EQ(predict_exec_time(m, job(5), 2.5), 2.5);
  EXPECT_EQ(predict_exec_time(m, job(150)), 50.0);
}

TEST(ExecTime, SyntheticTimingFitsAndIsMonotoneInBatch) {
  const SyntheticTiming timing;
  Rng rng(21);
  std::vector<Sample> samples;
  for (int k = 0; k < 600; ++k) {
    const auto jf = job(static_cast<double>(uniform_int(rng, 1, 75)), static_cast<double>(uniform_int(rng, 256, 8192)),
                        static_cast<double>(uniform_int(rng, 5, 27)));
    samples.push_back({jf.values(), timing.draw(jf, rng)});
  }
  const auto rep = fit_product_linear(samples, JobRuntimeFeatures::names());
  EXPECT_GE(rep.test_pearson, 0.95);
  double prev = 0.0;
  for (double b = 1; b <= 75; ++b) {
    const double t = predict_exec_time(rep.model, job(b));
    EXPECT_GE(t, prev) << b;
    prev = t;
  }
}

TEST(QueueTime, Examples) {
  const auto m = test::simple_models().runtime;
  EXPECT_EQ(estimate_queue_time({}, m, 0.0), 0.0);
  const std::vector<JobRuntimeFeatures> q{job(1), job(2), job(3)};
  EXPECT_DOUBLE_EQ(estimate_queue_time(q, m, 0.0), 60.0);
  EXPECT_DOUBLE_EQ(estimate_queue_time(q, m, 12.5), 72.5);
}

TEST(QueueTime, FoldLeftAndAdditive) {
  std::mt19937_64 gen(31);
  std::uniform_int_distribution<int> batch(1, 50);
  ProductLinearModel m = ProductLinearModel::identity(JobRuntimeFeatures::names());
  m.terms[0] = {0.3, 1.7};
  m.terms[1] = {1.0, 0.001};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<JobRuntimeFeatures> q;
    for (int k = 0; k < 1 + trial % 12; ++k) q.push_back(job(batch(gen), 100.0 * batch(gen)));
    double fold = 4.0;
    for (const auto& jf : q) fold += std::max(predict(m, jf.values()), kDefaultRuntimeFloor);
    EXPECT_EQ(estimate_queue_time(q, m, 4.0), fold);
    const auto mid = q.size() / 2;
    const std::span<const JobRuntimeFeatures> all(q);
    EXPECT_NEAR(estimate_queue_time(all, m, 4.0),
                estimate_queue_time(all.first(mid), m, 4.0) + estimate_queue_time(all.subspan(mid), m, 0.0), 1e-9);
  }
}

TEST(ModelFile, RoundTrip) {
  test::TempDir dir("model");
  auto rep = fit_product_linear(two_feature_samples(30, 40), {"x0", "x1"});
  save_model(rep, dir.file("m.json"));
  const auto back = load_model(dir.file("m.json"));
  EXPECT_EQ(back.model, rep.model);
  EXPECT_EQ(back.test_pearson, rep.test_pearson);
  EXPECT_EQ(back.split_seed, rep.split_seed);

  rep.test_pearson = std::nan("");
  save_model(rep, dir.file("nan.json"));
  EXPECT_TRUE(std::isnan(load_model(dir.file("nan.json")).test_pearson));
}

TEST(ModelFile, Errors) {
  test::TempDir dir("model_err");
  EXPECT_THROW(load_model(dir.file("absent.json")), MissingArtifactError);
  test::write_file(dir.file("bad.json"), "{ not json");
  EXPECT_THROW(load_model(dir.file("bad.json")), ParseError);
  test::write_file(dir.file("short.json"),
                   R"({"feature_names":["a","b"],"terms":[[1,0]],"train_pearson":1,"test_pearson":1,"split_seed":1})");
  EXPECT_THROW(load_model(dir.file("short.json")), ValidationError);
}
