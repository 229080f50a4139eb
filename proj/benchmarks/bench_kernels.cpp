#include <benchmark/benchmark.h>

#include "rlasso/distributions.hpp"
#include "rlasso/evaluation.hpp"
#include "rlasso/samplers.hpp"
#include "rlasso/search.hpp"

namespace {

using namespace rlasso;

RegressionData make_data(Index n, Index p, std::uint64_t seed) {
  Rng rng(seed);
  VectorXd beta0 = VectorXd::Zero(p);
  beta0.head(std::min<Index>(p, 3)) << 3.0, 1.5, 2.0;
  const MatrixXd X = generate_design(n, p, Structure::kAR, 0.5, rng);
  const VectorXd y = generate_response(X, beta0, 3.0, rng);
  return standardize(y, X);
}

void BM_SmtnStep(benchmark::State& st) {
  const Index p = st.range(0);
  const RegressionData data = make_data(100, p, 1);
  const SmtnKernel kernel(data);
  ChainState s = initial_state(data, SamplerKind::kSmtn, 1.0);
  Rng rng(2);
  for (auto _ : st) {
    s = smtn_step(s, kernel, rng);
    benchmark::DoNotOptimize(s.beta.data());
  }
}
BENCHMARK(BM_SmtnStep)->Arg(10)->Arg(50)->Arg(200);

void BM_SmdpStep(benchmark::State& st) {
  const Index p = st.range(0);
  const RegressionData data = make_data(4 * p, p, 1);
  const SmdpKernel kernel(data);
  ChainState s = initial_state(data, SamplerKind::kSmdp, 1.0);
  Rng rng(2);
  for (auto _ : st) {
    s = smdp_step(s, kernel, rng);
    benchmark::DoNotOptimize(s.beta.data());
  }
}
BENCHMARK(BM_SmdpStep)->Arg(10)->Arg(50);

void BM_MidTruncatedMvnSweep(benchmark::State& st) {
  const Index p = st.range(0);
  const RegressionData data = make_data(2 * p, p, 3);
  const MatrixXd Q = data.X.transpose() * data.X + MatrixXd::Identity(p, p);
  const VectorXd h = data.X.transpose() * data.y;
  const VectorXd thresholds = VectorXd::Constant(p, 0.05);
  VectorXd x = VectorXd::Constant(p, 0.5);
  Rng rng(4);
  for (auto _ : st) {
    mid_truncated_mvn_sweep(Q, h, thresholds, x, 1, rng);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_MidTruncatedMvnSweep)->Arg(10)->Arg(100);

void BM_InnerSolve(benchmark::State& st) {
  const Index k = st.range(0);
  const RegressionData data = make_data(100, 20, 5);
  Support support;
  for (Index j = 0; j < k; ++j) support.push_back(j);
  for (auto _ : st) benchmark::DoNotOptimize(inner_solve(data, support, 2.0).objective);
}
BENCHMARK(BM_InnerSolve)->Arg(3)->Arg(10)->Arg(20);

void BM_S5Search(benchmark::State& st) {
  const RegressionData data = make_data(50, 10, 6);
  S5Config cfg;
  for (auto _ : st) benchmark::DoNotOptimize(s5_search(data, 2.0, cfg).objective);
}
BENCHMARK(BM_S5Search)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
