#include "rlasso/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <numeric>
#include <thread>

#include "rlasso/error.hpp"
#include "rlasso/samplers.hpp"

namespace rlasso {

namespace {

// Runs task(i) for i in [0, count) on up to `threads` workers. Exceptions are
// collected per index and the first one (by index) is rethrown.
void parallel_for(int count, int threads, const std::function<void(int)>& task) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min(threads, count));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

VectorXd pattern(Index p, std::initializer_list<double> head) {
  VectorXd b = VectorXd::Zero(p);
  Index j = 0;
  for (const double v : head) b(j++) = v;
  return b;
}

Support true_support(const VectorXd& beta0) {
  Support s;
  for (Index j = 0; j < beta0.size(); ++j) {
    if (beta0(j) != 0.0) s.push_back(j);
  }
  return s;
}

MatrixXd rows(const MatrixXd& M, const std::vector<Index>& idx) {
  MatrixXd out(static_cast<Index>(idx.size()), M.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) out.row(static_cast<Index>(i)) = M.row(idx[i]);
  return out;
}

VectorXd rows(const VectorXd& v, const std::vector<Index>& idx) {
  VectorXd out(static_cast<Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Index>(i)) = v(idx[i]);
  return out;
}

}  // namespace

const char* to_string(Structure s) {
  switch (s) {
    case Structure::kIS: return "IS";
    case Structure::kCS: return "CS";
    case Structure::kAR: return "AR";
  }
  return "?";
}

void ScenarioSpec::validate() const {
  if (n < 4 || p < 1) throw ConfigError("scenario: n must be >= 4 and p >= 1");
  if (beta0.size() != p) throw ConfigError("scenario: beta0 length must equal p");
  if (!(rho >= 0.0 && rho < 1.0)) throw ConfigError("scenario: rho must lie in [0, 1)");
  if (!(sigma >= 0.0)) throw ConfigError("scenario: sigma must be nonnegative");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("scenario: train fraction must lie in (0, 1)");
  }
}

std::vector<std::string> scenario_ids() {
  return {"I",    "II",   "III",  "IV",  "V",   "VI",   "VII",   "VIII",
          "IX",   "X",    "XI",   "XII", "XIII", "XIV", "XV",    "XVI",
          "XVII", "XVIII", "XIX", "XX",  "XXI", "XXII", "XXIII", "XXIV"};
}

ScenarioSpec scenario(const std::string& id) {
  struct Row {
    Index n, p;
    Structure s;
    double rho, sigma;
  };
  using S = Structure;
  static const Row table[24] = {
      {50, 20, S::kIS, 0.0, 3},    {100, 10, S::kCS, 0.5, 3},    {100, 50, S::kAR, 0.95, 1.5},
      {50, 50, S::kIS, 0.0, 1.5},  {100, 200, S::kCS, 0.5, 3},   {50, 100, S::kAR, 0.95, 1.5},
      {400, 20, S::kIS, 0.0, 3},   {50, 20, S::kCS, 0.5, 3},     {100, 10, S::kAR, 0.95, 3},
      {100, 100, S::kIS, 0.0, 1.5}, {50, 50, S::kCS, 0.5, 1.5},  {100, 200, S::kAR, 0.95, 1.5},
      {400, 50, S::kIS, 0.0, 3},   {400, 200, S::kCS, 0.5, 1.5}, {100, 50, S::kAR, 0.95, 1.5},
      {50, 50, S::kIS, 0.0, 1.5},  {100, 200, S::kCS, 0.5, 3},   {50, 200, S::kAR, 0.95, 3},
      {50, 20, S::kIS, 0.0, 3},    {400, 100, S::kCS, 0.5, 1.5}, {400, 200, S::kAR, 0.95, 3},
      {100, 200, S::kIS, 0.0, 1.5}, {100, 200, S::kCS, 0.5, 3},  {50, 50, S::kAR, 0.95, 1.5},
  };
  const auto ids = scenario_ids();
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw ConfigError("unknown scenario '" + id + "' (expected I..XXIV)");
  const int k = static_cast<int>(it - ids.begin());
  const Row& r = table[k];
  ScenarioSpec spec;
  spec.id = id;
  spec.n = r.n;
  spec.p = r.p;
  spec.structure = r.s;
  spec.rho = r.rho;
  spec.sigma = r.sigma;
  switch (k / 6) {
    case 0: spec.beta0 = pattern(r.p, {5.0}); break;
    case 1: spec.beta0 = pattern(r.p, {3.0, 1.5, 0.0, 0.0, 2.0}); break;
    case 2: spec.beta0 = pattern(r.p, {0.5, -0.75, 1.0, -1.25, 1.5}); break;
    default: spec.beta0 = VectorXd::Constant(r.p, 0.85); break;
  }
  return spec;
}

MatrixXd design_covariance(Index p, Structure structure, double rho) {
  MatrixXd sigma(p, p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      if (i == j) {
        sigma(i, j) = 1.0;
      } else if (structure == Structure::kIS) {
        sigma(i, j) = 0.0;
      } else if (structure == Structure::kCS) {
        sigma(i, j) = rho;
      } else {
        sigma(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
      }
    }
  }
  return sigma;
}

MatrixXd generate_design(Index n, Index p, Structure structure, double rho, Rng& rng) {
  if (n < 1 || p < 1) throw ConfigError("generate_design: n and p must be positive");
  Eigen::LLT<MatrixXd> llt(design_covariance(p, structure, rho));
  if (llt.info() != Eigen::Success) {
    throw ConfigError("generate_design: covariance is not positive definite (rho=" +
                      std::to_string(rho) + ")");
  }
  MatrixXd z(n, p);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < p; ++j) z(i, j) = rng.normal();
  }
  // row z_i L' has covariance L L'
  return z * llt.matrixL().transpose();
}

VectorXd generate_response(const MatrixXd& X, const VectorXd& beta0, double sigma, Rng& rng) {
  if (X.cols() != beta0.size()) throw ConfigError("generate_response: dimension mismatch");
  if (!(sigma >= 0.0)) throw ConfigError("generate_response: sigma must be nonnegative");
  VectorXd y = X * beta0;
  for (Index i = 0; i < y.size(); ++i) y(i) += sigma * rng.normal();
  return y;
}

std::optional<double> balanced_accuracy(const Support& selected, const Support& truth, Index p) {
  long tp = 0, fp = 0;
  for (const Index j : selected) {
    if (std::binary_search(truth.begin(), truth.end(), j)) {
      ++tp;
    } else {
      ++fp;
    }
  }
  const long positives = static_cast<long>(truth.size());
  const long negatives = static_cast<long>(p) - positives;
  if (positives == 0 || negatives == 0) return std::nullopt;
  const long tn = negatives - fp;
  return 0.5 * (static_cast<double>(tp) / static_cast<double>(positives) +
                static_cast<double>(tn) / static_cast<double>(negatives));
}

const char* to_string(Method m) {
  switch (m) {
    case Method::kBayesA: return "bayesA";
    case Method::kBayesB: return "bayesB";
    case Method::kBayesC: return "bayesC";
    case Method::kRLasso: return "rlasso";
    case Method::kOls: return "ols";
  }
  return "?";
}

Method method_from_string(const std::string& name) {
  for (const Method m :
       {Method::kBayesA, Method::kBayesB, Method::kBayesC, Method::kRLasso, Method::kOls}) {
    if (name == to_string(m)) return m;
  }
  throw ConfigError("unknown method '" + name + "' (expected bayesA, bayesB, bayesC, rlasso, ols)");
}

MethodFit fit_method(const RegressionData& data, Method method, const MethodConfig& config,
                     std::uint64_t seed) {
  MCMCConfig mc;
  mc.sampler = SamplerKind::kSmtn;
  mc.iterations = config.iterations;
  mc.burn_in = config.burn_in;
  mc.seed = seed;
  S5Config s5 = config.s5;
  s5.seed = seed;

  MethodFit fit;
  if (method == Method::kOls) {
    Support all(static_cast<std::size_t>(data.p));
    std::iota(all.begin(), all.end(), Index{0});
    fit.beta = ols_refit(data, all);
    fit.selected = std::move(all);
    return fit;
  }
  if (method == Method::kRLasso) {
    fit.lambda = select_lambda_apriori(data);
    ModelSelection sel = select_at_lambda(data, fit.lambda, s5);
    fit.beta = sel.beta_refit;
    fit.selected = std::move(sel.support);
    return fit;
  }
  PriorSpec prior;
  if (method == Method::kBayesA) {
    prior.lambda_mode = FixedLambda{select_lambda_apriori(data)};
  } else if (method == Method::kBayesB) {
    prior.lambda_mode = config.mcem;
  } else {
    prior.lambda_mode = HyperpriorLambda{config.hyperprior.a, config.hyperprior.b};
  }
  const PosteriorDraws draws = fit_posterior(data, prior, mc);
  fit.beta = draws.beta.colwise().mean().transpose();
  ModelSelection sel = fbp_select(draws, data, s5);
  fit.lambda = sel.lambda_used;
  fit.selected = std::move(sel.support);
  return fit;
}

std::vector<std::vector<Index>> kfold_partition(Index n, int k, Rng& rng) {
  std::vector<Index> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), Index{0});
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(i + 1)));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  std::vector<std::vector<Index>> folds(static_cast<std::size_t>(k));
  for (Index i = 0; i < n; ++i) folds[static_cast<std::size_t>(i % k)].push_back(perm[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

CvResult kfold_cv(const VectorXd& raw_y, const MatrixXd& raw_X, int k, int repeats, Method method,
                  const MethodConfig& config, std::uint64_t seed, int threads) {
  if (k < 2) throw ConfigError("cross-validation needs at least 2 folds");
  if (repeats < 1) throw ConfigError("cross-validation repeats must be positive");
  const Index n = raw_X.rows();
  if (raw_y.size() != n) throw DataError("cross-validation: response length mismatch");
  if (n < 2 * k) {
    throw DataError("cross-validation: n = " + std::to_string(n) + " is too small for " +
                    std::to_string(k) + " folds");
  }
  std::vector<std::vector<std::vector<Index>>> partitions;
  for (int r = 0; r < repeats; ++r) {
    Rng rng(seed, static_cast<std::uint64_t>(r) + 1);
    partitions.push_back(kfold_partition(n, k, rng));
  }
  const int tasks = repeats * k;
  std::vector<double> mse(static_cast<std::size_t>(tasks));
  std::vector<double> size(static_cast<std::size_t>(tasks));
  std::vector<int> fold_sizes(static_cast<std::size_t>(tasks));
  parallel_for(tasks, threads, [&](int t) {
    const auto& folds = partitions[static_cast<std::size_t>(t / k)];
    const auto& test = folds[static_cast<std::size_t>(t % k)];
    std::vector<Index> train;
    for (std::size_t f = 0; f < folds.size(); ++f) {
      if (static_cast<int>(f) != t % k) train.insert(train.end(), folds[f].begin(), folds[f].end());
    }
    std::sort(train.begin(), train.end());
    // Only training rows inform the standardization.
    const RegressionData data = standardize(rows(raw_y, train), rows(raw_X, train));
    const MethodFit fit = fit_method(data, method, config, derive_seed(seed, 1000 + t));
    const VectorXd pred = data.predict_raw(rows(raw_X, test), fit.beta);
    mse[static_cast<std::size_t>(t)] = (rows(raw_y, test) - pred).squaredNorm() /
                                       static_cast<double>(test.size());
    size[static_cast<std::size_t>(t)] = static_cast<double>(fit.selected.size());
    fold_sizes[static_cast<std::size_t>(t)] = static_cast<int>(test.size());
  });
  CvResult out;
  out.fold_mse = mse;
  out.fold_sizes = fold_sizes;
  out.mspe = median(mse);
  out.model_size = std::accumulate(size.begin(), size.end(), 0.0) / static_cast<double>(tasks);
  return out;
}

ScenarioResult run_scenario(const ScenarioSpec& spec, int replications,
                            const std::vector<Method>& methods, const MethodConfig& config,
                            std::uint64_t master_seed, int threads) {
  spec.validate();
  if (replications < 1) throw ConfigError("replications must be positive");
  if (methods.empty()) throw ConfigError("no methods requested");
  const Support truth = true_support(spec.beta0);
  const auto n_train = static_cast<Index>(std::lround(spec.train_fraction * spec.n));
  if (n_train < 2 || n_train >= spec.n) throw ConfigError("scenario: degenerate train/test split");

  struct Cell {
    bool ok = false;
    ReplicateRecord record;
    std::string error;
  };
  const auto m_count = static_cast<int>(methods.size());
  std::vector<Cell> cells(static_cast<std::size_t>(replications * m_count));
  parallel_for(replications, threads, [&](int rep) {
    const std::uint64_t rep_seed = derive_seed(master_seed, static_cast<std::uint64_t>(rep) + 1);
    Rng rng(rep_seed);
    const MatrixXd X = generate_design(spec.n, spec.p, spec.structure, spec.rho, rng);
    const VectorXd y = generate_response(X, spec.beta0, spec.sigma, rng);
    const RegressionData train = standardize(y.head(n_train), X.topRows(n_train));
    const MatrixXd X_test = X.bottomRows(spec.n - n_train);
    const VectorXd y_test = y.tail(spec.n - n_train);
    for (int m = 0; m < m_count; ++m) {
      Cell& cell = cells[static_cast<std::size_t>(rep * m_count + m)];
      cell.record.replicate = rep + 1;
      cell.record.method = methods[static_cast<std::size_t>(m)];
      try {
        const std::uint64_t seed =
            derive_seed(rep_seed, static_cast<std::uint64_t>(cell.record.method) + 1);
        const MethodFit fit = fit_method(train, cell.record.method, config, seed);
        const VectorXd pred = train.predict_raw(X_test, fit.beta);
        cell.record.mse = (y_test - pred).squaredNorm() / static_cast<double>(y_test.size());
        cell.record.bar = balanced_accuracy(fit.selected, truth, spec.p);
        cell.record.model_size = static_cast<Index>(fit.selected.size());
        cell.ok = true;
      } catch (const std::exception& e) {
        cell.error = "replicate " + std::to_string(rep + 1) + ", " +
                     to_string(cell.record.method) + ": " + e.what();
      }
    }
  });

  ScenarioResult out;
  out.spec = spec;
  for (int m = 0; m < m_count; ++m) {
    MethodSummary s;
    s.method = methods[static_cast<std::size_t>(m)];
    std::vector<double> mse, bar, size;
    for (int rep = 0; rep < replications; ++rep) {
      const Cell& c = cells[static_cast<std::size_t>(rep * m_count + m)];
      if (!c.ok) {
        ++s.failed;
        continue;
      }
      ++s.completed;
      mse.push_back(c.record.mse);
      if (c.record.bar) bar.push_back(*c.record.bar);
      size.push_back(static_cast<double>(c.record.model_size));
    }
    if (!mse.empty()) {
      s.median_mse = median(mse);
      s.median_model_size = median(size);
    }
    if (!bar.empty()) s.median_bar = median(bar);
    out.summaries.push_back(s);
  }
  for (const Cell& c : cells) {
    if (c.ok) {
      out.records.push_back(c.record);
    } else {
      out.failures.push_back(c.error);
    }
  }
  return out;
}

}  // namespace rlasso
