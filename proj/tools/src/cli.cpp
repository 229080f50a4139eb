#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rlasso/error.hpp"
#include "rlasso/evaluation.hpp"
#include "rlasso/hyperparam.hpp"
#include "rlasso/io.hpp"
#include "rlasso/samplers.hpp"
#include "rlasso/search.hpp"

namespace rlasso::cli {

namespace {

using Json = nlohmann::ordered_json;

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ConfigError(what + ": '" + text + "' is not a number");
  return v;
}

// fixed:V | mcem | hyperprior | hyperprior:A,B | apriori
struct LambdaChoice {
  std::string text;
  LambdaMode mode = HyperpriorLambda{};
  bool apriori = false;
};

LambdaChoice parse_lambda_mode(const std::string& text, const McemLambda& mcem) {
  LambdaChoice c;
  c.text = text;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string tail = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "fixed") {
    if (tail.empty()) throw ConfigError("--lambda-mode fixed needs a value, e.g. fixed:1.5");
    c.mode = FixedLambda{parse_number(tail, "--lambda-mode fixed")};
  } else if (head == "mcem" && tail.empty()) {
    c.mode = mcem;
  } else if (head == "hyperprior") {
    HyperpriorLambda h;
    if (!tail.empty()) {
      const auto parts = split(tail, ',');
      if (parts.size() != 2) throw ConfigError("--lambda-mode hyperprior expects A,B");
      h.a = parse_number(parts[0], "hyperprior a");
      h.b = parse_number(parts[1], "hyperprior b");
    }
    c.mode = h;
  } else if (head == "apriori" && tail.empty()) {
    c.apriori = true;
    c.mode = FixedLambda{1.0};
  } else {
    throw ConfigError("unknown --lambda-mode '" + text +
                      "' (expected fixed:V, mcem, hyperprior:A,B or apriori)");
  }
  return c;
}

Json vector_json(const VectorXd& v) {
  Json a = Json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Json support_json(const Support& s, const std::vector<std::string>& names) {
  Json a = Json::array();
  for (Index j : s) a.push_back(names[static_cast<std::size_t>(j)]);
  return a;
}

Json selection_json(const ModelSelection& m, const RegressionData& data) {
  Json j;
  j["lambda"] = m.lambda_used;
  j["support"] = support_json(m.support, data.names);
  j["objective"] = m.objective;
  j["beta_penalized"] = vector_json(m.beta_penalized);
  j["beta_refit"] = vector_json(m.beta_refit);
  return j;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write '" + path + "'");
  f << text;
  if (!f) throw DataError("write to '" + path + "' failed");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

RegressionData load_data(const std::string& path, const std::string& response,
                         const std::vector<std::string>& ignore, CsvRegression* raw = nullptr) {
  CsvRegression t = read_csv_regression(path, response);
  for (const auto& name : ignore) {
    if (std::find(t.names.begin(), t.names.end(), name) == t.names.end()) {
      throw DataError("--ignore: column '" + name + "' not found in '" + path + "'");
    }
  }
  std::vector<Index> keep;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < t.names.size(); ++j) {
    if (std::find(ignore.begin(), ignore.end(), t.names[j]) == ignore.end()) {
      keep.push_back(static_cast<Index>(j));
      names.push_back(t.names[j]);
    }
  }
  if (keep.empty()) throw DataError("no predictor columns left after --ignore");
  MatrixXd X(t.X.rows(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) X.col(static_cast<Index>(k)) = t.X.col(keep[k]);
  if (raw) {
    raw->y = t.y;
    raw->X = X;
    raw->names = names;
    raw->response = t.response;
  }
  return standardize(t.y, X, names);
}

int hardware_threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

// ---------------------------------------------------------------------------

struct FitArgs {
  std::string data, response, out;
  std::vector<std::string> ignore;
  std::string sampler = "smtn";
  std::string lambda_mode = "hyperprior:0.001,0.001";
  int iters = 11000;
  int burnin = 1000;
  std::uint64_t seed = 1;
  std::string select = "none";
  int em_iters = 20;
  int em_inner = 1000;
  double level = 0.95;
};

int cmd_fit(const FitArgs& a, std::ostream& out) {
  MCMCConfig config;
  config.sampler = sampler_from_string(a.sampler);
  config.iterations = a.iters;
  config.burn_in = a.burnin;
  config.seed = a.seed;
  config.validate();
  const LambdaChoice lc = parse_lambda_mode(a.lambda_mode, McemLambda{1.0, a.em_iters, a.em_inner});
  PriorSpec prior;
  prior.lambda_mode = lc.mode;
  prior.validate();
  if (a.select != "none" && a.select != "fbp") {
    throw ConfigError("--select must be none or fbp, got '" + a.select + "'");
  }
  if (!(a.level > 0.0 && a.level < 1.0)) throw ConfigError("--level must lie in (0, 1)");

  const RegressionData data = load_data(a.data, a.response, a.ignore);
  Json doc;
  doc["schema_version"] = 1;
  doc["command"] = "fit";

  std::optional<double> apriori;
  if (lc.apriori) {
    apriori = select_lambda_apriori(data);
    prior.lambda_mode = FixedLambda{*apriori};
  }
  MCEMTrace trace;
  const PosteriorDraws draws = fit_posterior(data, prior, config, &trace);
  const FitSummary s = summarize(draws, a.level);

  Json cfg;
  cfg["data"] = a.data;
  cfg["response"] = a.response;
  cfg["ignore"] = a.ignore;
  cfg["sampler"] = a.sampler;
  cfg["lambda_mode"] = a.lambda_mode;
  cfg["iters"] = a.iters;
  cfg["burnin"] = a.burnin;
  cfg["seed"] = a.seed;
  cfg["select"] = a.select;
  cfg["em_iters"] = a.em_iters;
  cfg["em_inner"] = a.em_inner;
  cfg["level"] = a.level;
  doc["config"] = cfg;
  doc["n"] = data.n;
  doc["p"] = data.p;

  const VectorXd raw = data.to_raw_coefficients(s.posterior_mean);
  Json coefs = Json::array();
  for (Index j = 0; j < data.p; ++j) {
    Json c;
    c["name"] = data.names[static_cast<std::size_t>(j)];
    c["mean"] = s.posterior_mean(j);
    c["median"] = s.posterior_median(j);
    c["ci_lower"] = s.ci_lower(j);
    c["ci_upper"] = s.ci_upper(j);
    c["mcse"] = s.mcse(j);
    if (draws.kept() >= 100) {
      c["ess"] = effective_sample_size(draws.beta.col(j));
    } else {
      c["ess"] = nullptr;
    }
    c["raw_mean"] = raw(j);
    coefs.push_back(c);
  }
  doc["coefficients"] = coefs;
  doc["raw_intercept"] = data.raw_intercept(s.posterior_mean);
  {
    std::vector<double> s2(draws.sigma2.data(), draws.sigma2.data() + draws.sigma2.size());
    Json j;
    j["mean"] = draws.sigma2.mean();
    j["median"] = median(s2);
    doc["sigma2"] = j;
  }
  Json lam;
  if (draws.lambda.size() > 0) {
    std::vector<double> l(draws.lambda.data(), draws.lambda.data() + draws.lambda.size());
    lam["mean"] = draws.lambda.mean();
    lam["median"] = median(l);
    lam["ci_lower"] = quantile(l, (1.0 - a.level) / 2.0);
    lam["ci_upper"] = quantile(l, (1.0 + a.level) / 2.0);
  } else {
    lam["value"] = draws.lambda_point.value_or(0.0);
  }
  if (std::holds_alternative<McemLambda>(prior.lambda_mode)) {
    lam["em_path"] = trace.lambda_path;
    lam["em_converged"] = trace.converged;
    lam["em_iterations"] = trace.iterations_used;
  }
  doc["lambda"] = lam;
  if (a.select == "fbp") {
    S5Config s5;
    s5.seed = a.seed;
    doc["selection"] = selection_json(fbp_select(draws, data, s5), data);
  }
  write_text(a.out, dump(doc), out);
  return 0;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string scenario, methods = "bayesA,bayesB,bayesC,rlasso", out;
  int reps = 100;
  std::uint64_t seed = 1;
  int iters = 11000;
  int burnin = 1000;
  double train_fraction = 0.5;
  int threads = 0;
};

std::vector<Method> parse_methods(const std::string& list) {
  std::vector<Method> m;
  for (const auto& name : split(list, ',')) m.push_back(method_from_string(name));
  if (m.empty()) throw ConfigError("--methods is empty");
  return m;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  ScenarioSpec spec = scenario(a.scenario);
  spec.train_fraction = a.train_fraction;
  spec.validate();
  const std::vector<Method> methods = parse_methods(a.methods);
  if (a.reps < 1) throw ConfigError("--reps must be positive");
  if (a.out.empty()) throw ConfigError("--out PREFIX is required");
  MethodConfig mc;
  mc.iterations = a.iters;
  mc.burn_in = a.burnin;
  MCMCConfig check;
  check.iterations = a.iters;
  check.burn_in = a.burnin;
  check.validate();
  const int threads = a.threads > 0 ? a.threads : hardware_threads();

  const ScenarioResult r = run_scenario(spec, a.reps, methods, mc, a.seed, threads);

  std::string csv = "replicate,method,mse,bar,model_size\n";
  for (const auto& rec : r.records) {
    csv += std::to_string(rec.replicate) + "," + to_string(rec.method) + "," + format_double(rec.mse) +
           "," + (rec.bar ? format_double(*rec.bar) : "NA") + "," + std::to_string(rec.model_size) +
           "\n";
  }
  Json doc;
  doc["schema_version"] = 1;
  doc["command"] = "simulate";
  Json cfg;
  cfg["scenario"] = a.scenario;
  cfg["methods"] = a.methods;
  cfg["reps"] = a.reps;
  cfg["seed"] = a.seed;
  cfg["iters"] = a.iters;
  cfg["burnin"] = a.burnin;
  cfg["train_fraction"] = a.train_fraction;
  doc["config"] = cfg;
  Json sc;
  sc["id"] = spec.id;
  sc["n"] = spec.n;
  sc["p"] = spec.p;
  sc["structure"] = to_string(spec.structure);
  sc["rho"] = spec.rho;
  sc["sigma"] = spec.sigma;
  sc["beta0"] = vector_json(spec.beta0);
  doc["scenario"] = sc;
  Json sum = Json::array();
  for (const auto& s : r.summaries) {
    Json j;
    j["method"] = to_string(s.method);
    j["median_mse"] = s.completed ? Json(s.median_mse) : Json(nullptr);
    j["median_bar"] = s.median_bar ? Json(*s.median_bar) : Json(nullptr);
    j["median_model_size"] = s.completed ? Json(s.median_model_size) : Json(nullptr);
    j["completed"] = s.completed;
    j["failed"] = s.failed;
    sum.push_back(j);
  }
  doc["summary"] = sum;
  doc["failures"] = r.failures;
  write_text(a.out + ".csv", csv, out);
  write_text(a.out + ".json", dump(doc), out);
  return 0;
}

// ---------------------------------------------------------------------------

struct CvArgs {
  std::string data, response, method = "bayesC", out;
  std::vector<std::string> ignore;
  int folds = 5;
  int repeats = 10;
  std::uint64_t seed = 1;
  int iters = 11000;
  int burnin = 1000;
  int threads = 0;
};

int cmd_cv(const CvArgs& a, std::ostream& out) {
  const Method method = method_from_string(a.method);
  if (a.folds < 2) throw ConfigError("--folds must be at least 2");
  if (a.repeats < 1) throw ConfigError("--repeats must be positive");
  MCMCConfig check;
  check.iterations = a.iters;
  check.burn_in = a.burnin;
  check.validate();
  MethodConfig mc;
  mc.iterations = a.iters;
  mc.burn_in = a.burnin;
  CsvRegression raw;
  load_data(a.data, a.response, a.ignore, &raw);
  const int threads = a.threads > 0 ? a.threads : hardware_threads();
  const CvResult cv = kfold_cv(raw.y, raw.X, a.folds, a.repeats, method, mc, a.seed, threads);

  Json doc;
  doc["schema_version"] = 1;
  doc["command"] = "cv";
  Json cfg;
  cfg["data"] = a.data;
  cfg["response"] = a.response;
  cfg["ignore"] = a.ignore;
  cfg["method"] = a.method;
  cfg["folds"] = a.folds;
  cfg["repeats"] = a.repeats;
  cfg["seed"] = a.seed;
  cfg["iters"] = a.iters;
  cfg["burnin"] = a.burnin;
  doc["config"] = cfg;
  doc["n"] = raw.X.rows();
  doc["p"] = raw.X.cols();
  doc["mspe"] = cv.mspe;
  doc["model_size"] = cv.model_size;
  doc["fold_mse"] = cv.fold_mse;
  doc["fold_sizes"] = cv.fold_sizes;
  write_text(a.out, dump(doc), out);
  return 0;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reciprocal Bayesian LASSO: posterior sampling, model search and benchmarks", "rlasso"};
  app.require_subcommand(1);

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "Sample the posterior for a CSV regression table");
  fit->add_option("--data", fa.data, "Input CSV with a header row")->required();
  fit->add_option("--response", fa.response, "Response column name")->required();
  fit->add_option("--ignore", fa.ignore, "Columns to leave out")->delimiter(',');
  fit->add_option("--sampler", fa.sampler, "smdp or smtn")->capture_default_str();
  fit->add_option("--lambda-mode", fa.lambda_mode, "fixed:V, mcem, hyperprior:A,B or apriori")
      ->capture_default_str();
  fit->add_option("--iters", fa.iters, "Total iterations")->capture_default_str();
  fit->add_option("--burnin", fa.burnin, "Discarded iterations")->capture_default_str();
  fit->add_option("--seed", fa.seed, "Random seed")->capture_default_str();
  fit->add_option("--select", fa.select, "none or fbp")->capture_default_str();
  fit->add_option("--em-iters", fa.em_iters, "MCEM outer iterations")->capture_default_str();
  fit->add_option("--em-inner", fa.em_inner, "MCEM inner chain length")->capture_default_str();
  fit->add_option("--level", fa.level, "Credible interval level")->capture_default_str();
  fit->add_option("--out", fa.out, "Output JSON path (stdout if omitted)");

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Run a benchmark scenario");
  sim->add_option("--scenario", sa.scenario, "Scenario id, I to XXIV")->required();
  sim->add_option("--reps", sa.reps, "Replications")->capture_default_str();
  sim->add_option("--methods", sa.methods, "Comma-separated methods")->capture_default_str();
  sim->add_option("--seed", sa.seed, "Master seed")->capture_default_str();
  sim->add_option("--iters", sa.iters, "MCMC iterations")->capture_default_str();
  sim->add_option("--burnin", sa.burnin, "MCMC burn-in")->capture_default_str();
  sim->add_option("--train-fraction", sa.train_fraction, "Training share of each replicate")
      ->capture_default_str();
  sim->add_option("--threads", sa.threads, "Worker threads (0 = all cores)");
  sim->add_option("--out", sa.out, "Output prefix for PREFIX.csv and PREFIX.json")->required();

  CvArgs ca;
  auto* cv = app.add_subcommand("cv", "Repeated k-fold cross-validation");
  cv->add_option("--data", ca.data, "Input CSV with a header row")->required();
  cv->add_option("--response", ca.response, "Response column name")->required();
  cv->add_option("--ignore", ca.ignore, "Columns to leave out")->delimiter(',');
  cv->add_option("--folds", ca.folds, "Number of folds")->capture_default_str();
  cv->add_option("--repeats", ca.repeats, "Repetitions of the fold split")->capture_default_str();
  cv->add_option("--method", ca.method, "bayesA, bayesB, bayesC, rlasso or ols")->capture_default_str();
  cv->add_option("--seed", ca.seed, "Random seed")->capture_default_str();
  cv->add_option("--iters", ca.iters, "MCMC iterations")->capture_default_str();
  cv->add_option("--burnin", ca.burnin, "MCMC burn-in")->capture_default_str();
  cv->add_option("--threads", ca.threads, "Worker threads (0 = all cores)");
  cv->add_option("--out", ca.out, "Output JSON path (stdout if omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "rlasso: error: " << one_line(e.what()) << "\n";
    return 2;
  }

  try {
    if (fit->parsed()) return cmd_fit(fa, out);
    if (sim->parsed()) return cmd_simulate(sa, out);
    return cmd_cv(ca, out);
  } catch (const ConfigError& e) {
    err << "rlasso: configuration error: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const DataError& e) {
    err << "rlasso: data error: " << one_line(e.what()) << "\n";
    return 3;
  } catch (const NumericError& e) {
    err << "rlasso: numerical failure: " << one_line(e.what()) << "\n";
    return 4;
  } catch (const std::exception& e) {
    err << "rlasso: numerical failure: " << one_line(e.what()) << "\n";
    return 4;
  }
}

}  // namespace rlasso::cli
