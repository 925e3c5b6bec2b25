#include "slope/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "slope/csv_io.hpp"
#include "slope/datagen.hpp"
#include "slope/errors.hpp"
#include "slope/gauss.hpp"
#include "slope/solver.hpp"

namespace slope {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs fn(0..count-1) on a small pool; the caller must make fn(i) independent
// of execution order. The first exception wins and is rethrown.
void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads - 1));
  for (int t = 0; t < threads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_and_se(const std::vector<double>& xs) {
  MeanSe out;
  const auto m = static_cast<double>(xs.size());
  if (xs.empty()) return out;
  out.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (m - 1.0)) / std::sqrt(m);
  }
  return out;
}

LambdaSequence sequence_for(Method method, const ExperimentConfig& cfg, Eigen::Index n,
                            Eigen::Index p, double delta) {
  switch (method) {
    case Method::SlopeBH: return LambdaSequence::bh(p, cfg.q, delta, cfg.sigma);
    case Method::SlopeHeur: return LambdaSequence::heuristic(p, n, cfg.q, cfg.sigma);
    case Method::Lasso: return LambdaSequence::constant(p, cfg.q, delta, cfg.sigma);
  }
  throw DomainError("unknown method");
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::SlopeBH: return "slope_bh";
    case Method::SlopeHeur: return "slope_heur";
    case Method::Lasso: return "lasso";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (n_grid.empty() || alpha_grid.empty() || delta_grid.empty()) {
    throw DomainError("experiment config: grids must be non-empty");
  }
  for (auto n : n_grid) {
    if (n < 1) throw DomainError("experiment config: n must be positive");
  }
  for (double a : alpha_grid) {
    if (!(a < 1.0)) throw DomainError("experiment config: alpha must be below 1");
  }
  for (double d : delta_grid) {
    if (d < 0.0) throw DomainError("experiment config: delta must be non-negative");
  }
  if (!(q > 0.0 && q < 1.0)) throw DomainError("experiment config: q must lie in (0,1)");
  if (methods.empty()) throw DomainError("experiment config: no methods selected");
  if (replicates < 1) throw DomainError("experiment config: replicates must be >= 1");
  if (!(sigma > 0.0)) throw DomainError("experiment config: sigma must be positive");
  if (zero_tol < 0.0) throw DomainError("experiment config: zero_tol must be non-negative");
  if (amplitude_rule == AmplitudeRule::Fixed && !std::isfinite(fixed_amplitude)) {
    throw DomainError("experiment config: fixed amplitude must be finite");
  }
}

SelectionCounts selection_metrics(const Eigen::VectorXd& b0, const Eigen::VectorXd& beta,
                                  double zero_tol) {
  if (b0.size() != beta.size()) throw ShapeError("selection_metrics: length mismatch");
  SelectionCounts c;
  for (Eigen::Index i = 0; i < b0.size(); ++i) {
    const bool truly = b0[i] != 0.0;
    const bool selected = std::abs(beta[i]) > zero_tol;
    c.k += truly;
    c.R += selected;
    if (selected && truly) ++c.TR;
    if (selected && !truly) ++c.V;
  }
  c.fdp = static_cast<double>(c.V) / static_cast<double>(std::max<Eigen::Index>(c.R, 1));
  c.tpp = c.k > 0 ? static_cast<double>(c.TR) / static_cast<double>(c.k) : 1.0;
  return c;
}

ExperimentReport run_grid(const ExperimentConfig& config, int threads) {
  config.validate();
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }

  ExperimentReport report;
  std::uint64_t cell_index = 0;
  for (Eigen::Index n : config.n_grid) {
    for (double alpha : config.alpha_grid) {
      for (double delta : config.delta_grid) {
        const Eigen::Index p = grid_p(n);
        const Eigen::Index k = std::min<Eigen::Index>(grid_k(n, alpha), p);
        double amplitude = 0.0;
        switch (config.amplitude_rule) {
          case AmplitudeRule::Strong: amplitude = amplitude_strong(p, config.sigma, delta); break;
          case AmplitudeRule::Weak: amplitude = amplitude_weak(p, config.sigma); break;
          case AmplitudeRule::Fixed: amplitude = config.fixed_amplitude; break;
        }
        const std::uint64_t cell_seed = derive_seed(config.master_seed, cell_index);
        ++cell_index;

        std::vector<LambdaSequence> lams;
        lams.reserve(config.methods.size());
        for (Method m : config.methods) lams.push_back(sequence_for(m, config, n, p, delta));

        const auto n_methods = config.methods.size();
        const int reps = config.replicates;
        std::vector<std::uint8_t> ok(static_cast<std::size_t>(reps) * n_methods, 0);
        std::vector<SelectionCounts> counts(static_cast<std::size_t>(reps) * n_methods);

        SolveOptions opts;
        opts.tol_rel = config.solver_tol_rel;
        opts.max_iter = config.solver_max_iter;

        parallel_for(reps, threads, [&](int rep) {
          GeneratorSpec spec;
          spec.n = n;
          spec.p = p;
          spec.k = k;
          spec.amplitude = amplitude;
          spec.sigma = config.sigma;
          spec.seed = derive_seed(cell_seed, static_cast<std::uint64_t>(rep));
          const Dataset data = generate(spec);
          for (std::size_t mi = 0; mi < n_methods; ++mi) {
            const SlopeSolution sol = solve_slope(data, lams[mi], opts);
            const std::size_t slot = static_cast<std::size_t>(rep) * n_methods + mi;
            if (!sol.converged) continue;
            ok[slot] = 1;
            counts[slot] = selection_metrics(*data.b0, sol.beta, config.zero_tol);
          }
        });

        for (std::size_t mi = 0; mi < n_methods; ++mi) {
          std::vector<double> fdps, tpps, model_sizes;
          fdps.reserve(static_cast<std::size_t>(reps));
          for (int rep = 0; rep < reps; ++rep) {
            const std::size_t slot = static_cast<std::size_t>(rep) * n_methods + mi;
            if (!ok[slot]) continue;
            fdps.push_back(counts[slot].fdp);
            tpps.push_back(counts[slot].tpp);
            model_sizes.push_back(static_cast<double>(counts[slot].R));
          }
          const int done = static_cast<int>(fdps.size());
          const int excluded = reps - done;
          if (excluded > 0.01 * reps) {
            throw CertificateError(
                "run_grid: cell n=" + std::to_string(n) + " alpha=" + format_number(alpha) +
                " delta=" + format_number(delta) + " method=" + to_string(config.methods[mi]) +
                " lost " + std::to_string(excluded) + "/" + std::to_string(reps) + " replicates");
          }

          CellResult row;
          row.method = config.methods[mi];
          row.n = n;
          row.p = p;
          row.k = k;
          row.alpha = alpha;
          row.delta = delta;
          const MeanSe fdr = mean_and_se(fdps);
          row.fdr = fdr.mean;
          row.fdr_se = fdr.se;
          if (k > 0) {
            const MeanSe power = mean_and_se(tpps);
            row.power = power.mean;
            row.power_se = power.se;
          } else {
            row.power = kNaN;
            row.power_se = kNaN;
          }
          row.mean_R = mean_and_se(model_sizes).mean;
          row.replicates_done = done;
          report.rows.push_back(row);
        }
      }
    }
  }
  return report;
}

std::vector<Eigen::Index> bh_orthogonal(const Eigen::VectorXd& y_tilde, double q, double sigma) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("bh_orthogonal: q must lie in (0,1)");
  if (!(sigma > 0.0)) throw DomainError("bh_orthogonal: sigma must be positive");
  const Eigen::Index p = y_tilde.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(y_tilde[a]) > std::abs(y_tilde[b]);
  });
  Eigen::Index j_bh = 0;
  for (Eigen::Index j = 1; j <= p; ++j) {
    const double threshold =
        sigma * normal_quantile(1.0 - static_cast<double>(j) * q / (2.0 * static_cast<double>(p)));
    if (std::abs(y_tilde[order[static_cast<std::size_t>(j - 1)]]) >= threshold) j_bh = j;
  }
  std::vector<Eigen::Index> rejected(order.begin(), order.begin() + j_bh);
  std::sort(rejected.begin(), rejected.end());
  return rejected;
}

double fdr_decomposition(const std::vector<SupportDiagnostics>& replicate_diags,
                         const Eigen::VectorXd& b0, const LambdaSequence& lam) {
  if (replicate_diags.empty()) throw DomainError("fdr_decomposition: no replicates");
  double total = 0.0;
  for (const SupportDiagnostics& diag : replicate_diags) {
    if (diag.a != 1.0) throw DomainError("fdr_decomposition: diagnostics must use a = 1");
    if (diag.T.size() != b0.size()) throw ShapeError("fdr_decomposition: length mismatch");
    if (!diag.r_star || *diag.r_star == 0) continue;
    const Eigen::Index r = *diag.r_star;
    const double lam_r = lam[r - 1];
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < b0.size(); ++i) {
      if (b0[i] == 0.0 && std::abs(diag.T[i]) > lam_r) ++count;
    }
    total += static_cast<double>(count) / static_cast<double>(r);
  }
  return total / static_cast<double>(replicate_diags.size());
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("config " + path + ": " + e.what());
  }

  ExperimentConfig cfg;
  try {
    cfg.n_grid.clear();
    for (const auto& v : j.at("n_grid")) cfg.n_grid.push_back(v.get<Eigen::Index>());
    cfg.alpha_grid = j.at("alpha_grid").get<std::vector<double>>();
    if (j.contains("delta_grid")) cfg.delta_grid = j["delta_grid"].get<std::vector<double>>();
    if (j.contains("q")) cfg.q = j["q"].get<double>();
    if (j.contains("amplitude_rule")) {
      const auto& rule = j["amplitude_rule"];
      if (rule.is_number()) {
        cfg.amplitude_rule = AmplitudeRule::Fixed;
        cfg.fixed_amplitude = rule.get<double>();
      } else if (rule == "strong") {
        cfg.amplitude_rule = AmplitudeRule::Strong;
      } else if (rule == "weak") {
        cfg.amplitude_rule = AmplitudeRule::Weak;
      } else {
        throw DataError("config: amplitude_rule must be \"strong\", \"weak\" or a number");
      }
    }
    if (j.contains("methods")) {
      cfg.methods.clear();
      for (const auto& m : j["methods"]) {
        if (m == "slope_bh") cfg.methods.push_back(Method::SlopeBH);
        else if (m == "slope_heur") cfg.methods.push_back(Method::SlopeHeur);
        else if (m == "lasso") cfg.methods.push_back(Method::Lasso);
        else throw DataError("config: unknown method " + m.get<std::string>());
      }
    }
    if (j.contains("replicates")) cfg.replicates = j["replicates"].get<int>();
    if (j.contains("sigma")) cfg.sigma = j["sigma"].get<double>();
    if (j.contains("master_seed")) cfg.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("zero_tol")) cfg.zero_tol = j["zero_tol"].get<double>();
    if (j.contains("solver_tol_rel")) cfg.solver_tol_rel = j["solver_tol_rel"].get<double>();
    if (j.contains("solver_max_iter")) cfg.solver_max_iter = j["solver_max_iter"].get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError("config " + path + ": " + e.what());
  }
  cfg.validate();
  return cfg;
}

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
  out << "method,n,p,k,alpha,delta,fdr,fdr_se,power,power_se,mean_R,replicates_done\n";
  for (const CellResult& row : report.rows) {
    out << to_string(row.method) << ',' << row.n << ',' << row.p << ',' << row.k << ','
        << format_number(row.alpha) << ',' << format_number(row.delta) << ','
        << format_number(row.fdr) << ',' << format_number(row.fdr_se) << ','
        << format_number(row.power) << ',' << format_number(row.power_se) << ','
        << format_number(row.mean_R) << ',' << row.replicates_done << '\n';
  }
}

}  // namespace slope
