#include "pacbound/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pacbound/klmath.hpp"
#include "pacbound/rng.hpp"

namespace pacbound {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::int64_t kEnumCap = 30;   // max sum(m_i) for exact enumeration
constexpr std::int64_t kChunk = 4096;   // fixed chunk size for deterministic folds

double log_choose(std::int64_t m, std::int64_t k) {
  if (k == 0 || k == m) return 0.0;
  return std::lgamma(static_cast<double>(m + 1)) - std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(m - k + 1));
}

struct EnumContext {
  std::vector<std::int64_t> sizes;
  std::vector<std::int64_t> strides;  // mixed-radix decode of a flat index
  std::vector<std::vector<double>> lchoose;
  std::int64_t total = 1;
  double mu = 0.0;
  double log_mu = kNegInf;
  double log_1m_mu = kNegInf;
  double n_lambda = 0.0;

  explicit EnumContext(const MgfSpec& spec) {
    if (spec.task_sizes.empty()) {
      throw std::invalid_argument("MgfSpec: task_sizes must be non-empty");
    }
    if (!(spec.mu >= 0.0 && spec.mu <= 1.0)) {
      throw std::invalid_argument("MgfSpec: mu must lie in [0,1]");
    }
    if (!(spec.multiplier > 0.0)) {
      throw std::invalid_argument("MgfSpec: multiplier must be > 0");
    }
    std::int64_t sum = 0;
    for (std::int64_t m : spec.task_sizes) {
      if (m < 1) throw std::invalid_argument("MgfSpec: task sizes must be >= 1");
      sum += m;
    }
    if (sum > kEnumCap) {
      throw std::invalid_argument("MgfSpec: enumeration cap exceeded, use the MC estimate");
    }
    sizes = spec.task_sizes;
    const int n = static_cast<int>(sizes.size());
    strides.assign(n, 1);
    for (int i = n - 2; i >= 0; --i) strides[i] = strides[i + 1] * (sizes[i + 1] + 1);
    total = strides[0] * (sizes[0] + 1);
    lchoose.resize(n);
    for (int i = 0; i < n; ++i) {
      lchoose[i].resize(sizes[i] + 1);
      for (std::int64_t k = 0; k <= sizes[i]; ++k) lchoose[i][k] = log_choose(sizes[i], k);
    }
    mu = spec.mu;
    if (mu > 0.0) log_mu = std::log(mu);
    if (mu < 1.0) log_1m_mu = std::log1p(-mu);
    n_lambda = static_cast<double>(n) * spec.multiplier;
  }

  double log_term(std::int64_t idx) const {
    const int n = static_cast<int>(sizes.size());
    double lpmf = 0.0;
    double muhat = 0.0;
    for (int i = 0; i < n; ++i) {
      const std::int64_t k = (idx / strides[i]) % (sizes[i] + 1);
      lpmf += lchoose[i][k];
      if (k > 0) lpmf += static_cast<double>(k) * log_mu;
      if (k < sizes[i]) lpmf += static_cast<double>(sizes[i] - k) * log_1m_mu;
      muhat += static_cast<double>(k) / static_cast<double>(sizes[i]);
    }
    if (lpmf == kNegInf) return kNegInf;  // impossible outcome at mu in {0,1}
    muhat /= n;
    return lpmf + n_lambda * kl_bernoulli(muhat, mu);
  }
};

// Factor-out-max summation over the flat outcome space with a fixed chunk
// decomposition, so the result is identical for any thread count.
template <bool Parallel>
double mgf_enum(const MgfSpec& spec) {
  const EnumContext ctx(spec);
  const std::int64_t chunks = (ctx.total + kChunk - 1) / kChunk;
  std::vector<double> chunk_max(chunks, kNegInf);

#pragma omp parallel for schedule(static) if (Parallel && chunks > 1)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::int64_t end = std::min(ctx.total, (c + 1) * kChunk);
    double mx = kNegInf;
    for (std::int64_t idx = c * kChunk; idx < end; ++idx) {
      mx = std::max(mx, ctx.log_term(idx));
    }
    chunk_max[c] = mx;
  }
  double global_max = kNegInf;
  for (double v : chunk_max) global_max = std::max(global_max, v);
  if (global_max == kNegInf) return 0.0;

  std::vector<double> chunk_sum(chunks, 0.0);
#pragma omp parallel for schedule(static) if (Parallel && chunks > 1)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::int64_t end = std::min(ctx.total, (c + 1) * kChunk);
    double s = 0.0;
    for (std::int64_t idx = c * kChunk; idx < end; ++idx) {
      const double t = ctx.log_term(idx);
      if (t != kNegInf) s += std::exp(t - global_max);
    }
    chunk_sum[c] = s;
  }
  double total = 0.0;
  for (double v : chunk_sum) total += v;
  return std::exp(global_max) * total;
}

template <bool Parallel>
McEstimate mgf_mc(const MgfSpec& spec, std::int64_t samples, std::uint64_t seed) {
  if (samples < 2) throw std::invalid_argument("mgf_unbalanced_mc: need samples >= 2");
  if (spec.task_sizes.empty()) throw std::invalid_argument("MgfSpec: task_sizes empty");
  const int n = static_cast<int>(spec.task_sizes.size());
  const double nl = static_cast<double>(n) * spec.multiplier;

  const std::int64_t chunks = (samples + kChunk - 1) / kChunk;
  std::vector<double> sum1(chunks, 0.0), sum2(chunks, 0.0);

#pragma omp parallel for schedule(static) if (Parallel && chunks > 1)
  for (std::int64_t c = 0; c < chunks; ++c) {
    const std::int64_t end = std::min(samples, (c + 1) * kChunk);
    double s1 = 0.0, s2 = 0.0;
    for (std::int64_t t = c * kChunk; t < end; ++t) {
      SplitRng rng(seed, static_cast<std::uint64_t>(t));
      double muhat = 0.0;
      for (int i = 0; i < n; ++i) {
        std::int64_t k = 0;
        for (std::int64_t j = 0; j < spec.task_sizes[i]; ++j) {
          k += rng.bernoulli(spec.mu) ? 1 : 0;
        }
        muhat += static_cast<double>(k) / static_cast<double>(spec.task_sizes[i]);
      }
      muhat /= n;
      const double v = std::exp(nl * kl_bernoulli(muhat, spec.mu));
      s1 += v;
      s2 += v * v;
    }
    sum1[c] = s1;
    sum2[c] = s2;
  }
  double s1 = 0.0, s2 = 0.0;
  for (std::int64_t c = 0; c < chunks; ++c) {
    s1 += sum1[c];
    s2 += sum2[c];
  }
  McEstimate est;
  est.samples = samples;
  est.mean = s1 / samples;
  const double var = std::max(0.0, (s2 - samples * est.mean * est.mean) / (samples - 1));
  est.std_error = std::sqrt(var / samples);
  return est;
}

}  // namespace

double mgf_unbalanced_exact(const MgfSpec& spec) { return mgf_enum<true>(spec); }
double mgf_unbalanced_exact_serial(const MgfSpec& spec) { return mgf_enum<false>(spec); }

McEstimate mgf_unbalanced_mc(const MgfSpec& spec, std::int64_t samples, std::uint64_t seed) {
  return mgf_mc<true>(spec, samples, seed);
}
McEstimate mgf_unbalanced_mc_serial(const MgfSpec& spec, std::int64_t samples,
                                    std::uint64_t seed) {
  return mgf_mc<false>(spec, samples, seed);
}

double mgf_catoni_check(const std::vector<std::int64_t>& task_sizes,
                        const std::vector<double>& mus, double lambda) {
  if (task_sizes.empty() || task_sizes.size() != mus.size()) {
    throw std::invalid_argument("mgf_catoni_check: sizes and mus must be non-empty and match");
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("mgf_catoni_check: lambda must be > 0");
  std::int64_t sum = 0;
  for (std::int64_t m : task_sizes) sum += m;
  if (sum > kEnumCap) {
    throw std::invalid_argument("mgf_catoni_check: enumeration cap exceeded");
  }

  const int n = static_cast<int>(task_sizes.size());
  double log_total = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::int64_t m = task_sizes[i];
    const double mu = mus[i];
    if (!(mu >= 0.0 && mu <= 1.0)) {
      throw std::invalid_argument("mgf_catoni_check: mus must lie in [0,1]");
    }
    const double a = lambda / (static_cast<double>(n) * static_cast<double>(m));
    const double phi_mu = phi(a, mu);
    const double log_mu = mu > 0.0 ? std::log(mu) : kNegInf;
    const double log_1m = mu < 1.0 ? std::log1p(-mu) : kNegInf;
    // log E[exp((lambda/n)(Phi_a(mu) - k/m))] over k ~ Binomial(m, mu)
    double mx = kNegInf;
    std::vector<double> terms(m + 1, kNegInf);
    for (std::int64_t k = 0; k <= m; ++k) {
      double lpmf = log_choose(m, k);
      if (k > 0) lpmf += static_cast<double>(k) * log_mu;
      if (k < m) lpmf += static_cast<double>(m - k) * log_1m;
      if (lpmf == kNegInf) continue;
      terms[k] = lpmf + (lambda / n) * (phi_mu - static_cast<double>(k) / m);
      mx = std::max(mx, terms[k]);
    }
    double s = 0.0;
    for (double t : terms) {
      if (t != kNegInf) s += std::exp(t - mx);
    }
    log_total += mx + std::log(s);
  }
  return std::exp(log_total);
}

BoundFamily bound_family_from_string(const std::string& name) {
  if (name == "standard_rate") return BoundFamily::StandardRate;
  if (name == "task_kl") return BoundFamily::TaskKl;
  if (name == "task_catoni_grid") return BoundFamily::TaskCatoniGrid;
  if (name == "sample_kl") return BoundFamily::SampleKl;
  if (name == "sample_catoni") return BoundFamily::SampleCatoni;
  if (name == "meta_task_kl") return BoundFamily::MetaTaskKl;
  if (name == "meta_sample_kl") return BoundFamily::MetaSampleKl;
  throw std::invalid_argument("unknown bound family: " + name);
}

std::string to_string(BoundFamily family) {
  switch (family) {
    case BoundFamily::StandardRate: return "standard_rate";
    case BoundFamily::TaskKl: return "task_kl";
    case BoundFamily::TaskCatoniGrid: return "task_catoni_grid";
    case BoundFamily::SampleKl: return "sample_kl";
    case BoundFamily::SampleCatoni: return "sample_catoni";
    case BoundFamily::MetaTaskKl: return "meta_task_kl";
    case BoundFamily::MetaSampleKl: return "meta_sample_kl";
  }
  return "unknown";
}

namespace {

bool is_meta(BoundFamily f) {
  return f == BoundFamily::MetaTaskKl || f == BoundFamily::MetaSampleKl;
}

void validate_coverage(const CoverageConfig& c) {
  if (c.n_tasks < 1) throw std::invalid_argument("CoverageConfig: n_tasks must be >= 1");
  if (!(c.delta > 0.0 && c.delta < 1.0)) {
    throw std::invalid_argument("CoverageConfig: delta must lie in (0,1)");
  }
  if (!(c.kl_budget >= 0.0)) {
    throw std::invalid_argument("CoverageConfig: kl_budget must be >= 0");
  }
  if (is_meta(c.family)) {
    if (c.env.empty()) throw std::invalid_argument("CoverageConfig: meta env is empty");
    std::int64_t max_m = 0;
    for (const auto& proto : c.env) {
      if (proto.sample_count < 1 || !(proto.risk >= 0.0 && proto.risk <= 1.0)) {
        throw std::invalid_argument("CoverageConfig: invalid env prototype");
      }
      max_m = std::max(max_m, proto.sample_count);
    }
    if (c.m_max < max_m) {
      throw std::invalid_argument("CoverageConfig: m_max below largest env size");
    }
  } else {
    if (c.m_lo < 1 || c.m_hi < c.m_lo) {
      throw std::invalid_argument("CoverageConfig: need 1 <= m_lo <= m_hi");
    }
    if (!(c.risk_param >= 0.0 && c.risk_param <= 1.0)) {
      throw std::invalid_argument("CoverageConfig: risk_param must lie in [0,1]");
    }
  }
}

// One synthetic trial: returns true when the computed bound undercuts the
// true target risk.
bool coverage_trial(const CoverageConfig& cfg, std::uint64_t seed, std::int64_t trial) {
  SplitRng rng(seed, static_cast<std::uint64_t>(trial));
  const int n = cfg.n_tasks;
  std::vector<TaskStat> stats(n);
  std::vector<double> true_risk(n);
  std::vector<std::int64_t> counts(n);

  for (int i = 0; i < n; ++i) {
    if (is_meta(cfg.family)) {
      const auto& proto = cfg.env[rng.uniform_int(0, static_cast<std::int64_t>(cfg.env.size()) - 1)];
      counts[i] = proto.sample_count;
      true_risk[i] = proto.risk;
    } else {
      counts[i] = rng.uniform_int(cfg.m_lo, cfg.m_hi);
      true_risk[i] = cfg.fixed_risk ? cfg.risk_param : rng.uniform() * cfg.risk_param;
    }
    std::int64_t hits = 0;
    for (std::int64_t j = 0; j < counts[i]; ++j) {
      hits += rng.bernoulli(true_risk[i]) ? 1 : 0;
    }
    stats[i].sample_count = counts[i];
    stats[i].empirical_risk = Prob(static_cast<double>(hits) / static_cast<double>(counts[i]));
  }

  const Ensemble e(std::move(stats));
  const ComplexityBudget b = ComplexityBudget::scalar(cfg.kl_budget, cfg.delta);

  double bound = 1.0;
  double target = 0.0;
  switch (cfg.family) {
    case BoundFamily::StandardRate: {
      bound = standard_rate_task_centric(e, b).value;
      for (double p : true_risk) target += p;
      target /= n;
      break;
    }
    case BoundFamily::TaskKl: {
      const SolveReport rep = maximize_single_constraint(
          build_task_kl_constraint(e, b), ObjectiveWeights::uniform(n));
      bound = std::min(1.0, rep.optimum);
      for (double p : true_risk) target += p;
      target /= n;
      break;
    }
    case BoundFamily::TaskCatoniGrid: {
      const LambdaGrid grid = LambdaGrid::exponential(n * e.harmonic_mean());
      const double share = cfg.delta / static_cast<double>(grid.values.size());
      bound = 1.0;
      for (double lambda : grid.values) {
        const std::vector<double> lambdas(n, lambda);
        const SolveReport rep = maximize_single_constraint(
            build_task_catoni_constraint(e, b, lambdas, share),
            ObjectiveWeights::uniform(n));
        bound = std::min(bound, std::min(1.0, rep.optimum));
      }
      for (double p : true_risk) target += p;
      target /= n;
      break;
    }
    case BoundFamily::SampleKl: {
      bound = sample_kl_bound(e, b).value;
      for (int i = 0; i < n; ++i) target += static_cast<double>(counts[i]) * true_risk[i];
      target /= static_cast<double>(e.total_samples());
      break;
    }
    case BoundFamily::SampleCatoni: {
      bound = sample_catoni_bound(e, b, static_cast<double>(e.total_samples())).value;
      for (int i = 0; i < n; ++i) target += static_cast<double>(counts[i]) * true_risk[i];
      target /= static_cast<double>(e.total_samples());
      break;
    }
    case BoundFamily::MetaTaskKl:
    case BoundFamily::MetaSampleKl: {
      MetaBudget mb;
      mb.n_tasks = n;
      mb.m_max = cfg.m_max;
      mb.meta_kl = 0.0;
      mb.expected_inner_kl = cfg.kl_budget;
      mb.delta = cfg.delta;
      if (cfg.family == BoundFamily::MetaTaskKl) {
        bound = meta_task_kl(e, mb).value;
        for (const auto& proto : cfg.env) target += proto.risk;
        target /= static_cast<double>(cfg.env.size());
      } else {
        bound = meta_sample_kl(e, mb).value;
        for (const auto& proto : cfg.env) {
          target += static_cast<double>(proto.sample_count) /
                    static_cast<double>(cfg.m_max) * proto.risk;
        }
        target /= static_cast<double>(cfg.env.size());
      }
      break;
    }
  }
  return bound < target;
}

template <bool Parallel>
CoverageReport coverage_impl(const CoverageConfig& cfg, std::int64_t trials,
                             std::uint64_t seed) {
  validate_coverage(cfg);
  if (trials < 1) throw std::invalid_argument("coverage_test: trials must be >= 1");
  std::int64_t violations = 0;
#pragma omp parallel for schedule(static) reduction(+ : violations) if (Parallel)
  for (std::int64_t t = 0; t < trials; ++t) {
    violations += coverage_trial(cfg, seed, t) ? 1 : 0;
  }
  CoverageReport rep;
  rep.trials = trials;
  rep.violations = violations;
  rep.violation_rate = static_cast<double>(violations) / static_cast<double>(trials);
  rep.binomial_ci_upper = binomial_upper_ci(violations, trials, 0.99);
  rep.seed = seed;
  return rep;
}

}  // namespace

CoverageReport coverage_test(const CoverageConfig& config, std::int64_t trials,
                             std::uint64_t seed) {
  return coverage_impl<true>(config, trials, seed);
}

CoverageReport coverage_test_serial(const CoverageConfig& config, std::int64_t trials,
                                    std::uint64_t seed) {
  return coverage_impl<false>(config, trials, seed);
}

double binomial_upper_ci(std::int64_t successes, std::int64_t trials, double confidence) {
  if (trials < 1) throw std::invalid_argument("binomial_upper_ci: trials must be >= 1");
  if (successes < 0 || successes > trials) {
    throw std::invalid_argument("binomial_upper_ci: successes out of range");
  }
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::invalid_argument("binomial_upper_ci: confidence must lie in (0,1)");
  }
  if (successes >= trials) return 1.0;

  const double log_alpha = std::log1p(-confidence);
  // log P(X <= successes | trials, p), decreasing in p.
  const auto log_cdf = [&](double p) {
    const double lp = std::log(p);
    const double l1p = std::log1p(-p);
    double mx = kNegInf;
    std::vector<double> terms(successes + 1);
    for (std::int64_t k = 0; k <= successes; ++k) {
      terms[k] = log_choose(trials, k) + k * lp + (trials - k) * l1p;
      mx = std::max(mx, terms[k]);
    }
    double s = 0.0;
    for (double t : terms) s += std::exp(t - mx);
    return mx + std::log(s);
  };

  double lo = static_cast<double>(successes) / static_cast<double>(trials);
  double hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (log_cdf(mid) > log_alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;
}

namespace {

// Grid values along one axis, anchored so the empirical point is on the
// grid (the zero-budget feasible set collapses to that point).
std::vector<double> axis_values(double anchor, double step) {
  std::vector<double> vals;
  const std::int64_t j_lo = -static_cast<std::int64_t>(std::floor(anchor / step));
  const std::int64_t j_hi = static_cast<std::int64_t>(std::floor((1.0 - anchor) / step));
  vals.reserve(j_hi - j_lo + 3);
  if (anchor + static_cast<double>(j_lo) * step > 1e-15) vals.push_back(0.0);
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    double v = anchor + static_cast<double>(j) * step;
    v = std::min(1.0, std::max(0.0, v));
    vals.push_back(v);
  }
  if (vals.back() < 1.0 - 1e-15) vals.push_back(1.0);
  return vals;
}

struct OracleBest {
  double value = -1.0;
  std::array<double, 3> point{0.0, 0.0, 0.0};
};

template <bool Parallel>
OracleBest scan_grid(const std::vector<RiskConstraint>& cs, const ObjectiveWeights& w,
                     const std::vector<std::vector<double>>& axes) {
  const int n = static_cast<int>(axes.size());
  const int K = static_cast<int>(cs.size());

  // Per-axis tables of each constraint's coordinate values; feasibility of a
  // grid point is then a handful of adds.
  std::vector<std::vector<std::vector<double>>> table(K);
  for (int k = 0; k < K; ++k) {
    table[k].resize(n);
    for (int i = 0; i < n; ++i) {
      table[k][i].resize(axes[i].size());
      for (std::size_t a = 0; a < axes[i].size(); ++a) {
        table[k][i][a] = cs[k].coord(i, axes[i][a]);
      }
    }
  }
  std::vector<double> rhs_tol(K);
  for (int k = 0; k < K; ++k) {
    rhs_tol[k] = cs[k].budget_rhs() + 1e-12 * std::max(1.0, std::fabs(cs[k].budget_rhs()));
  }

  const std::int64_t n0 = static_cast<std::int64_t>(axes[0].size());
  std::vector<OracleBest> best0(n0);

#pragma omp parallel for schedule(static) if (Parallel && n0 > 1)
  for (std::int64_t a0 = 0; a0 < n0; ++a0) {
    OracleBest local;
    const double w0 = w.weights[0] * axes[0][a0];
    if (n == 1) {
      bool ok = true;
      for (int k = 0; k < K; ++k) ok = ok && table[k][0][a0] <= rhs_tol[k];
      if (ok) {
        local.value = w0;
        local.point = {axes[0][a0], 0.0, 0.0};
      }
    } else if (n == 2) {
      for (std::size_t a1 = 0; a1 < axes[1].size(); ++a1) {
        bool ok = true;
        for (int k = 0; k < K && ok; ++k) {
          ok = table[k][0][a0] + table[k][1][a1] <= rhs_tol[k];
        }
        if (!ok) continue;
        const double v = w0 + w.weights[1] * axes[1][a1];
        if (v > local.value) {
          local.value = v;
          local.point = {axes[0][a0], axes[1][a1], 0.0};
        }
      }
    } else {
      for (std::size_t a1 = 0; a1 < axes[1].size(); ++a1) {
        std::array<double, 8> part;
        for (int k = 0; k < K; ++k) part[k] = table[k][0][a0] + table[k][1][a1];
        const double w01 = w0 + w.weights[1] * axes[1][a1];
        for (std::size_t a2 = 0; a2 < axes[2].size(); ++a2) {
          bool ok = true;
          for (int k = 0; k < K && ok; ++k) ok = part[k] + table[k][2][a2] <= rhs_tol[k];
          if (!ok) continue;
          const double v = w01 + w.weights[2] * axes[2][a2];
          if (v > local.value) {
            local.value = v;
            local.point = {axes[0][a0], axes[1][a1], axes[2][a2]};
          }
        }
      }
    }
    best0[a0] = local;
  }

  OracleBest best;
  for (std::int64_t a0 = 0; a0 < n0; ++a0) {
    if (best0[a0].value > best.value) best = best0[a0];
  }
  return best;
}

template <bool Parallel>
double grid_oracle_impl(const std::vector<RiskConstraint>& cs, const ObjectiveWeights& w,
                        double step) {
  if (cs.empty()) return 1.0;  // box-only feasibility, the top corner wins
  const int n = cs[0].dimension();
  if (n > 3) throw std::invalid_argument("grid_oracle: dimension must be <= 3");
  if (!(step > 0.0 && step <= 0.01)) {
    throw std::invalid_argument("grid_oracle: step must lie in (0, 0.01]");
  }
  for (const auto& c : cs) {
    if (c.dimension() != n) throw std::invalid_argument("grid_oracle: dimension mismatch");
  }
  if (static_cast<int>(w.weights.size()) != n) {
    throw std::invalid_argument("grid_oracle: weight dimension mismatch");
  }
  if (cs.size() > 8) throw std::invalid_argument("grid_oracle: too many constraints");

  // Coarse exhaustive pass on the empirically anchored grid.
  std::vector<std::vector<double>> axes(n);
  for (int i = 0; i < n; ++i) axes[i] = axis_values(cs[0].empirical_risks()[i], step);
  OracleBest best = scan_grid<Parallel>(cs, w, axes);
  if (best.value < 0.0) return -1.0;  // no feasible grid point

  // Local refinement around the incumbent, recentering at each level until
  // no improvement; the last level reaches the step/100 resolution.
  for (const double h : {step / 10.0, step / 100.0}) {
    const int radius = 15;
    for (int round = 0; round < 64; ++round) {
      std::vector<std::vector<double>> box(n);
      for (int i = 0; i < n; ++i) {
        box[i].reserve(2 * radius + 1);
        for (int j = -radius; j <= radius; ++j) {
          box[i].push_back(std::min(1.0, std::max(0.0, best.point[i] + j * h)));
        }
      }
      const OracleBest refined = scan_grid<false>(cs, w, box);
      if (refined.value > best.value) {
        best = refined;
      } else {
        break;
      }
    }
  }
  return best.value;
}

}  // namespace

double grid_oracle(const std::vector<RiskConstraint>& cs, const ObjectiveWeights& w,
                   double step) {
  return grid_oracle_impl<true>(cs, w, step);
}

double grid_oracle_serial(const std::vector<RiskConstraint>& cs, const ObjectiveWeights& w,
                          double step) {
  return grid_oracle_impl<false>(cs, w, step);
}

}  // namespace pacbound
