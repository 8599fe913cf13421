#include "meetwalk/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "meetwalk/error.hpp"
#include "meetwalk/philox.hpp"

namespace meetwalk {
namespace {

constexpr double kCensored = std::numeric_limits<double>::quiet_NaN();
constexpr double kDefaultJumps = 1e6;

// Row-wise cumulative weights of a sparse matrix, skipping the diagonal when
// asked (generators).
struct Sampler {
  std::vector<int> offsets;
  std::vector<int> targets;
  std::vector<double> cumulative;

  Sampler(const SparseRowMatrix& m, bool skip_diagonal) {
    offsets.push_back(0);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      double running = 0.0;
      for (SparseRowMatrix::InnerIterator it(m, r); it; ++it) {
        if (it.value() <= 0.0 || (skip_diagonal && it.col() == r)) continue;
        running += it.value();
        targets.push_back(static_cast<int>(it.col()));
        cumulative.push_back(running);
      }
      offsets.push_back(static_cast<int>(targets.size()));
    }
  }

  double row_total(int row) const {
    const int end = offsets[static_cast<std::size_t>(row) + 1];
    return end == offsets[static_cast<std::size_t>(row)] ? 0.0 : cumulative[static_cast<std::size_t>(end) - 1];
  }

  int draw(int row, double u) const {
    const auto first = cumulative.begin() + offsets[static_cast<std::size_t>(row)];
    const auto last = cumulative.begin() + offsets[static_cast<std::size_t>(row) + 1];
    auto it = std::upper_bound(first, last, u * row_total(row));
    if (it == last) --it;
    return targets[static_cast<std::size_t>(it - cumulative.begin())];
  }
};

template <class Matrix>
int check_inputs(std::span<const Matrix> pursuers, std::span<const Matrix> evaders, std::span<const int> start,
                 const SimulationOptions& options) {
  if (pursuers.empty() || evaders.empty()) throw ValidationError("need at least one pursuer and one evader");
  const int n = pursuers.front().size();
  for (const auto& group : {pursuers, evaders}) {
    for (const Matrix& m : group) {
      if (m.size() != n) throw ValidationError("all chains must have the same number of nodes");
    }
  }
  if (start.size() != pursuers.size() + evaders.size()) {
    throw ValidationError("start tuple has " + std::to_string(start.size()) + " labels, expected " +
                          std::to_string(pursuers.size() + evaders.size()));
  }
  for (int label : start) {
    if (label < 0 || label >= n) throw ValidationError("start label out of range");
  }
  if (options.trials < 1) throw ValidationError("need at least one trial");
  if (options.horizon && !(*options.horizon > 0.0)) throw ValidationError("horizon must be positive");
  return n;
}

bool meets(const std::vector<int>& labels, std::size_t pursuers) {
  for (std::size_t a = 0; a < pursuers; ++a) {
    for (std::size_t b = pursuers; b < labels.size(); ++b) {
      if (labels[a] == labels[b]) return true;
    }
  }
  return false;
}

double pairwise_sum(const double* x, std::size_t count) {
  if (count <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < count; ++i) s += x[i];
    return s;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(x, half) + pairwise_sum(x + half, count - half);
}

template <class Trial>
SimulationEstimate run_trials(const SimulationOptions& options, double horizon, Trial&& trial) {
  std::vector<double> outcome(options.trials);
  unsigned threads = options.threads != 0 ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, options.trials));
  auto work = [&](unsigned worker) {
    for (std::uint64_t t = worker; t < options.trials; t += threads) {
      PhiloxStream rng(options.seed, t);
      outcome[t] = trial(rng);
    }
  };
  if (threads <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  std::vector<double> done;
  done.reserve(outcome.size());
  for (double v : outcome) {
    if (!std::isnan(v)) done.push_back(v);
  }
  SimulationEstimate est;
  est.trials = options.trials;
  est.censored = options.trials - done.size();
  est.horizon = horizon;
  if (done.empty()) return est;
  const double mean = pairwise_sum(done.data(), done.size()) / static_cast<double>(done.size());
  est.mean = mean;
  if (done.size() > 1) {
    for (double& v : done) v = (v - mean) * (v - mean);
    const double var = pairwise_sum(done.data(), done.size()) / static_cast<double>(done.size() - 1);
    est.std_error = std::sqrt(var / static_cast<double>(done.size()));
  }
  return est;
}

}  // namespace

SimulationEstimate simulate_dtmc(std::span<const TransitionMatrix> pursuers, std::span<const TransitionMatrix> evaders,
                                 std::span<const int> start, const SimulationOptions& options) {
  check_inputs(pursuers, evaders, start, options);
  std::vector<Sampler> samplers;
  for (const auto& group : {pursuers, evaders}) {
    for (const TransitionMatrix& p : group) samplers.emplace_back(p.entries(), false);
  }
  const double horizon = std::floor(options.horizon.value_or(kDefaultJumps));
  const auto steps = static_cast<std::uint64_t>(std::max(horizon, 1.0));
  const std::vector<int> origin(start.begin(), start.end());
  return run_trials(options, static_cast<double>(steps), [&](PhiloxStream& rng) {
    std::vector<int> labels = origin;
    for (std::uint64_t t = 1; t <= steps; ++t) {
      for (std::size_t k = 0; k < labels.size(); ++k) labels[k] = samplers[k].draw(labels[k], rng.uniform());
      if (meets(labels, pursuers.size())) return static_cast<double>(t);
    }
    return kCensored;
  });
}

SimulationEstimate simulate_ctmc(std::span<const RateMatrix> pursuers, std::span<const RateMatrix> evaders,
                                 std::span<const int> start, const SimulationOptions& options) {
  const int n = check_inputs(pursuers, evaders, start, options);
  std::vector<Sampler> samplers;
  double fastest = 0.0;
  for (const auto& group : {pursuers, evaders}) {
    for (const RateMatrix& q : group) {
      samplers.emplace_back(q.entries(), true);
      double top = 0.0;
      for (int i = 0; i < n; ++i) top = std::max(top, samplers.back().row_total(i));
      fastest += top;
    }
  }
  const double horizon = options.horizon.value_or(fastest > 0.0 ? kDefaultJumps / fastest : kDefaultJumps);
  const std::vector<int> origin(start.begin(), start.end());
  return run_trials(options, horizon, [&](PhiloxStream& rng) {
    std::vector<int> labels = origin;
    std::vector<double> rates(labels.size());
    double now = 0.0;
    while (!meets(labels, pursuers.size())) {
      double total = 0.0;
      for (std::size_t k = 0; k < labels.size(); ++k) {
        rates[k] = samplers[k].row_total(labels[k]);
        total += rates[k];
      }
      if (total <= 0.0) return kCensored;
      now += -std::log1p(-rng.uniform()) / total;
      if (now > horizon) return kCensored;
      double pick = rng.uniform() * total;
      std::size_t chosen = 0;
      for (std::size_t k = 0; k < labels.size(); ++k) {
        if (rates[k] <= 0.0) continue;
        chosen = k;
        if (pick < rates[k]) break;
        pick -= rates[k];
      }
      labels[chosen] = samplers[chosen].draw(labels[chosen], rng.uniform());
    }
    return now;
  });
}

}  // namespace meetwalk
