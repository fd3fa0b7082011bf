#include "collapse/ensemble.hpp"

#include "collapse/error.hpp"
#include "collapse/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace collapse {

void EnsembleAccumulator::add(std::size_t index, TrajectoryRecord record) {
  if (!records_.emplace(index, std::move(record)).second) {
    throw CollapseError(ErrorKind::invalid_argument, "duplicate trajectory index " + std::to_string(index));
  }
}

void EnsembleAccumulator::add(std::size_t index, const TrajectoryResult& result, std::uint64_t seed) {
  TrajectoryRecord rec;
  rec.seed = seed;
  rec.series = result.observables_series;
  rec.jumps = result.jumps;
  rec.outcome = result.outcome;
  rec.absorbed = result.absorbed;
  rec.final_time = result.final_time;
  rec.norm = result.norm;
  add(index, std::move(rec));
}

void EnsembleAccumulator::merge(const EnsembleAccumulator& other) {
  for (const auto& [index, rec] : other.records_) add(index, rec);
}

std::vector<int> EnsembleAccumulator::outcomes() const {
  std::vector<int> out;
  for (const auto& [index, rec] : records_) {
    if (rec.outcome) out.push_back(*rec.outcome);
  }
  return out;
}

std::vector<double> EnsembleAccumulator::total_jump_counts() const {
  std::vector<double> out;
  out.reserve(records_.size());
  for (const auto& [index, rec] : records_) out.push_back(static_cast<double>(rec.jumps.size()));
  return out;
}

namespace {
double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}
}  // namespace

EnsembleSummary EnsembleAccumulator::summarize() const {
  EnsembleSummary s;
  s.n_trajectories = records_.size();
  if (records_.empty()) return s;

  std::size_t n_samples = records_.begin()->second.series.size();
  for (const auto& [index, rec] : records_) n_samples = std::min(n_samples, rec.series.size());
  for (std::size_t k = 0; k < n_samples; ++k) s.sample_times.push_back(records_.begin()->second.series[k].time);

  const double n = static_cast<double>(records_.size());
  std::vector<double> right(records_.size());
  std::vector<double> var_x(records_.size());
  std::vector<double> lr_re(records_.size());
  std::vector<double> lr_im(records_.size());
  for (std::size_t k = 0; k < n_samples; ++k) {
    TwoLobeDensityMatrix mean_rho;
    double jumps = 0.0;
    std::size_t t = 0;
    for (const auto& [index, rec] : records_) {
      const auto& sample = rec.series[k];
      right[t] = sample.right_mass;
      var_x[t] = sample.var_x;
      lr_re[t] = sample.rho.lr.real();
      lr_im[t] = sample.rho.lr.imag();
      mean_rho += sample.rho;
      jumps += static_cast<double>(sample.jump_count);
      ++t;
    }
    mean_rho *= 1.0 / n;
    const auto right_stats = mean_and_stderr(right);
    const auto re_stats = mean_and_stderr(lr_re);
    const auto im_stats = mean_and_stderr(lr_im);
    s.mean_lobe_mass.push_back(right_stats.mean);
    s.mean_lobe_mass_stderr.push_back(right_stats.std_error);
    s.coherence_series.push_back(std::abs(mean_rho.lr));
    s.coherence_stderr.push_back(std::hypot(re_stats.std_error, im_stats.std_error));
    s.mean_rho.push_back(mean_rho);
    s.var_x_median_series.push_back(median(var_x));
    s.mean_jump_count.push_back(jumps / n);
  }

  const auto labels = outcomes();
  if (!labels.empty()) {
    const auto right_count = static_cast<double>(std::count(labels.begin(), labels.end(), kRightLobe));
    const double total = static_cast<double>(labels.size());
    s.outcome_frequencies = {(total - right_count) / total, right_count / total};
  }
  return s;
}

EnsembleAccumulator run_ensemble(std::size_t n_trajectories, std::size_t workers, std::uint64_t master_seed,
                                 const TrajectoryFn& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, std::max<std::size_t>(1, n_trajectories)));
  std::vector<EnsembleAccumulator> partial(workers);
  std::mutex error_mutex;
  std::exception_ptr first_error;
  std::size_t failed_index = 0;

  auto work = [&](std::size_t w) {
    for (std::size_t k = w; k < n_trajectories; k += workers) {
      try {
        const auto seed = derive_trajectory_seed(master_seed, k);
        RandomStream rng(seed);
        partial[w].add(k, fn(k, rng), seed);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!first_error || k < failed_index) {
          first_error = std::current_exception();
          failed_index = k;
        }
        return;
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& th : threads) th.join();
  }
  if (first_error) {
    try {
      std::rethrow_exception(first_error);
    } catch (const CollapseError& e) {
      throw CollapseError(e.kind(), "trajectory " + std::to_string(failed_index) + ": " + e.detail());
    }
  }
  EnsembleAccumulator all;
  for (const auto& p : partial) all.merge(p);
  return all;
}

DecayFit coherence_decay_fit(const EnsembleSummary& summary) {
  std::vector<double> t;
  std::vector<double> log_c;
  for (std::size_t k = 0; k < summary.coherence_series.size(); ++k) {
    const double c = summary.coherence_series[k];
    const double se = k < summary.coherence_stderr.size() ? summary.coherence_stderr[k] : 0.0;
    if (c > 10.0 * se && c > 0.0) {
      t.push_back(summary.sample_times[k]);
      log_c.push_back(std::log(c));
    }
  }
  if (t.size() < 5) {
    throw CollapseError(ErrorKind::insufficient_signal,
                        "only " + std::to_string(t.size()) + " sample times carry coherence above 10 standard errors");
  }
  const auto line = fit_line(t, log_c);
  return DecayFit{-line.slope, line.r_squared, t.size()};
}

}  // namespace collapse
