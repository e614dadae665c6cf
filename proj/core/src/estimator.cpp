// Copyright 2026 The mieflow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mieflow/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace mieflow::estimate {

EstimatorResult summarize(std::vector<double> samples, bool keep_samples) {
  EstimatorResult r;
  const auto n = static_cast<std::int64_t>(samples.size());
  if (n < 1) throw InvalidArgument("summarize: need at least one sample");
  r.n_samples = n;
  const double sum = pairwise_sum(samples);
  r.mean = sum / static_cast<double>(n);
  if (n > 1) {
    std::vector<double> dev(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) dev[i] = (samples[i] - r.mean) * (samples[i] - r.mean);
    const double var = pairwise_sum(dev) / static_cast<double>(n - 1);
    r.stderr_mean = std::sqrt(var / static_cast<double>(n));
    // Leave-one-out means.
    const double nd = static_cast<double>(n);
    std::vector<double> jk(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const double loo = (sum - samples[i]) / (nd - 1.0);
      jk[i] = (loo - r.mean) * (loo - r.mean);
    }
    r.jackknife_stderr = std::sqrt((nd - 1.0) / nd * pairwise_sum(jk));
  }
  if (keep_samples) r.samples = std::move(samples);
  return r;
}

void SeriesResult::add(double abscissa, EstimatorResult value) {
  auto it = std::lower_bound(points.begin(), points.end(), abscissa,
                             [](const SeriesPoint& p, double x) { return p.abscissa < x; });
  if (it != points.end() && it->abscissa == abscissa) {
    throw InvalidArgument("series abscissas must be distinct");
  }
  points.insert(it, SeriesPoint{abscissa, std::move(value)});
}

void SeriesResult::validate() const {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i - 1].abscissa < points[i].abscissa)) {
      throw InvalidArgument("series abscissas must be strictly increasing");
    }
  }
}

int default_threads() {
  if (const char* env = std::getenv("MIEFLOW_THREADS")) {
    const int t = std::atoi(env);
    if (t > 0) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& body) {
  if (n <= 0) return;
  threads = static_cast<int>(std::clamp<std::int64_t>(threads, 1, n));
  if (threads == 1) {
    for (std::int64_t t = 0; t < n; ++t) body(t);
    return;
  }
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < threads; ++w) {
    const std::int64_t lo = n * w / threads;
    const std::int64_t hi = n * (w + 1) / threads;
    pool.emplace_back([&, lo, hi]() {
      try {
        for (std::int64_t t = lo; t < hi; ++t) body(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace {

void check_options(const SamplingOptions& o) {
  if (o.n_samples < 1) throw InvalidArgument("n_samples must be at least 1");
  if (o.threads < 1) throw InvalidArgument("threads must be at least 1");
}

}  // namespace

EstimatorResult monte_carlo_mie(const gaussian::GaussianState& state, const RegionSpec& regions,
                                const SamplingOptions& options) {
  check_options(options);
  regions.validate(state.num_modes());
  if (regions.m.empty()) throw InvalidArgument("monte_carlo_mie: M must be nonempty");
  const gaussian::TrajectorySampler sampler(state, regions.m, regions.a);
  std::vector<double> values(static_cast<std::size_t>(options.n_samples));
  parallel_for(options.n_samples, options.threads, [&](std::int64_t t) {
    RngStream rng(options.seed, static_cast<std::uint64_t>(t));
    const auto s = sampler.sample(rng);
    values[static_cast<std::size_t>(t)] = gaussian::entropy_of_correlation(s.kept_corr);
  });
  return summarize(std::move(values), options.keep_samples);
}

EstimatorResult mii(const gaussian::GaussianState& state, const RegionSpec& regions,
                    const EstimatorResult& mie) {
  regions.validate(state.num_modes());
  if (regions.m.empty()) throw InvalidArgument("mii: M must be nonempty");
  const double pre = gaussian::mutual_information(state, regions.a, regions.b);
  EstimatorResult r;
  r.mean = 2.0 * mie.mean - pre;
  r.stderr_mean = 2.0 * mie.stderr_mean;
  r.jackknife_stderr = 2.0 * mie.jackknife_stderr;
  r.n_samples = mie.n_samples;
  for (double v : mie.samples) r.samples.push_back(2.0 * v - pre);
  return r;
}

EstimatorResult traced_mii(const gaussian::GaussianState& state, const RegionSpec& regions,
                           const SamplingOptions& options) {
  check_options(options);
  regions.validate(state.num_modes());
  if (regions.a0.empty() || regions.b0.empty()) {
    throw InvalidArgument("traced_mii: A0 and B0 must be nonempty");
  }
  const SiteSet a0 = normalized_sites(regions.a0, state.num_modes(), "A0");
  const SiteSet b0 = normalized_sites(regions.b0, state.num_modes(), "B0");
  const double pre = gaussian::mutual_information(state, a0, b0);
  SiteSet kept = a0;
  kept.insert(kept.end(), b0.begin(), b0.end());
  const auto na = static_cast<Eigen::Index>(a0.size());
  const auto nb = static_cast<Eigen::Index>(b0.size());
  std::vector<double> values(static_cast<std::size_t>(options.n_samples));
  auto post_info = [&](const Eigen::MatrixXcd& c) {
    return gaussian::entropy_of_correlation(c.topLeftCorner(na, na)) +
           gaussian::entropy_of_correlation(c.bottomRightCorner(nb, nb)) -
           gaussian::entropy_of_correlation(c);
  };
  if (regions.m.empty()) {
    std::fill(values.begin(), values.end(), 0.0);
  } else {
    const gaussian::TrajectorySampler sampler(state, regions.m, kept);
    parallel_for(options.n_samples, options.threads, [&](std::int64_t t) {
      RngStream rng(options.seed, static_cast<std::uint64_t>(t));
      values[static_cast<std::size_t>(t)] = post_info(sampler.sample(rng).kept_corr) - pre;
    });
  }
  return summarize(std::move(values), options.keep_samples);
}

ScaledMie scaled_mie_from(const std::function<EstimatorResult(int halvings)>& evaluate) {
  ScaledMie out;
  out.full = evaluate(0);
  out.half = evaluate(1);
  out.value.mean = 2.0 * out.half.mean - out.full.mean;
  out.value.stderr_mean = std::hypot(2.0 * out.half.stderr_mean, out.full.stderr_mean);
  out.value.jackknife_stderr = std::hypot(2.0 * out.half.jackknife_stderr, out.full.jackknife_stderr);
  out.value.n_samples = std::min(out.full.n_samples, out.half.n_samples);
  return out;
}

ScaledMie scaled_mie(const std::function<Instance(int halvings)>& factory,
                     const SamplingOptions& options) {
  return scaled_mie_from([&](int halvings) {
    const Instance inst = factory(halvings);
    return monte_carlo_mie(inst.state, inst.regions, options);
  });
}

}  // namespace mieflow::estimate
