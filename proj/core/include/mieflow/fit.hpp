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

// Line fits on transformed series and a finite-size collapse score.

#pragma once

#include <limits>
#include <span>
#include <vector>

#include "mieflow/estimator.hpp"

namespace mieflow::fit {

/// Inclusive abscissa bounds.
struct Window {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool contains(double x) const { return lo <= x && x <= hi; }
};

struct LineFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept = 0.0;
  double intercept_stderr = 0.0;
  double r_squared = 0.0;
  int points = 0;
};

/// Least squares y = intercept + slope * x. With sigma nonempty the weights
/// are 1/sigma^2 and the errors are scaled by max(1, reduced chi^2); a
/// nonpositive sigma anywhere falls back to the unweighted fit.
LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> sigma = {});

/// Slope of log(mean) against log(abscissa). Weighted by stderr / mean
/// when `weighted`.
LineFit power_law_fit(const estimate::SeriesResult& series, Window window, bool weighted = true);

/// Slope of log(mean) against abscissa; the decay length is -1 / slope.
LineFit exponential_fit(const estimate::SeriesResult& series, Window window, bool weighted = true);

/// Slope of mean against log(abscissa), for y = c log x + b.
LineFit log_fit(const estimate::SeriesResult& series, Window window);

/// Adds positive integer values to octave bins [2^b, 2^(b+1)).
void add_octave_counts(std::span<const int> values, std::vector<long long>& counts);

/// Octave histogram as a density per unit value and per `normalization`
/// (for example the number of configurations). Abscissas are geometric bin
/// centres; empty bins are skipped; stderr is the Poisson error.
estimate::SeriesResult octave_density(std::span<const long long> counts, double normalization);

/// Mean over a log-uniform grid of `grid_points` abscissas in the common
/// range, and over all pairs of series, of the squared difference of
/// log(mean), each series interpolated linearly in log-log.
double data_collapse(std::span<const estimate::SeriesResult> series, int grid_points = 32);

}  // namespace mieflow::fit
