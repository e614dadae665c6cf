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

#include "mieflow/fit.hpp"

#include <algorithm>
#include <cmath>

namespace mieflow::fit {

LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> sigma) {
  const std::size_t n = x.size();
  if (y.size() != n || (!sigma.empty() && sigma.size() != n)) {
    throw InvalidArgument("fit_line: size mismatch");
  }
  if (n < 3) throw InvalidArgument("fit_line: need at least 3 points");
  std::vector<double> w(n, 1.0);
  bool weighted = !sigma.empty() && std::all_of(sigma.begin(), sigma.end(), [](double s) {
    return s > 0.0 && std::isfinite(s);
  });
  if (weighted) {
    for (std::size_t i = 0; i < n; ++i) w[i] = 1.0 / (sigma[i] * sigma[i]);
  }
  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  const double xm = sx / sw;
  const double ym = sy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (x[i] - xm) * (x[i] - xm);
    sxy += w[i] * (x[i] - xm) * (y[i] - ym);
    syy += w[i] * (y[i] - ym) * (y[i] - ym);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit_line: abscissas are degenerate");
  LineFit f;
  f.points = static_cast<int>(n);
  f.slope = sxy / sxx;
  f.intercept = ym - f.slope * xm;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    chi2 += w[i] * r * r;
  }
  const double reduced = chi2 / static_cast<double>(n - 2);
  const double scale = weighted ? std::max(1.0, reduced) : reduced;
  f.slope_stderr = std::sqrt(scale / sxx);
  f.intercept_stderr = std::sqrt(scale * (1.0 / sw + xm * xm / sxx));
  f.r_squared = syy > 0.0 ? 1.0 - chi2 / syy : 1.0;
  return f;
}

namespace {

LineFit fit_series(const estimate::SeriesResult& series, Window window, bool weighted,
                   bool log_x, bool log_y = true) {
  series.validate();
  std::vector<double> x, y, s;
  for (const auto& p : series.points) {
    if (!window.contains(p.abscissa)) continue;
    if ((log_y && !(p.value.mean > 0.0)) || (log_x && !(p.abscissa > 0.0))) {
      throw InvalidArgument("fit: nonpositive data in window");
    }
    x.push_back(log_x ? std::log(p.abscissa) : p.abscissa);
    y.push_back(log_y ? std::log(p.value.mean) : p.value.mean);
    s.push_back(log_y ? p.value.stderr_mean / p.value.mean : p.value.stderr_mean);
  }
  if (x.size() < 3) throw InvalidArgument("fit: fewer than 3 points in window");
  return fit_line(x, y, weighted ? std::span<const double>(s) : std::span<const double>());
}

double interpolate_log(const estimate::SeriesResult& s, double log_x) {
  const auto& p = s.points;
  std::size_t k = 1;
  while (k + 1 < p.size() && std::log(p[k].abscissa) < log_x) ++k;
  const double x0 = std::log(p[k - 1].abscissa);
  const double x1 = std::log(p[k].abscissa);
  const double y0 = std::log(p[k - 1].value.mean);
  const double y1 = std::log(p[k].value.mean);
  const double t = (log_x - x0) / (x1 - x0);
  return y0 + t * (y1 - y0);
}

}  // namespace

LineFit power_law_fit(const estimate::SeriesResult& series, Window window, bool weighted) {
  return fit_series(series, window, weighted, true);
}

LineFit exponential_fit(const estimate::SeriesResult& series, Window window, bool weighted) {
  return fit_series(series, window, weighted, false);
}

LineFit log_fit(const estimate::SeriesResult& series, Window window) {
  return fit_series(series, window, false, true, false);
}

void add_octave_counts(std::span<const int> values, std::vector<long long>& counts) {
  for (int v : values) {
    if (v < 1) throw InvalidArgument("add_octave_counts: values must be positive");
    std::size_t b = 0;
    while ((2LL << b) <= v) ++b;
    if (counts.size() <= b) counts.resize(b + 1, 0);
    ++counts[b];
  }
}

estimate::SeriesResult octave_density(std::span<const long long> counts, double normalization) {
  if (!(normalization > 0.0)) throw InvalidArgument("octave_density: normalization must be positive");
  estimate::SeriesResult out;
  for (std::size_t b = 0; b < counts.size(); ++b) {
    if (counts[b] == 0) continue;
    const double lo = std::ldexp(1.0, static_cast<int>(b));
    const double width = lo * normalization;
    estimate::EstimatorResult e;
    e.mean = static_cast<double>(counts[b]) / width;
    e.stderr_mean = std::sqrt(static_cast<double>(counts[b])) / width;
    e.n_samples = counts[b];
    out.points.push_back({lo * std::sqrt(2.0), e});
  }
  return out;
}

double data_collapse(std::span<const estimate::SeriesResult> series, int grid_points) {
  if (series.size() < 2) throw InvalidArgument("data_collapse: need at least 2 series");
  if (grid_points < 2) throw InvalidArgument("data_collapse: need at least 2 grid points");
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (const auto& s : series) {
    s.validate();
    if (s.points.size() < 2) throw InvalidArgument("data_collapse: series needs 2 points");
    for (const auto& p : s.points) {
      if (!(p.abscissa > 0.0) || !(p.value.mean > 0.0)) {
        throw InvalidArgument("data_collapse: nonpositive data");
      }
    }
    lo = std::max(lo, std::log(s.points.front().abscissa));
    hi = std::min(hi, std::log(s.points.back().abscissa));
  }
  if (!(lo < hi)) throw InvalidArgument("data_collapse: abscissa ranges do not overlap");
  double total = 0.0;
  int terms = 0;
  std::vector<double> values(series.size());
  for (int g = 0; g < grid_points; ++g) {
    const double lx = lo + (hi - lo) * g / (grid_points - 1);
    for (std::size_t i = 0; i < series.size(); ++i) values[i] = interpolate_log(series[i], lx);
    for (std::size_t i = 0; i < series.size(); ++i) {
      for (std::size_t j = i + 1; j < series.size(); ++j) {
        total += (values[i] - values[j]) * (values[i] - values[j]);
        ++terms;
      }
    }
  }
  return total / terms;
}

}  // namespace mieflow::fit
