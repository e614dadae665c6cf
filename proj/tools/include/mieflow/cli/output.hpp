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

// CSV series, key-value manifests and minimal SVG plots.

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mieflow/estimator.hpp"
#include "mieflow/fit.hpp"

namespace mieflow::cli {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

enum class FitKind { none, power, exponential, log };

FitKind parse_fit_kind(const std::string& name);
const char* fit_kind_name(FitKind kind);

struct FitSummary {
  FitKind kind = FitKind::none;
  fit::Window window;
  fit::LineFit line;
};

struct SeriesOutput {
  std::string name;
  std::string x_label;
  std::string y_label;
  estimate::SeriesResult series;
  std::optional<FitSummary> fit;
  KeyValues provenance;
};

struct RunResult {
  std::vector<SeriesOutput> series;
  KeyValues summary;
};

/// Shortest decimal form that parses back to the same double, at most 17
/// significant digits.
std::string format_double(double x);

/// Header `abscissa,mean,stderr,n_samples`, LF line endings.
std::string to_csv(const estimate::SeriesResult& series);
estimate::SeriesResult parse_csv(const std::string& text);

std::string to_svg(const SeriesOutput& output);

/// Applies the fit to the series; nullopt for FitKind::none.
std::optional<FitSummary> apply_fit(const estimate::SeriesResult& series, FitKind kind,
                                    fit::Window window);

/// `key = value` lines.
std::string to_manifest(const KeyValues& entries);

}  // namespace mieflow::cli
