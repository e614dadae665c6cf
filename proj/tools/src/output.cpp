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

#include "mieflow/cli/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace mieflow::cli {

FitKind parse_fit_kind(const std::string& name) {
  if (name == "none") return FitKind::none;
  if (name == "power") return FitKind::power;
  if (name == "exponential") return FitKind::exponential;
  if (name == "log") return FitKind::log;
  throw InvalidArgument("unknown fit kind '" + name + "' (none, power, exponential, log)");
}

const char* fit_kind_name(FitKind kind) {
  switch (kind) {
    case FitKind::none:
      return "none";
    case FitKind::power:
      return "power";
    case FitKind::exponential:
      return "exponential";
    case FitKind::log:
      return "log";
  }
  return "none";
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw NumericalError("format_double failed");
  return {buf, ptr};
}

std::string to_csv(const estimate::SeriesResult& series) {
  std::string out = "abscissa,mean,stderr,n_samples\n";
  for (const auto& p : series.points) {
    out += format_double(p.abscissa) + "," + format_double(p.value.mean) + "," +
           format_double(p.value.stderr_mean) + "," + std::to_string(p.value.n_samples) + "\n";
  }
  return out;
}

estimate::SeriesResult parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "abscissa,mean,stderr,n_samples") {
    throw InvalidArgument("parse_csv: bad header");
  }
  estimate::SeriesResult out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double v[3];
    long long n = 0;
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (double& x : v) {
      const auto r = std::from_chars(p, end, x);
      if (r.ec != std::errc() || r.ptr == end || *r.ptr != ',') throw InvalidArgument("parse_csv: bad row");
      p = r.ptr + 1;
    }
    const auto r = std::from_chars(p, end, n);
    if (r.ec != std::errc() || r.ptr != end) throw InvalidArgument("parse_csv: bad row");
    estimate::EstimatorResult e;
    e.mean = v[1];
    e.stderr_mean = v[2];
    e.n_samples = n;
    out.points.push_back({v[0], e});
  }
  out.validate();
  return out;
}

std::optional<FitSummary> apply_fit(const estimate::SeriesResult& series, FitKind kind,
                                    fit::Window window) {
  FitSummary s;
  s.kind = kind;
  s.window = window;
  switch (kind) {
    case FitKind::none:
      return std::nullopt;
    case FitKind::power:
      s.line = fit::power_law_fit(series, window);
      break;
    case FitKind::exponential:
      s.line = fit::exponential_fit(series, window);
      break;
    case FitKind::log:
      s.line = fit::log_fit(series, window);
      break;
  }
  return s;
}

std::string to_manifest(const KeyValues& entries) {
  std::string out;
  for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
  return out;
}

namespace {

std::string escape_xml(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '&':
        out += "&amp;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

}  // namespace

std::string to_svg(const SeriesOutput& output) {
  const auto& pts = output.series.points;
  const bool log_x = !output.fit || output.fit->kind != FitKind::exponential;
  bool log_y = output.fit ? output.fit->kind != FitKind::log : true;
  for (const auto& p : pts) {
    if (!(p.value.mean > 0.0)) log_y = false;
  }
  bool lx = log_x;
  for (const auto& p : pts) {
    if (!(p.abscissa > 0.0)) lx = false;
  }
  auto tx = [&](double x) { return lx ? std::log10(x) : x; };
  auto ty = [&](double y) { return log_y ? std::log10(y) : y; };
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (!pts.empty()) {
    x0 = x1 = tx(pts.front().abscissa);
    y0 = y1 = ty(pts.front().value.mean);
    for (const auto& p : pts) {
      x0 = std::min(x0, tx(p.abscissa));
      x1 = std::max(x1, tx(p.abscissa));
      y0 = std::min(y0, ty(p.value.mean));
      y1 = std::max(y1, ty(p.value.mean));
    }
  }
  if (x1 - x0 < 1e-12) x1 = x0 + 1;
  if (y1 - y0 < 1e-12) y1 = y0 + 1;
  const double w = 480, h = 360, margin = 50;
  auto sx = [&](double x) { return margin + (x - x0) / (x1 - x0) * (w - 2 * margin); };
  auto sy = [&](double y) { return h - margin - (y - y0) / (y1 - y0) * (h - 2 * margin); };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<line x1=\"" << margin << "\" y1=\"" << h - margin << "\" x2=\"" << w - margin << "\" y2=\""
    << h - margin << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << h - margin
    << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">"
    << escape_xml((lx ? "log10 " : "") + output.x_label) << "</text>\n";
  s << "<text x=\"15\" y=\"" << h / 2 << "\" transform=\"rotate(-90 15 " << h / 2
    << ")\" text-anchor=\"middle\">" << escape_xml((log_y ? "log10 " : "") + output.y_label)
    << "</text>\n";
  s << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\">" << escape_xml(output.name)
    << "</text>\n";
  for (const auto& p : pts) {
    s << "<circle cx=\"" << sx(tx(p.abscissa)) << "\" cy=\"" << sy(ty(p.value.mean))
      << "\" r=\"3\" fill=\"steelblue\"/>\n";
  }
  if (output.fit && lx == log_x && log_y == (output.fit->kind != FitKind::log)) {
    const auto& f = output.fit->line;
    const double lo = std::max(x0, tx(std::max(output.fit->window.lo, pts.front().abscissa)));
    const double hi = std::min(x1, tx(std::min(output.fit->window.hi, pts.back().abscissa)));
    // Fits are in natural logs; the axes are log10.
    auto model = [&](double xt) {
      const double x = lx ? std::pow(10.0, xt) : xt;
      const double u = lx ? std::log(x) : x;
      const double y = f.intercept + f.slope * u;
      return output.fit->kind == FitKind::log ? y : (log_y ? y / std::log(10.0) : std::exp(y));
    };
    s << "<line x1=\"" << sx(lo) << "\" y1=\"" << sy(model(lo)) << "\" x2=\"" << sx(hi) << "\" y2=\""
      << sy(model(hi)) << "\" stroke=\"firebrick\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace mieflow::cli
