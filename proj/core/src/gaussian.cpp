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

#include "mieflow/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

namespace mieflow::gaussian {

namespace {

constexpr int kPanel = 48;

struct Draw {
  int outcome;
  double probability;
};

Draw choose(double caa, const int* forced, double uniform) {
  const double p1 = std::clamp(caa, 0.0, 1.0);
  int n;
  if (forced != nullptr) {
    n = *forced;
    if (n != 0 && n != 1) throw InvalidArgument("occupation outcome must be 0 or 1");
    const double p = n ? p1 : 1.0 - p1;
    if (p < kForcedFloor) throw NumericalError("forced outcome has zero probability");
    return {n, p};
  }
  if (p1 < kDeterministicGuard) {
    n = 0;
  } else if (p1 > 1.0 - kDeterministicGuard) {
    n = 1;
  } else {
    n = uniform < p1 ? 1 : 0;
  }
  return {n, n ? p1 : 1.0 - p1};
}

double real_part(double x) { return x; }
double real_part(const cplx& x) { return x.real(); }

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Pivoted elimination of the first m rows/columns of a Hermitian matrix,
// working on the lower triangle. Pivot columns of one panel are collected in
// u and applied to the trailing block in a single rank-k update.
template <class Scalar>
void eliminate(Mat<Scalar>& w, int m, const int* forced, RngStream* rng,
               std::vector<int>& outcomes, double& log_probability) {
  const int n = static_cast<int>(w.rows());
  Mat<Scalar> u(n, kPanel);
  Eigen::VectorXd dinv(kPanel);
  outcomes.assign(static_cast<std::size_t>(m), 0);
  log_probability = 0.0;
  for (int k0 = 0; k0 < m; k0 += kPanel) {
    const int kb = std::min(kPanel, m - k0);
    for (int j = 0; j < kb; ++j) {
      const int a = k0 + j;
      const int len = n - a;
      if (j > 0) {
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> coeff =
            dinv.head(j).cast<Scalar>().asDiagonal() * u.row(a).head(j).adjoint();
        w.col(a).tail(len).noalias() -= u.block(a, 0, len, j) * coeff;
      }
      const double uniform = rng != nullptr ? rng->uniform() : 0.0;
      const Draw d = choose(real_part(w(a, a)), forced != nullptr ? forced + a : nullptr, uniform);
      outcomes[static_cast<std::size_t>(a)] = d.outcome;
      log_probability += std::log(d.probability);
      u.col(j).head(a).setZero();
      u.col(j).tail(len) = w.col(a).tail(len);
      dinv(j) = 1.0 / (real_part(w(a, a)) - 1.0 + d.outcome);
    }
    const int t0 = k0 + kb;
    const int nt = n - t0;
    if (nt > 0) {
      Mat<Scalar> scaled = u.bottomRows(nt).leftCols(kb) * dinv.head(kb).cast<Scalar>().asDiagonal();
      w.bottomRightCorner(nt, nt).template triangularView<Eigen::Lower>() -=
          scaled * u.bottomRows(nt).leftCols(kb).adjoint();
    }
  }
}

template <class Scalar>
Eigen::MatrixXcd kept_block(const Mat<Scalar>& w, int m) {
  const int k = static_cast<int>(w.rows()) - m;
  Eigen::MatrixXcd out(k, k);
  for (int j = 0; j < k; ++j) {
    for (int i = j; i < k; ++i) {
      const cplx v = cplx(w(m + i, m + j));
      out(i, j) = v;
      out(j, i) = std::conj(v);
    }
    out(j, j) = cplx(real_part(w(m + j, m + j)), 0.0);
  }
  return out;
}

Eigen::MatrixXcd restrict(const Eigen::MatrixXcd& c, std::span<const int> sites) {
  const auto r = static_cast<Eigen::Index>(sites.size());
  Eigen::MatrixXcd out(r, r);
  for (Eigen::Index j = 0; j < r; ++j) {
    for (Eigen::Index i = 0; i < r; ++i) out(i, j) = c(sites[i], sites[j]);
  }
  return out;
}

}  // namespace

GaussianState::GaussianState(Eigen::MatrixXcd corr) : corr_(std::move(corr)) {
  if (corr_.rows() != corr_.cols()) throw InvalidArgument("correlation matrix must be square");
  const double scale = std::max(1.0, corr_.cwiseAbs().maxCoeff());
  if (hermiticity_error() > 1e-10 * scale) {
    throw InvalidArgument("correlation matrix is not Hermitian");
  }
  for (Eigen::Index i = 0; i < corr_.rows(); ++i) {
    const double d = corr_(i, i).real();
    if (d < -1e-9 || d > 1.0 + 1e-9) {
      throw InvalidArgument("correlation matrix diagonal outside [0, 1]");
    }
  }
}

GaussianState GaussianState::from_orbitals(const Eigen::MatrixXcd& orbitals) {
  Eigen::MatrixXcd c = orbitals.conjugate() * orbitals.transpose();
  return GaussianState(0.5 * (c + c.adjoint()), Unchecked{});
}

GaussianState GaussianState::from_occupations(std::span<const int> occupations) {
  const auto n = static_cast<Eigen::Index>(occupations.size());
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (occupations[i] != 0 && occupations[i] != 1) {
      throw InvalidArgument("occupations must be 0 or 1");
    }
    c(i, i) = occupations[i];
  }
  return GaussianState(std::move(c), Unchecked{});
}

double GaussianState::projector_error() const {
  if (corr_.size() == 0) return 0.0;
  return (corr_ * corr_ - corr_).cwiseAbs().maxCoeff();
}

double GaussianState::hermiticity_error() const {
  if (corr_.size() == 0) return 0.0;
  return (corr_ - corr_.adjoint()).cwiseAbs().maxCoeff();
}

bool GaussianState::is_real() const {
  return corr_.size() == 0 || corr_.imag().cwiseAbs().maxCoeff() == 0.0;
}

OrbitalMeasurement measure_orbital(const GaussianState& state, int site,
                                   std::optional<int> forced, double uniform) {
  const int n = state.num_modes();
  if (site < 0 || site >= n) throw InvalidArgument("measure_orbital: site out of range");
  const Eigen::MatrixXcd& c = state.corr();
  const double caa = c(site, site).real();
  const int* f = forced ? &*forced : nullptr;
  const Draw d = choose(caa, f, uniform);
  const double delta = caa - 1.0 + d.outcome;
  Eigen::VectorXcd col = c.col(site);
  Eigen::MatrixXcd next = c - (col * col.adjoint()) / delta;
  next.row(site).setZero();
  next.col(site).setZero();
  next(site, site) = static_cast<double>(d.outcome);
  next = 0.5 * (next + next.adjoint()).eval();
  return {d.outcome, d.probability, GaussianState::adopt(std::move(next))};
}

namespace {

RegionMeasurement measure_region_impl(const GaussianState& state, std::span<const int> sites,
                                      RngStream* rng, std::span<const int> forced) {
  const int n = state.num_modes();
  const SiteSet measured = normalized_sites(sites, n, "measure_region");
  if (rng == nullptr && forced.size() != measured.size()) {
    throw InvalidArgument("measure_region: one forced outcome per site required");
  }
  std::vector<char> in_m(static_cast<std::size_t>(n), 0);
  for (int s : measured) in_m[s] = 1;
  SiteSet kept;
  for (int i = 0; i < n; ++i) {
    if (!in_m[i]) kept.push_back(i);
  }
  TrajectorySampler sampler(state, measured, kept);
  TrajectorySampler::Sample s = rng != nullptr ? sampler.sample(*rng) : sampler.sample_forced(forced);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < kept.size(); ++j) {
    for (std::size_t i = 0; i < kept.size(); ++i) {
      out(kept[i], kept[j]) = s.kept_corr(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }
  }
  for (std::size_t a = 0; a < measured.size(); ++a) {
    out(measured[a], measured[a]) = static_cast<double>(s.outcomes[a]);
  }
  return {TrajectoryRecord{measured, std::move(s.outcomes), s.log_probability},
          GaussianState::adopt(std::move(out))};
}

}  // namespace

RegionMeasurement measure_region(const GaussianState& state, std::span<const int> sites,
                                 RngStream& rng) {
  return measure_region_impl(state, sites, &rng, {});
}

RegionMeasurement measure_region_forced(const GaussianState& state, std::span<const int> sites,
                                        std::span<const int> outcomes) {
  return measure_region_impl(state, sites, nullptr, outcomes);
}

double entropy_of_correlation(const Eigen::MatrixXcd& corr) {
  if (corr.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(corr, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("entropy: eigensolver failed");
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const double l = es.eigenvalues()(i);
    s -= xlogx_clipped(l) + xlogx_clipped(1.0 - l);
  }
  return s;
}

double entropy(const GaussianState& state, std::span<const int> region) {
  const SiteSet r = normalized_sites(region, state.num_modes(), "entropy");
  return entropy_of_correlation(restrict(state.corr(), r));
}

double mutual_information(const GaussianState& state, std::span<const int> a,
                          std::span<const int> b) {
  SiteSet ab(a.begin(), a.end());
  ab.insert(ab.end(), b.begin(), b.end());
  const SiteSet joint = normalized_sites(ab, state.num_modes(), "mutual_information");
  return entropy(state, a) + entropy(state, b) - entropy_of_correlation(restrict(state.corr(), joint));
}

struct TrajectorySampler::Impl {
  int m = 0;
  std::variant<Eigen::MatrixXd, Eigen::MatrixXcd> base;
};

TrajectorySampler::TrajectorySampler(const GaussianState& state, std::span<const int> measured,
                                     std::span<const int> kept)
    : measured_(measured.begin(), measured.end()), kept_(kept.begin(), kept.end()) {
  const int n = state.num_modes();
  std::vector<int> order = measured_;
  order.insert(order.end(), kept_.begin(), kept_.end());
  normalized_sites(order, n, "TrajectorySampler");
  Eigen::MatrixXcd permuted = restrict(state.corr(), order);
  impl_ = std::make_unique<Impl>();
  impl_->m = static_cast<int>(measured_.size());
  if (permuted.size() == 0 || permuted.imag().cwiseAbs().maxCoeff() == 0.0) {
    impl_->base = Eigen::MatrixXd(permuted.real());
  } else {
    impl_->base = std::move(permuted);
  }
}

TrajectorySampler::~TrajectorySampler() = default;
TrajectorySampler::TrajectorySampler(TrajectorySampler&&) noexcept = default;
TrajectorySampler& TrajectorySampler::operator=(TrajectorySampler&&) noexcept = default;

namespace {

template <class Matrix>
TrajectorySampler::Sample run_sampler(const Matrix& base, int m, const int* forced,
                                      RngStream* rng) {
  TrajectorySampler::Sample out;
  Matrix w = base;
  eliminate(w, m, forced, rng, out.outcomes, out.log_probability);
  out.kept_corr = kept_block(w, m);
  return out;
}

}  // namespace

TrajectorySampler::Sample TrajectorySampler::sample(RngStream& rng) const {
  const int m = impl_->m;
  return std::visit([&](const auto& base) { return run_sampler(base, m, nullptr, &rng); },
                    impl_->base);
}

TrajectorySampler::Sample TrajectorySampler::sample_forced(std::span<const int> outcomes) const {
  if (outcomes.size() != measured_.size()) {
    throw InvalidArgument("sample_forced: one outcome per measured mode required");
  }
  const int m = impl_->m;
  return std::visit(
      [&](const auto& base) { return run_sampler(base, m, outcomes.data(), nullptr); },
      impl_->base);
}

}  // namespace mieflow::gaussian
