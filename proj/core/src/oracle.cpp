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

#include "mieflow/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace mieflow::oracle {

namespace {

constexpr double kProbabilityFloor = 1e-15;

std::size_t product_of(const std::vector<int>& dims) {
  std::size_t total = 1;
  for (int d : dims) {
    if (d < 2) throw InvalidArgument("local dimension must be at least 2");
    total *= static_cast<std::size_t>(d);
    if (total > kMaxDimension) throw InvalidArgument("state dimension exceeds 2^14");
  }
  return total;
}

// Row/column index of every amplitude for a bipartition (rows, rest).
struct IndexSplit {
  std::vector<Eigen::Index> row_of;
  std::vector<Eigen::Index> col_of;
  Eigen::Index rows = 1;
  Eigen::Index cols = 1;
};

IndexSplit split_indices(const std::vector<int>& dims, std::span<const int> rows) {
  const int n = static_cast<int>(dims.size());
  std::vector<int> in_rows(n, -1);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int s = rows[k];
    if (s < 0 || s >= n) throw InvalidArgument("site index out of range");
    if (in_rows[s] != -1) throw InvalidArgument("duplicate site in region");
    in_rows[s] = static_cast<int>(k);
  }
  // Strides: rows in the listed order, columns in ascending site order.
  std::vector<Eigen::Index> row_stride(rows.size());
  IndexSplit out;
  for (int k = static_cast<int>(rows.size()) - 1; k >= 0; --k) {
    row_stride[k] = out.rows;
    out.rows *= dims[rows[k]];
  }
  std::vector<Eigen::Index> col_stride(n, 0);
  for (int s = n - 1; s >= 0; --s) {
    if (in_rows[s] == -1) {
      col_stride[s] = out.cols;
      out.cols *= dims[s];
    }
  }
  const std::size_t total = static_cast<std::size_t>(out.rows * out.cols);
  out.row_of.resize(total);
  out.col_of.resize(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i;
    Eigen::Index r = 0;
    Eigen::Index c = 0;
    for (int s = n - 1; s >= 0; --s) {
      const int digit = static_cast<int>(rem % dims[s]);
      rem /= dims[s];
      if (in_rows[s] >= 0) {
        r += digit * row_stride[in_rows[s]];
      } else {
        c += digit * col_stride[s];
      }
    }
    out.row_of[i] = r;
    out.col_of[i] = c;
  }
  return out;
}

double entropy_of_matrix(const Eigen::MatrixXcd& psi) {
  Eigen::MatrixXcd rho = psi.rows() <= psi.cols() ? Eigen::MatrixXcd(psi * psi.adjoint())
                                                  : Eigen::MatrixXcd(psi.adjoint() * psi);
  const double tr = rho.trace().real();
  if (tr <= 0.0) return 0.0;
  rho /= tr;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    s -= xlogx_clipped(es.eigenvalues()[k]);
  }
  return s;
}

void check_frame(const Frame& frame, const std::vector<int>& dims) {
  Eigen::Index expected = 1;
  for (int s : frame.sites) {
    if (s < 0 || s >= static_cast<int>(dims.size())) {
      throw InvalidArgument("frame site out of range");
    }
    expected *= dims[s];
  }
  if (frame.basis.rows() != expected || frame.basis.cols() != expected) {
    throw InvalidArgument("frame basis has wrong dimension");
  }
}

// Vector over `sites` (ascending) for the product of frame outcomes.
Eigen::VectorXcd outcome_vector(const ProductBasis& basis, std::span<const int> outcomes,
                                const std::vector<int>& dims, const SiteSet& sites) {
  std::vector<int> pos(dims.size(), -1);
  for (std::size_t k = 0; k < sites.size(); ++k) pos[sites[k]] = static_cast<int>(k);
  Eigen::Index total = 1;
  for (int s : sites) total *= dims[s];
  Eigen::VectorXcd v(total);
  std::vector<int> digit(sites.size());
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rem = idx;
    for (int k = static_cast<int>(sites.size()) - 1; k >= 0; --k) {
      digit[k] = static_cast<int>(rem % dims[sites[k]]);
      rem /= dims[sites[k]];
    }
    cplx amp = 1.0;
    for (std::size_t f = 0; f < basis.size(); ++f) {
      Eigen::Index local = 0;
      for (int s : basis[f].sites) local = local * dims[s] + digit[pos[s]];
      amp *= basis[f].basis(local, outcomes[f]);
    }
    v[idx] = amp;
  }
  return v;
}

SiteSet frame_cover(const ProductBasis& basis, const std::vector<int>& dims) {
  SiteSet cover;
  for (const auto& f : basis) {
    check_frame(f, dims);
    cover.insert(cover.end(), f.sites.begin(), f.sites.end());
  }
  return normalized_sites(cover, static_cast<int>(dims.size()), "measurement basis");
}

// Enumerates outcome strings lexicographically (first frame most significant).
void for_each_outcome(const ProductBasis& basis,
                      const std::function<void(std::span<const int>)>& visit) {
  std::vector<int> outcome(basis.size(), 0);
  while (true) {
    visit(outcome);
    int k = static_cast<int>(basis.size()) - 1;
    while (k >= 0) {
      if (++outcome[k] < basis[k].basis.cols()) break;
      outcome[k] = 0;
      --k;
    }
    if (k < 0) return;
  }
}

Eigen::VectorXcd apply_raw(const std::vector<int>& dims, const Eigen::VectorXcd& amps,
                           const LocalOperator& op) {
  const IndexSplit split = split_indices(dims, op.sites);
  if (op.matrix.rows() != split.rows || op.matrix.cols() != split.rows) {
    throw InvalidArgument("operator dimension does not match its sites");
  }
  Eigen::MatrixXcd psi(split.rows, split.cols);
  for (std::size_t i = 0; i < split.row_of.size(); ++i) {
    psi(split.row_of[i], split.col_of[i]) = amps[static_cast<Eigen::Index>(i)];
  }
  const Eigen::MatrixXcd out = op.matrix * psi;
  Eigen::VectorXcd v(amps.size());
  for (std::size_t i = 0; i < split.row_of.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = out(split.row_of[i], split.col_of[i]);
  }
  return v;
}

// c_i^dag c_j applied to a Jordan-Wigner register of n modes.
Eigen::VectorXcd hop_apply(int n, int i, int j, const Eigen::VectorXcd& v) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  auto occupied = [n](Eigen::Index s, int site) { return ((s >> (n - 1 - site)) & 1) != 0; };
  auto sign_before = [&](Eigen::Index s, int site) {
    int count = 0;
    for (int k = 0; k < site; ++k) count += occupied(s, k) ? 1 : 0;
    return (count % 2) ? -1.0 : 1.0;
  };
  for (Eigen::Index s = 0; s < v.size(); ++s) {
    if (v[s] == cplx{0.0} || !occupied(s, j)) continue;
    const double sj = sign_before(s, j);
    const Eigen::Index t = s ^ (Eigen::Index{1} << (n - 1 - j));
    if (occupied(t, i)) continue;
    const double si = sign_before(t, i);
    out[t ^ (Eigen::Index{1} << (n - 1 - i))] += si * sj * v[s];
  }
  return out;
}

}  // namespace

StateVector::StateVector(std::vector<int> local_dims, Eigen::VectorXcd amplitudes)
    : dims_(std::move(local_dims)), amps_(std::move(amplitudes)) {
  if (dims_.empty() || static_cast<int>(dims_.size()) > kMaxSites) {
    throw InvalidArgument("state must have between 1 and 14 sites");
  }
  if (product_of(dims_) != static_cast<std::size_t>(amps_.size())) {
    throw InvalidArgument("amplitude count does not match local dimensions");
  }
  const double norm = amps_.norm();
  if (std::abs(norm * norm - 1.0) > 1e-12) {
    throw InvalidArgument("state vector is not normalized");
  }
}

StateVector StateVector::qubits(Eigen::VectorXcd amplitudes) {
  int n = 0;
  while ((Eigen::Index{1} << n) < amplitudes.size()) ++n;
  if ((Eigen::Index{1} << n) != amplitudes.size()) {
    throw InvalidArgument("qubit state length must be a power of two");
  }
  return StateVector(std::vector<int>(n, 2), std::move(amplitudes));
}

StateVector StateVector::product(const std::vector<Eigen::VectorXcd>& site_states) {
  std::vector<int> dims;
  Eigen::VectorXcd amps = Eigen::VectorXcd::Ones(1);
  for (const auto& v : site_states) {
    dims.push_back(static_cast<int>(v.size()));
    const Eigen::VectorXcd unit = v.normalized();
    Eigen::VectorXcd next(amps.size() * unit.size());
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
      next.segment(i * unit.size(), unit.size()) = amps[i] * unit;
    }
    amps = std::move(next);
  }
  return StateVector(std::move(dims), std::move(amps));
}

StateVector StateVector::basis_state(std::vector<int> local_dims, std::span<const int> digits) {
  if (digits.size() != local_dims.size()) throw InvalidArgument("digit count mismatch");
  Eigen::Index idx = 0;
  for (std::size_t s = 0; s < digits.size(); ++s) {
    if (digits[s] < 0 || digits[s] >= local_dims[s]) throw InvalidArgument("digit out of range");
    idx = idx * local_dims[s] + digits[s];
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(product_of(local_dims)));
  amps[idx] = 1.0;
  return StateVector(std::move(local_dims), std::move(amps));
}

Eigen::MatrixXcd StateVector::bipartition(std::span<const int> rows) const {
  const IndexSplit split = split_indices(dims_, rows);
  Eigen::MatrixXcd psi(split.rows, split.cols);
  for (std::size_t i = 0; i < split.row_of.size(); ++i) {
    psi(split.row_of[i], split.col_of[i]) = amps_[static_cast<Eigen::Index>(i)];
  }
  return psi;
}

Frame z_frame(int site, int dim) {
  return Frame{{site}, Eigen::MatrixXcd::Identity(dim, dim)};
}

Frame x_frame(int site) {
  Eigen::MatrixXcd h(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  h << r, r, r, -r;
  return Frame{{site}, h};
}

Frame fourier_frame(int site, int dim) {
  Eigen::MatrixXcd f(dim, dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      f(j, k) = scale * std::polar(1.0, 2.0 * std::numbers::pi * j * k / dim);
    }
  }
  return Frame{{site}, f};
}

Frame bell_frame(int site_i, int site_j) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(4, 4);
  // Rows: |00>, |01>, |10>, |11>.
  b(1, 0) = r;
  b(2, 0) = -r;
  b(1, 1) = r;
  b(2, 1) = r;
  b(0, 2) = r;
  b(3, 2) = -r;
  b(0, 3) = r;
  b(3, 3) = r;
  return Frame{{site_i, site_j}, b};
}

Frame unitary_frame(int site, Eigen::MatrixXcd unitary) {
  const Eigen::Index d = unitary.rows();
  if (unitary.cols() != d ||
      !(unitary.adjoint() * unitary).isApprox(Eigen::MatrixXcd::Identity(d, d), 1e-12)) {
    throw InvalidArgument("frame is not unitary");
  }
  return Frame{{site}, std::move(unitary)};
}

GroundState ground_state(const Eigen::MatrixXcd& hamiltonian, std::vector<int> local_dims) {
  const Eigen::Index n = hamiltonian.rows();
  if (n != hamiltonian.cols()) throw InvalidArgument("Hamiltonian must be square");
  if (static_cast<std::size_t>(n) > kMaxDimension) {
    throw InvalidArgument("Hamiltonian dimension exceeds 2^14");
  }
  const double scale = std::max(1.0, hamiltonian.cwiseAbs().maxCoeff());
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw InvalidArgument("Hamiltonian is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hamiltonian);
  Eigen::VectorXcd v = es.eigenvectors().col(0);
  const double top = v.cwiseAbs().maxCoeff();
  Eigen::Index pivot = 0;
  while (std::abs(v[pivot]) < top - 1e-12) ++pivot;
  v *= std::conj(v[pivot]) / std::abs(v[pivot]);
  v.normalize();
  return GroundState{StateVector(std::move(local_dims), std::move(v)), es.eigenvalues()[0]};
}

GroundState ground_state(const Eigen::MatrixXcd& hamiltonian) {
  int n = 0;
  while ((Eigen::Index{1} << n) < hamiltonian.rows()) ++n;
  if ((Eigen::Index{1} << n) != hamiltonian.rows()) {
    throw InvalidArgument("qubit Hamiltonian dimension must be a power of two");
  }
  return ground_state(hamiltonian, std::vector<int>(n, 2));
}

Projection project(const StateVector& state, const Frame& frame, int outcome) {
  check_frame(frame, state.local_dims());
  if (outcome < 0 || outcome >= frame.basis.cols()) throw InvalidArgument("outcome out of range");
  const IndexSplit split = split_indices(state.local_dims(), frame.sites);
  const Eigen::VectorXcd& amps = state.amplitudes();
  const auto bvec = frame.basis.col(outcome);
  Eigen::VectorXcd reduced = Eigen::VectorXcd::Zero(split.cols);
  for (std::size_t i = 0; i < split.row_of.size(); ++i) {
    reduced[split.col_of[i]] += std::conj(bvec[split.row_of[i]]) * amps[static_cast<Eigen::Index>(i)];
  }
  Projection out;
  out.probability = reduced.squaredNorm();
  if (out.probability <= kProbabilityFloor) return out;
  reduced /= std::sqrt(out.probability);
  Eigen::VectorXcd next(amps.size());
  for (std::size_t i = 0; i < split.row_of.size(); ++i) {
    next[static_cast<Eigen::Index>(i)] = bvec[split.row_of[i]] * reduced[split.col_of[i]];
  }
  next.normalize();
  out.state.emplace(state.local_dims(), std::move(next));
  return out;
}

Projection project_site(const StateVector& state, int site, const Frame& frame, int outcome) {
  if (frame.sites.size() != 1) {
    Frame f = frame;
    f.sites = {site};
    return project(state, f, outcome);
  }
  Frame f{{site}, frame.basis};
  return project(state, f, outcome);
}

double entropy(const StateVector& state, std::span<const int> region) {
  if (region.empty() || static_cast<int>(region.size()) == state.num_sites()) {
    normalized_sites(region, state.num_sites(), "entropy region");
    return 0.0;
  }
  return entropy_of_matrix(state.bipartition(region));
}

double mutual_information(const StateVector& state, std::span<const int> a,
                          std::span<const int> b) {
  std::vector<int> ab(a.begin(), a.end());
  ab.insert(ab.end(), b.begin(), b.end());
  normalized_sites(ab, state.num_sites(), "mutual information regions");
  return entropy(state, a) + entropy(state, b) - entropy(state, ab);
}

std::vector<double> outcome_distribution(const StateVector& state, const ProductBasis& basis) {
  const SiteSet sites = frame_cover(basis, state.local_dims());
  const Eigen::MatrixXcd psi = state.bipartition(sites);
  std::vector<double> probs;
  for_each_outcome(basis, [&](std::span<const int> outcome) {
    const Eigen::VectorXcd mvec = outcome_vector(basis, outcome, state.local_dims(), sites);
    probs.push_back((mvec.adjoint() * psi).squaredNorm());
  });
  return probs;
}

MieMii mie_mii_exact(const StateVector& state, const RegionSpec& regions,
                     const ProductBasis& basis) {
  regions.validate(state.num_sites());
  const SiteSet cover = frame_cover(basis, state.local_dims());
  if (cover != normalized_sites(regions.m, state.num_sites(), "M")) {
    throw InvalidArgument("measurement frames must cover exactly the region M");
  }
  const SiteSet ab = regions.ab();
  MieMii out;
  out.pre_mutual_info = mutual_information(state, regions.a, regions.b);

  // Amplitudes indexed (A then B) x M, contracted against each outcome vector.
  std::vector<int> rows = regions.a;
  rows.insert(rows.end(), regions.b.begin(), regions.b.end());
  const Eigen::MatrixXcd psi = state.bipartition(rows);
  Eigen::Index dim_a = 1;
  for (int s : regions.a) dim_a *= state.local_dims()[s];
  const Eigen::Index dim_b = psi.rows() / dim_a;
  const SiteSet m_sorted = cover;

  for_each_outcome(basis, [&](std::span<const int> outcome) {
    const Eigen::VectorXcd mvec = outcome_vector(basis, outcome, state.local_dims(), m_sorted);
    const Eigen::VectorXcd phi = psi * mvec.conjugate();
    const double p = phi.squaredNorm();
    if (p <= kProbabilityFloor) return;
    const Eigen::MatrixXcd mat = Eigen::Map<const Eigen::MatrixXcd>(phi.data(), dim_b, dim_a)
                                     .transpose() / std::sqrt(p);
    const double sa = entropy_of_matrix(mat);
    const double sb = entropy_of_matrix(mat.transpose());
    out.mie += p * sa;
    // A u B is pure after measuring all of M.
    out.post_mutual_info += p * (sa + sb);
  });
  out.mii = out.post_mutual_info - out.pre_mutual_info;
  return out;
}

Eigen::VectorXcd apply(const StateVector& state, const LocalOperator& op) {
  return apply_raw(state.local_dims(), state.amplitudes(), op);
}

std::optional<StrangeCorrelator> strange_correlator(const StateVector& state,
                                                    const StateVector& reference,
                                                    const LocalOperator& op_a,
                                                    const LocalOperator& op_b) {
  if (reference.local_dims() != state.local_dims()) {
    throw InvalidArgument("reference and state live on different registers");
  }
  const cplx overlap = reference.amplitudes().dot(state.amplitudes());
  if (std::abs(overlap) < 1e-12) return std::nullopt;
  const Eigen::VectorXcd b_psi = apply(state, op_b);
  const cplx with_b = reference.amplitudes().dot(b_psi);
  const cplx with_a = reference.amplitudes().dot(apply(state, op_a));
  const cplx with_ab =
      reference.amplitudes().dot(apply_raw(state.local_dims(), b_psi, op_a));
  StrangeCorrelator sc;
  sc.value = with_ab / overlap;
  sc.connected = sc.value - (with_a / overlap) * (with_b / overlap);
  return sc;
}

StrangeBoundReport check_sc_bound(const StateVector& state, const RegionSpec& regions,
                                  const ProductBasis& basis, const Eigen::VectorXcd& ref_a,
                                  const Eigen::VectorXcd& ref_b, const Eigen::MatrixXcd& op_a,
                                  const Eigen::MatrixXcd& op_b) {
  regions.validate(state.num_sites());
  const SiteSet cover = frame_cover(basis, state.local_dims());
  if (cover != normalized_sites(regions.m, state.num_sites(), "M")) {
    throw InvalidArgument("measurement frames must cover exactly the region M");
  }
  const SiteSet a = normalized_sites(regions.a, state.num_sites(), "A");
  const SiteSet b = normalized_sites(regions.b, state.num_sites(), "B");
  Eigen::Index dim_a = 1;
  Eigen::Index dim_b = 1;
  for (int s : a) dim_a *= state.local_dims()[s];
  for (int s : b) dim_b *= state.local_dims()[s];
  if (ref_a.size() != dim_a || ref_b.size() != dim_b || op_a.rows() != dim_a ||
      op_a.cols() != dim_a || op_b.rows() != dim_b || op_b.cols() != dim_b) {
    throw InvalidArgument("reference states or operators have the wrong dimension");
  }

  StrangeBoundReport report;
  const Eigen::VectorXcd ma = ref_a.normalized();
  const Eigen::VectorXcd mb = ref_b.normalized();
  const Eigen::VectorXcd va = op_a.adjoint() * ma;
  const Eigen::VectorXcd vb = op_b.adjoint() * mb;
  report.norm_a = va.norm();
  report.norm_b = vb.norm();
  report.degenerate = report.norm_a < 1e-14 || report.norm_b < 1e-14;

  std::vector<int> rows = a;
  rows.insert(rows.end(), b.begin(), b.end());
  const Eigen::MatrixXcd psi = state.bipartition(rows);
  double weighted = 0.0;
  for_each_outcome(basis, [&](std::span<const int> outcome) {
    const Eigen::VectorXcd mvec = outcome_vector(basis, outcome, state.local_dims(), cover);
    const Eigen::VectorXcd phi = psi * mvec.conjugate();
    const double p = phi.squaredNorm();
    if (p <= kProbabilityFloor) return;
    // Phi(i, j): i over A, j over B.
    const Eigen::MatrixXcd mat =
        Eigen::Map<const Eigen::MatrixXcd>(phi.data(), dim_b, dim_a).transpose();
    report.mie += p * entropy_of_matrix(mat / std::sqrt(p));
    const cplx overlap = ma.adjoint() * mat * mb.conjugate();
    const cplx charged = va.adjoint() * mat * vb.conjugate();
    const cplx y_expect = std::conj(overlap) * charged / p;
    const Eigen::MatrixXcd rho_a = mat * mat.adjoint() / p;
    const Eigen::MatrixXcd rho_b = mat.transpose() * mat.conjugate() / p;
    const cplx t_a = va.adjoint() * rho_a * ma;
    const cplx t_b = vb.adjoint() * rho_b * mb;
    weighted += p * std::norm(y_expect - t_a * t_b);
  });
  if (!report.degenerate) {
    report.bound = weighted / (4.0 * report.norm_a * report.norm_a * report.norm_b * report.norm_b);
  }
  return report;
}

Eigen::MatrixXcd fermion_hamiltonian(const Eigen::MatrixXcd& single_particle) {
  const int n = static_cast<int>(single_particle.rows());
  if (n > kMaxSites) throw InvalidArgument("too many fermion modes for a dense Hamiltonian");
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  auto occupied = [n](Eigen::Index state, int site) {
    return ((state >> (n - 1 - site)) & 1) != 0;
  };
  auto parity_before = [&](Eigen::Index state, int site) {
    int count = 0;
    for (int k = 0; k < site; ++k) count += occupied(state, k) ? 1 : 0;
    return (count % 2) ? -1.0 : 1.0;
  };
  for (Eigen::Index s = 0; s < dim; ++s) {
    for (int j = 0; j < n; ++j) {
      if (!occupied(s, j)) continue;
      const double sign_j = parity_before(s, j);
      const Eigen::Index t = s ^ (Eigen::Index{1} << (n - 1 - j));
      for (int i = 0; i < n; ++i) {
        if (single_particle(i, j) == cplx{0.0}) continue;
        if (occupied(t, i)) continue;
        const double sign_i = parity_before(t, i);
        const Eigen::Index u = t ^ (Eigen::Index{1} << (n - 1 - i));
        h(u, s) += single_particle(i, j) * sign_i * sign_j;
      }
    }
  }
  return h;
}

Eigen::MatrixXcd correlation_matrix(const StateVector& state) {
  const int n = state.num_sites();
  for (int d : state.local_dims()) {
    if (d != 2) throw InvalidArgument("correlation matrix needs a qubit register");
  }
  Eigen::MatrixXcd c(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      c(i, j) = state.amplitudes().dot(hop_apply(n, i, j, state.amplitudes()));
    }
  }
  return c;
}

StateVector singlet_product(int num_sites, const std::vector<std::pair<int, int>>& pairs) {
  std::vector<int> partner(num_sites, -1);
  for (auto [i, j] : pairs) {
    if (i < 0 || j < 0 || i >= num_sites || j >= num_sites || i == j || partner[i] != -1 ||
        partner[j] != -1) {
      throw InvalidArgument("singlet pairs must form a matching");
    }
    partner[i] = j;
    partner[j] = i;
  }
  if (std::find(partner.begin(), partner.end(), -1) != partner.end()) {
    throw InvalidArgument("singlet pairs must cover every site");
  }
  const Eigen::Index dim = Eigen::Index{1} << num_sites;
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim);
  const double scale = std::pow(2.0, -0.5 * static_cast<double>(pairs.size()));
  // Each pair contributes |0_i 1_j> - |1_i 0_j> with i < j.
  const std::size_t npairs = pairs.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << npairs); ++mask) {
    Eigen::Index idx = 0;
    double sign = 1.0;
    for (std::size_t k = 0; k < npairs; ++k) {
      auto [i, j] = pairs[k];
      const int lo = std::min(i, j);
      const int hi = std::max(i, j);
      const bool flip = (mask >> k) & 1;
      const int set = flip ? lo : hi;
      idx |= Eigen::Index{1} << (num_sites - 1 - set);
      if (flip) sign = -sign;
    }
    amps[idx] = sign * scale;
  }
  return StateVector(std::vector<int>(num_sites, 2), std::move(amps));
}

}  // namespace mieflow::oracle
