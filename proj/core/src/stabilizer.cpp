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

#include "mieflow/stabilizer.hpp"

#include <cmath>
#include <numbers>

namespace mieflow::stab {

namespace {

inline int mod(long long a, int p) {
  const long long r = a % p;
  return static_cast<int>(r < 0 ? r + p : r);
}

void check_same_size(const Pauli& a, const Pauli& b) {
  if (a.x.size() != b.x.size() || a.z.size() != a.x.size() || b.z.size() != b.x.size()) {
    throw InvalidArgument("Pauli operators act on different numbers of qudits");
  }
}

std::vector<int> row_of(const Pauli& g) {
  std::vector<int> r = g.x;
  r.insert(r.end(), g.z.begin(), g.z.end());
  return r;
}

}  // namespace

bool Pauli::is_identity() const {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0 || z[i] != 0) return false;
  }
  return true;
}

std::vector<int> Pauli::support() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != 0 || z[i] != 0) out.push_back(static_cast<int>(i));
  }
  return out;
}

Pauli Pauli::identity(int n) {
  return {std::vector<int>(static_cast<std::size_t>(n), 0),
          std::vector<int>(static_cast<std::size_t>(n), 0), 0};
}

Pauli Pauli::single_x(int n, int site, int power) {
  Pauli out = identity(n);
  out.x.at(static_cast<std::size_t>(site)) = power;
  return out;
}

Pauli Pauli::single_z(int n, int site, int power) {
  Pauli out = identity(n);
  out.z.at(static_cast<std::size_t>(site)) = power;
  return out;
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

int inverse_mod(int a, int p) {
  a = mod(a, p);
  if (a == 0) throw InvalidArgument("inverse_mod: zero has no inverse");
  for (int b = 1; b < p; ++b) {
    if ((a * b) % p == 1) return b;
  }
  throw InvalidArgument("inverse_mod: modulus is not prime");
}

Pauli multiply(const Pauli& a, const Pauli& b, int p) {
  check_same_size(a, b);
  Pauli out;
  out.x.resize(a.x.size());
  out.z.resize(a.z.size());
  long long cross = 0;
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    cross += static_cast<long long>(a.z[i]) * b.x[i];
    out.x[i] = mod(a.x[i] + b.x[i], p);
    out.z[i] = mod(a.z[i] + b.z[i], p);
  }
  out.phase = mod(a.phase + b.phase + 2 * mod(cross, p), 2 * p);
  return out;
}

Pauli power(const Pauli& a, int k, int p) {
  if (k < 0) throw InvalidArgument("power: exponent must be non-negative");
  Pauli out = Pauli::identity(a.size());
  for (int i = 0; i < k; ++i) out = multiply(out, a, p);
  return out;
}

int symplectic(const Pauli& a, const Pauli& b, int p) {
  check_same_size(a, b);
  long long s = 0;
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    s += static_cast<long long>(a.z[i]) * b.x[i] - static_cast<long long>(a.x[i]) * b.z[i];
  }
  return mod(s, p);
}

int rank_mod_p(std::vector<std::vector<int>> rows, int p) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  int rank = 0;
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    int pivot = -1;
    for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
      if (mod(rows[r][c], p) != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    const int inv = inverse_mod(rows[rank][c], p);
    for (int& v : rows[rank]) v = mod(static_cast<long long>(v) * inv, p);
    for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
      const int f = mod(rows[r][c], p);
      if (f == 0) continue;
      for (std::size_t k = c; k < cols; ++k) rows[r][k] = mod(rows[r][k] - f * rows[rank][k], p);
    }
    ++rank;
  }
  return rank;
}

QuditStabilizerState::QuditStabilizerState(int p, int n) : p_(p), n_(n) {
  if (!is_prime(p)) throw InvalidArgument("qudit dimension must be prime");
  if (n < 1) throw InvalidArgument("need at least one qudit");
  for (int i = 0; i < n; ++i) gens_.push_back(Pauli::single_z(n, i));
}

QuditStabilizerState QuditStabilizerState::from_generators(int p, int n,
                                                           std::vector<Pauli> generators) {
  if (!is_prime(p)) throw InvalidArgument("qudit dimension must be prime");
  if (static_cast<int>(generators.size()) != n) {
    throw InvalidArgument("need exactly one generator per qudit");
  }
  std::vector<std::vector<int>> rows;
  for (Pauli& g : generators) {
    if (g.size() != n || static_cast<int>(g.z.size()) != n) {
      throw InvalidArgument("generator has wrong length");
    }
    for (int& v : g.x) v = mod(v, p);
    for (int& v : g.z) v = mod(v, p);
    g.phase = mod(g.phase, 2 * p);
    rows.push_back(row_of(g));
  }
  QuditStabilizerState s(p, n, std::move(generators));
  if (!s.generators_commute()) throw InvalidArgument("generators do not commute");
  if (rank_mod_p(std::move(rows), p) != n) throw InvalidArgument("generators are not independent");
  return s;
}

bool QuditStabilizerState::generators_commute() const {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    for (std::size_t j = i + 1; j < gens_.size(); ++j) {
      if (symplectic(gens_[i], gens_[j], p_) != 0) return false;
    }
  }
  return true;
}

std::optional<int> QuditStabilizerState::eigenvalue(const Pauli& op) const {
  if (op.size() != n_) throw InvalidArgument("operator size mismatch");
  for (const Pauli& g : gens_) {
    if (symplectic(g, op, p_) != 0) return std::nullopt;
  }
  // Row-reduce the generators while tracking combinations, then express op.
  const int n = n_;
  std::vector<std::vector<int>> rows;
  std::vector<std::vector<int>> combo;
  for (int i = 0; i < n; ++i) {
    rows.push_back(row_of(gens_[i]));
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    e[i] = 1;
    combo.push_back(std::move(e));
  }
  std::vector<std::pair<int, int>> pivots;
  int rank = 0;
  for (int c = 0; c < 2 * n && rank < n; ++c) {
    int pivot = -1;
    for (int r = rank; r < n; ++r) {
      if (rows[r][c] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    std::swap(combo[rank], combo[pivot]);
    const int inv = inverse_mod(rows[rank][c], p_);
    for (int& v : rows[rank]) v = mod(static_cast<long long>(v) * inv, p_);
    for (int& v : combo[rank]) v = mod(static_cast<long long>(v) * inv, p_);
    for (int r = 0; r < n; ++r) {
      if (r == rank || rows[r][c] == 0) continue;
      const int f = rows[r][c];
      for (int k = 0; k < 2 * n; ++k) rows[r][k] = mod(rows[r][k] - f * rows[rank][k], p_);
      for (int k = 0; k < n; ++k) combo[r][k] = mod(combo[r][k] - f * combo[rank][k], p_);
    }
    pivots.emplace_back(rank, c);
    ++rank;
  }
  std::vector<int> target = row_of(op);
  for (int& v : target) v = mod(v, p_);
  std::vector<int> coeff(static_cast<std::size_t>(n), 0);
  for (auto [r, c] : pivots) {
    const int f = target[c];
    if (f == 0) continue;
    for (int k = 0; k < 2 * n; ++k) target[k] = mod(target[k] - f * rows[r][k], p_);
    for (int k = 0; k < n; ++k) coeff[k] = mod(coeff[k] + f * combo[r][k], p_);
  }
  for (int v : target) {
    if (v != 0) throw NumericalError("commuting operator outside the stabilizer group");
  }
  Pauli product = Pauli::identity(n);
  for (int i = 0; i < n; ++i) {
    if (coeff[i] != 0) product = multiply(product, power(gens_[i], coeff[i], p_), p_);
  }
  // op = tau^(r_op - r_prod) * (stabilizer element with eigenvalue 1).
  const int diff = mod(op.phase - product.phase, 2 * p_);
  if (diff % 2 != 0) throw NumericalError("eigenvalue is not a power of w");
  return (diff / 2) % p_;
}

QuditStabilizerState::Outcome QuditStabilizerState::measure(const Pauli& op, RngStream& rng,
                                                            std::optional<int> forced) {
  if (op.size() != n_) throw InvalidArgument("operator size mismatch");
  const Pauli op_p = power(op, p_, p_);
  if (!op_p.is_identity() || op_p.phase != 0) {
    throw InvalidArgument("measured operator must satisfy op^p = 1");
  }
  int pivot = -1;
  std::vector<int> s(gens_.size(), 0);
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    s[i] = symplectic(gens_[i], op, p_);
    if (s[i] != 0 && pivot < 0) pivot = static_cast<int>(i);
  }
  if (pivot < 0) {
    const int k = *eigenvalue(op);
    if (forced && mod(*forced, p_) != k) throw NumericalError("forced outcome has zero probability");
    return {k, false};
  }
  const int inv = inverse_mod(s[pivot], p_);
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    if (static_cast<int>(i) == pivot || s[i] == 0) continue;
    const int m = mod(-static_cast<long long>(s[i]) * inv, p_);
    gens_[i] = multiply(gens_[i], power(gens_[pivot], m, p_), p_);
  }
  const int k = forced ? mod(*forced, p_) : static_cast<int>(rng.below(static_cast<std::uint64_t>(p_)));
  Pauli g = op;
  for (int& v : g.x) v = mod(v, p_);
  for (int& v : g.z) v = mod(v, p_);
  g.phase = mod(op.phase - 2 * k, 2 * p_);
  gens_[pivot] = std::move(g);
  return {k, true};
}

QuditStabilizerState::Outcome QuditStabilizerState::measure_site(int site, Basis basis,
                                                                 RngStream& rng) {
  if (site < 0 || site >= n_) throw InvalidArgument("measure_site: site out of range");
  return measure(basis == Basis::x ? Pauli::single_x(n_, site) : Pauli::single_z(n_, site), rng);
}

double QuditStabilizerState::entropy(std::span<const int> region) const {
  const SiteSet r = normalized_sites(region, n_, "stabilizer entropy");
  if (r.empty()) return 0.0;
  std::vector<std::vector<int>> rows;
  rows.reserve(gens_.size());
  for (const Pauli& g : gens_) {
    std::vector<int> row;
    row.reserve(2 * r.size());
    for (int q : r) row.push_back(g.x[q]);
    for (int q : r) row.push_back(g.z[q]);
    rows.push_back(std::move(row));
  }
  const int rank = rank_mod_p(std::move(rows), p_);
  return (rank - static_cast<int>(r.size())) * std::log(static_cast<double>(p_));
}

double QuditStabilizerState::mutual_information(std::span<const int> a,
                                                std::span<const int> b) const {
  SiteSet ab(a.begin(), a.end());
  ab.insert(ab.end(), b.begin(), b.end());
  return entropy(a) + entropy(b) - entropy(ab);
}

Eigen::VectorXcd QuditStabilizerState::to_amplitudes() const {
  double dim_d = std::pow(static_cast<double>(p_), n_);
  if (dim_d > 16384.0) throw InvalidArgument("to_amplitudes: state too large");
  const auto dim = static_cast<Eigen::Index>(dim_d);
  const cplx tau = std::polar(1.0, std::numbers::pi / p_);
  std::vector<cplx> tau_pow(static_cast<std::size_t>(2 * p_));
  for (int k = 0; k < 2 * p_; ++k) tau_pow[k] = std::pow(tau, k);
  std::vector<Eigen::Index> stride(static_cast<std::size_t>(n_));
  Eigen::Index acc = 1;
  for (int s = n_ - 1; s >= 0; --s) {
    stride[s] = acc;
    acc *= p_;
  }
  auto apply = [&](const Pauli& g, const Eigen::VectorXcd& in) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
    std::vector<int> digits(static_cast<std::size_t>(n_), 0);
    for (Eigen::Index j = 0; j < dim; ++j) {
      Eigen::Index rem = j;
      long long zdot = 0;
      Eigen::Index target = 0;
      for (int s = 0; s < n_; ++s) {
        digits[s] = static_cast<int>(rem / stride[s]);
        rem %= stride[s];
        zdot += static_cast<long long>(g.z[s]) * digits[s];
        target += ((digits[s] + g.x[s]) % p_) * stride[s];
      }
      out(target) += tau_pow[static_cast<std::size_t>(mod(g.phase + 2 * mod(zdot, p_), 2 * p_))] * in(j);
    }
    return out;
  };
  for (Eigen::Index start = 0; start < dim; ++start) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(start) = 1.0;
    for (const Pauli& g : gens_) {
      Eigen::VectorXcd sum = v;
      Eigen::VectorXcd cur = v;
      for (int k = 1; k < p_; ++k) {
        cur = apply(g, cur);
        sum += cur;
      }
      v = sum / static_cast<double>(p_);
    }
    const double norm = v.norm();
    if (norm > 1e-6) {
      v /= norm;
      Eigen::Index big = 0;
      v.cwiseAbs().maxCoeff(&big);
      for (Eigen::Index i = 0; i < dim; ++i) {
        if (std::abs(v(i)) > std::abs(v(big)) - 1e-12) {
          big = i;
          break;
        }
      }
      return v * (std::abs(v(big)) / v(big));
    }
  }
  throw NumericalError("to_amplitudes: projector annihilated every basis state");
}

}  // namespace mieflow::stab
