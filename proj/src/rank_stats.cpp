// Copyright 2026 The cutin-analysis Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cutin/rank_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cutin/error.hpp"

namespace cutin {

SampleSummary summarize(std::span<const double> sample) {
  if (sample.empty()) throw Error(ErrorKind::empty_sample, "cannot summarize an empty sample");
  SampleSummary s;
  s.n = sample.size();
  s.mean = std::accumulate(sample.begin(), sample.end(), 0.0) / static_cast<double>(s.n);
  if (s.n > 1) {
    double ss = 0.0;
    for (const double x : sample) ss += (x - s.mean) * (x - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

RankSum rank_sum_u(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::empty_sample, "rank-sum test needs two non-empty samples");
  struct Item {
    double value;
    bool from_a;
  };
  std::vector<Item> pooled;
  pooled.reserve(a.size() + b.size());
  for (const double x : a) pooled.push_back({x, true});
  for (const double x : b) pooled.push_back({x, false});
  std::sort(pooled.begin(), pooled.end(), [](const Item& l, const Item& r) { return l.value < r.value; });

  RankSum out;
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
    // Positions i..j-1 share the mid-rank of ranks i+1..j.
    const double mid_rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (pooled[k].from_a) out.rank_sum_a += mid_rank;
    }
    if (j - i > 1) out.tie_groups.push_back(j - i);
    i = j;
  }
  const auto na = static_cast<double>(a.size());
  out.u_a = out.rank_sum_a - na * (na + 1.0) / 2.0;
  return out;
}

std::string_view to_string(PValueMethod m) { return m == PValueMethod::exact ? "exact" : "normal_approx"; }

std::vector<double> u_null_counts(std::size_t n_a, std::size_t n_b) {
  // level[m] holds the count distribution for (m, n) at the current n.
  std::vector<std::vector<double>> level(n_a + 1, std::vector<double>{1.0});
  for (std::size_t n = 1; n <= n_b; ++n) {
    std::vector<std::vector<double>> next(n_a + 1);
    next[0] = {1.0};
    for (std::size_t m = 1; m <= n_a; ++m) {
      // f(m, n)(u) = f(m - 1, n)(u - n) + f(m, n - 1)(u)
      std::vector<double> f(m * n + 1, 0.0);
      const auto& shifted = next[m - 1];
      for (std::size_t u = 0; u < shifted.size(); ++u) f[u + n] += shifted[u];
      const auto& kept = level[m];
      for (std::size_t u = 0; u < kept.size(); ++u) f[u] += kept[u];
      next[m] = std::move(f);
    }
    level = std::move(next);
  }
  return level[n_a];
}

namespace {

double exact_two_sided(double u_obs, std::size_t n_a, std::size_t n_b) {
  const auto counts = u_null_counts(n_a, n_b);
  const auto u = static_cast<std::size_t>(std::llround(u_obs));
  double total = 0.0, le = 0.0, ge = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    total += counts[k];
    if (k <= u) le += counts[k];
    if (k >= u) ge += counts[k];
  }
  return std::min(1.0, 2.0 * std::min(le, ge) / total);
}

}  // namespace

RankSumResult p_value(std::span<const double> a, std::span<const double> b, PValueMode mode) {
  auto rs = rank_sum_u(a, b);
  RankSumResult out;
  out.u_statistic = rs.u_a;
  out.rank_sum = rs.rank_sum_a;
  out.tie_groups = rs.tie_groups;

  const auto na = static_cast<double>(a.size());
  const auto nb = static_cast<double>(b.size());
  const double n = na + nb;
  const double mean = 0.5 * na * nb;
  double tie_term = 0.0;
  for (const auto t : rs.tie_groups) {
    const auto td = static_cast<double>(t);
    tie_term += td * td * td - td;
  }
  const double variance = na * nb * (n * n * n - n - tie_term) / (12.0 * n * (n - 1.0));
  const double sd = variance > 0.0 ? std::sqrt(variance) : 0.0;

  const bool tied = !rs.tie_groups.empty();
  bool use_exact = false;
  switch (mode) {
    case PValueMode::exact:
      if (tied) throw Error(ErrorKind::exact_with_ties, "exact rank-sum distribution requires tie-free samples");
      use_exact = true;
      break;
    case PValueMode::normal: use_exact = false; break;
    case PValueMode::automatic: use_exact = !tied && a.size() + b.size() <= 20; break;
  }

  const double diff = rs.u_a - mean;
  if (use_exact) {
    out.method = PValueMethod::exact;
    out.z_value = sd > 0.0 ? diff / sd : 0.0;
    out.p_two_sided = exact_two_sided(rs.u_a, a.size(), b.size());
    return out;
  }
  out.method = PValueMethod::normal_approx;
  if (!(sd > 0.0)) {
    out.z_value = 0.0;
    out.p_two_sided = 1.0;
    return out;
  }
  const double corrected = std::max(std::abs(diff) - 0.5, 0.0);
  out.z_value = std::copysign(corrected / sd, diff);
  out.p_two_sided = std::min(1.0, std::erfc(corrected / sd / std::sqrt(2.0)));
  return out;
}

GroupComparison compare_groups(std::span<const double> cut_in, std::span<const double> other) {
  if (cut_in.empty()) throw Error(ErrorKind::empty_sample, "cut-in group is empty");
  if (other.empty()) throw Error(ErrorKind::empty_sample, "other lane-change group is empty");
  return {summarize(cut_in), summarize(other), p_value(cut_in, other, PValueMode::automatic)};
}

}  // namespace cutin
