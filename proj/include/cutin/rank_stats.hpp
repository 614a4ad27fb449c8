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

// Descriptive statistics and the Wilcoxon rank-sum / Mann-Whitney U test.
//
// U for sample a counts the (a_i, b_j) pairs with a_i > b_j, ties counting
// one half; it equals rank_sum_a - n_a (n_a + 1) / 2 with mid-ranks.
// Two-sided p-values come either from the exact permutation distribution
// of U (tie-free samples only) or from the normal approximation with a
// continuity correction and the tie-corrected variance.

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace cutin {

struct SampleSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  ///< sample standard deviation, n - 1 denominator; 0 for n == 1
};

/// Throws Error(empty_sample) for an empty sample.
SampleSummary summarize(std::span<const double> sample);

struct RankSum {
  double u_a = 0.0;
  double rank_sum_a = 0.0;
  std::vector<std::size_t> tie_groups;  ///< sizes of tied groups (size >= 2) in the pooled sample
};

RankSum rank_sum_u(std::span<const double> a, std::span<const double> b);

enum class PValueMode { automatic, exact, normal };
enum class PValueMethod { exact, normal_approx };

std::string_view to_string(PValueMethod m);

struct RankSumResult {
  double u_statistic = 0.0;  ///< U of the first sample
  double rank_sum = 0.0;     ///< rank sum of the first sample
  double z_value = 0.0;
  double p_two_sided = 1.0;
  PValueMethod method = PValueMethod::normal_approx;
  std::vector<std::size_t> tie_groups;
};

/// Automatic mode picks the exact distribution when n_a + n_b <= 20 and no
/// value is tied, otherwise the normal approximation. Exact mode on tied
/// data throws Error(exact_with_ties).
RankSumResult p_value(std::span<const double> a, std::span<const double> b,
                      PValueMode mode = PValueMode::automatic);

/// Number of ways each U value arises when n_a labels are placed among
/// n_a + n_b distinct ranks; index u holds the count for U = u.
std::vector<double> u_null_counts(std::size_t n_a, std::size_t n_b);

struct GroupComparison {
  SampleSummary cut_in;
  SampleSummary other;
  RankSumResult test;
};

/// Summaries of both groups plus the automatic-mode rank-sum test.
GroupComparison compare_groups(std::span<const double> cut_in, std::span<const double> other);

}  // namespace cutin
