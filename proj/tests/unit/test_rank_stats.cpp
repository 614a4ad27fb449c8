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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "cutin/error.hpp"
#include "cutin/rank_stats.hpp"

using namespace cutin;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::io_error;
}

/// Two-sided exact p by listing every subset of positions that a could take.
double enumerate_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled(a);
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::sort(pooled.begin(), pooled.end());
  const std::size_t n = pooled.size();
  auto u_of = [&](unsigned mask) {
    double u = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1U)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!(mask >> j & 1U) && pooled[j] < pooled[i]) u += 1.0;
      }
    }
    return u;
  };
  double u_obs = 0.0;
  for (const double x : a) {
    for (const double y : b) u_obs += y < x ? 1.0 : 0.0;
  }
  double le = 0.0, ge = 0.0, total = 0.0;
  for (unsigned mask = 0; mask < (1U << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != a.size()) continue;
    const double u = u_of(mask);
    total += 1.0;
    le += u <= u_obs ? 1.0 : 0.0;
    ge += u >= u_obs ? 1.0 : 0.0;
  }
  return std::min(1.0, 2.0 * std::min(le, ge) / total);
}

}  // namespace

TEST_CASE("summarize") {
  const std::vector<double> twos{2, 2, 2};
  auto s = summarize(twos);
  CHECK(s.n == 3);
  CHECK(s.mean == 2.0);
  CHECK(s.std == 0.0);
  const std::vector<double> ramp{1, 2, 3};
  s = summarize(ramp);
  CHECK(s.mean == 2.0);
  CHECK(s.std == doctest::Approx(1.0));
  const std::vector<double> one{4.5};
  CHECK(summarize(one).std == 0.0);
  CHECK(kind_of([] { (void)summarize(std::vector<double>{}); }) == ErrorKind::empty_sample);
}

TEST_CASE("rank_sum_u") {
  const std::vector<double> a{1, 2}, b{3, 4};
  const auto r = rank_sum_u(a, b);
  CHECK(r.rank_sum_a == 3.0);
  CHECK(r.u_a == 0.0);
  CHECK(r.tie_groups.empty());

  const std::vector<double> ones{1, 1};
  const auto t = rank_sum_u(ones, ones);
  CHECK(t.rank_sum_a == 5.0);
  CHECK(t.u_a == 2.0);
  CHECK(t.tie_groups == std::vector<std::size_t>{4});

  const std::vector<double> c{3, 1, 4, 1, 5};
  CHECK(rank_sum_u(c, c).u_a == 12.5);
  CHECK(kind_of([&] { (void)rank_sum_u(a, std::vector<double>{}); }) == ErrorKind::empty_sample);
}

TEST_CASE("p_value examples") {
  const std::vector<double> a{1, 2}, b{3, 4};
  const auto r = p_value(a, b, PValueMode::exact);
  CHECK(r.p_two_sided == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(r.method == PValueMethod::exact);
  CHECK(p_value(a, b).method == PValueMethod::exact);

  const std::vector<double> same{5, 5, 5};
  CHECK(p_value(same, same).p_two_sided == 1.0);
  CHECK(p_value(same, same, PValueMode::normal).p_two_sided == 1.0);

  const std::vector<double> x{1}, y{2};
  CHECK(p_value(x, y, PValueMode::exact).p_two_sided == 1.0);

  const std::vector<double> tied{1, 2, 2};
  CHECK(kind_of([&] { (void)p_value(tied, b, PValueMode::exact); }) == ErrorKind::exact_with_ties);
  CHECK(p_value(tied, b).method == PValueMethod::normal_approx);
}

TEST_CASE("automatic mode switches at 20 values") {
  std::vector<double> a(10), b(10);
  std::iota(a.begin(), a.end(), 0.0);
  std::iota(b.begin(), b.end(), 10.0);
  CHECK(p_value(a, b).method == PValueMethod::exact);
  b.push_back(100.0);
  CHECK(p_value(a, b).method == PValueMethod::normal_approx);
}

TEST_CASE("normal approximation by hand") {
  // U = 0 with n_a = n_b = 5: mean 12.5, variance 25 * 11 / 12.
  const std::vector<double> a{1, 2, 3, 4, 5}, b{6, 7, 8, 9, 10};
  const auto r = p_value(a, b, PValueMode::normal);
  const double z = (0.0 - 12.5 + 0.5) / std::sqrt(25.0 * 11.0 / 12.0);
  CHECK(r.z_value == doctest::Approx(z).epsilon(1e-12));
  CHECK(r.p_two_sided == doctest::Approx(std::erfc(-z / std::sqrt(2.0))).epsilon(1e-12));
}

TEST_CASE("u_null_counts") {
  const auto c = u_null_counts(2, 2);
  CHECK(c == std::vector<double>{1, 1, 2, 1, 1});
  const auto big = u_null_counts(6, 7);
  CHECK(std::accumulate(big.begin(), big.end(), 0.0) == 1716.0);
  for (std::size_t u = 0; u < big.size(); ++u) CHECK(big[u] == big[big.size() - 1 - u]);
}

TEST_CASE("exact p agrees with enumeration") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t na = 1 + rng() % 6, nb = 1 + rng() % 6;
    std::vector<double> values(40);
    std::iota(values.begin(), values.end(), 0.0);
    std::shuffle(values.begin(), values.end(), rng);
    std::vector<double> a(values.begin(), values.begin() + static_cast<long>(na));
    std::vector<double> b(values.begin() + static_cast<long>(na), values.begin() + static_cast<long>(na + nb));
    CHECK(p_value(a, b, PValueMode::exact).p_two_sided == doctest::Approx(enumerate_p(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("symmetry and invariance") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> a(3 + rng() % 20), b(3 + rng() % 20);
    for (auto& x : a) x = d(rng) + 0.4;
    for (auto& x : b) x = d(rng);
    const auto ab = p_value(a, b);
    const auto ba = p_value(b, a);
    CHECK(ab.u_statistic + ba.u_statistic == doctest::Approx(double(a.size() * b.size())));
    CHECK(ab.p_two_sided == doctest::Approx(ba.p_two_sided).epsilon(1e-12));

    auto ta = a, tb = b;
    for (auto& x : ta) x = std::exp(x);
    for (auto& x : tb) x = std::exp(x);
    const auto t = p_value(ta, tb);
    CHECK(t.u_statistic == ab.u_statistic);
    CHECK(t.p_two_sided == ab.p_two_sided);

    auto shifted = a;
    for (auto& x : shifted) x += 0.25;
    CHECK(rank_sum_u(b, shifted).u_a <= rank_sum_u(b, a).u_a);
    CHECK(ab.p_two_sided >= 0.0);
    CHECK(ab.p_two_sided <= 1.0);
  }
}

TEST_CASE("compare_groups") {
  const std::vector<double> c{1, 2, 3}, o{10, 11, 12, 13};
  const auto g = compare_groups(c, o);
  CHECK(g.cut_in.n == 3);
  CHECK(g.other.mean == 11.5);
  CHECK(g.test.u_statistic == 0.0);
  CHECK(g.test.method == PValueMethod::exact);
  CHECK(kind_of([&] { (void)compare_groups(c, std::vector<double>{}); }) == ErrorKind::empty_sample);
}
