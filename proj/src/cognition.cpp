/*
 * Copyright 2026 The orchsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "orchsim/cognition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace orchsim {

namespace {

// C(n, k) for n <= 20; exact in double well within this range.
double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return std::round(r);
}

}  // namespace

Attribution shapley_exact(const CharacteristicFn& cf) {
  require(cf.n <= 20, Errc::too_many_features,
          std::to_string(cf.n) + " features; enumeration bound is 20");
  invariant(cf.n >= 0, "negative player count");
  invariant(cf.n == 0 || bool(cf.v), "characteristic function not set");

  Attribution out;
  out.phi.assign(std::size_t(cf.n), 0.0);
  if (cf.n == 0) return out;

  const std::uint32_t full = (std::uint32_t(1) << cf.n) - 1;
  std::vector<double> weight(std::size_t(cf.n), 0.0);
  for (int s = 0; s < cf.n; ++s) {
    weight[std::size_t(s)] = 1.0 / (double(cf.n) * binom(cf.n - 1, s));
  }

  for (std::uint32_t subset = 0; subset <= full; ++subset) {
    int size = std::popcount(subset);
    if (size == cf.n) continue;
    double base = cf.v(subset);
    double w = weight[std::size_t(size)];
    for (int i = 0; i < cf.n; ++i) {
      std::uint32_t bit = std::uint32_t(1) << i;
      if (subset & bit) continue;
      out.phi[std::size_t(i)] += w * (cf.v(subset | bit) - base);
    }
  }
  return out;
}

Explanation explain_decision(const std::string& decision,
                             const std::vector<FeatureTerm>& terms,
                             const std::function<double(double)>& combine) {
  CharacteristicFn cf;
  cf.n = int(terms.size());
  cf.v = [&terms, &combine](std::uint32_t subset) {
    double sum = 0.0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (subset & (std::uint32_t(1) << i)) sum += terms[i].value;
    }
    return combine ? combine(sum) : sum;
  };
  Attribution attr = shapley_exact(cf);

  Explanation ex;
  ex.decision = decision;
  ex.outcome = cf.full();
  for (std::size_t i = 0; i < terms.size(); ++i) {
    ex.ranked.emplace_back(terms[i].name, attr.phi[i]);
  }
  std::stable_sort(ex.ranked.begin(), ex.ranked.end(),
                   [](const auto& a, const auto& b) {
                     double ma = std::fabs(a.second), mb = std::fabs(b.second);
                     if (ma != mb) return ma > mb;
                     return a.first < b.first;
                   });
  return ex;
}

DriftReport detect_drift(const std::vector<double>& reference,
                         const std::vector<double>& current, double k) {
  require(!reference.empty() && !current.empty(), Errc::empty_window,
          "drift test needs non-empty reference and current windows");
  auto mean = [](const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / double(xs.size());
  };
  double ref_mean = mean(reference);
  double var = 0.0;
  for (double x : reference) var += (x - ref_mean) * (x - ref_mean);
  var /= double(reference.size());  // population variance

  DriftReport r;
  r.mean_shift = mean(current) - ref_mean;
  r.threshold = k * std::sqrt(var);
  r.drifted = std::fabs(r.mean_shift) > r.threshold;
  return r;
}

}  // namespace orchsim
