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

#ifndef ORCHSIM_COGNITION_HPP
#define ORCHSIM_COGNITION_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "orchsim/common.hpp"

namespace orchsim {

/// Set function over decision features; subsets are bitmasks over n players.
/// Enumeration-exact attribution is limited to n <= 20.
struct CharacteristicFn {
  int n = 0;
  std::function<double(std::uint32_t)> v;

  double full() const { return v((std::uint32_t(1) << n) - 1); }
  double empty() const { return v(0); }
};

/// Per-feature attribution phi; efficiency ties the sum to v(N) - v(0).
struct Attribution {
  std::vector<double> phi;

  double total() const {
    double s = 0.0;
    for (double x : phi) s += x;
    return s;
  }
};

/// Exact Shapley decomposition by subset enumeration:
///   phi_i = sum over S not containing i of
///           (v(S u {i}) - v(S)) / (n * C(n-1, |S|)).
/// Efficiency, symmetry and dummy all hold. Throws TooManyFeatures for n > 20.
Attribution shapley_exact(const CharacteristicFn& cf);

struct FeatureTerm {
  std::string name;
  double value = 0.0;
};

struct Explanation {
  std::string decision;
  double outcome = 0.0;
  // Feature/attribution pairs sorted by |phi| descending, ties by name.
  std::vector<std::pair<std::string, double>> ranked;
};

/// Attributes a decision score made of additive terms; v(S) recomputes the
/// score with features outside S zeroed. `combine` maps the partial sum to
/// the score (identity for plain sums, a clamp for bounded scores).
Explanation explain_decision(
    const std::string& decision, const std::vector<FeatureTerm>& terms,
    const std::function<double(double)>& combine = nullptr);

struct DriftReport {
  double mean_shift = 0.0;
  double threshold = 0.0;
  bool drifted = false;
};

/// Mean-shift test: threshold is k times the population stddev of the
/// reference; a zero-variance reference flags any nonzero shift.
DriftReport detect_drift(const std::vector<double>& reference,
                         const std::vector<double>& current, double k = 3.0);

}  // namespace orchsim

#endif  // ORCHSIM_COGNITION_HPP
