// tests/gradcheck.hpp

// Copyright 2026  The adaptsv Authors

// See LICENSE at the top of the source tree for clarification regarding
// multiple authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Central finite differences against an analytic gradient.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace gradcheck {

// Relative error with an absolute floor for entries that are numerically
// zero on both sides.
inline double rel_error(double analytic, double numeric, double floor = 1e-7) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

// Perturbs each entry of `x` by +/-h, evaluates `f`, restores the entry and
// returns the worst relative error against `analytic`. Entries more than six
// orders of magnitude below the largest gradient entry are compared against
// that scale instead of their own, since central differences cannot resolve
// them (round-off on the loss is about 1e-16 * |loss| / h).
inline double worst_error(std::vector<double>& x, const std::vector<double>& analytic,
                          const std::function<double()>& f, double h = 1e-5) {
  double scale = 0.0;
  for (double a : analytic) scale = std::max(scale, std::abs(a));
  const double floor = std::max(1e-7, 1e-6 * scale);
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = f();
    x[i] = saved - h;
    const double down = f();
    x[i] = saved;
    worst = std::max(worst, rel_error(analytic[i], (up - down) / (2 * h), floor));
  }
  return worst;
}

}  // namespace gradcheck
