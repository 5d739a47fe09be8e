// include/adaptsv/svg_plot.hpp

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

// Minimal SVG line plots for threshold sweeps and precision-recall curves.

#include <string>
#include <vector>

#include "adaptsv/group_detector.hpp"
#include "adaptsv/scoring.hpp"

namespace adaptsv {

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label = "threshold";
  std::string y_label = "rate";
  std::vector<PlotSeries> series;
  int width = 640;
  int height = 480;
};

// One <polyline> per series. Throws DataError on no series or an empty or
// ragged series.
std::string emit_plot(const PlotSpec& spec);

// FAR and FRR against threshold. The supremum point is kept.
std::vector<PlotSeries> det_series(const DetCurve& curve, const std::string& prefix = "");
// Precision against recall.
PlotSeries pr_series(const std::vector<PrPoint>& curve, const std::string& name = "precision");

}  // namespace adaptsv
