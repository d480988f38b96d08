// Copyright 2026 The pbssp Authors.
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "pbssp/core/types.hpp"

namespace pbssp::robust {

struct EuclideanMetric {
  double operator()(const Vec& a, const Vec& b) const { return (a - b).norm(); }
  double operator()(double a, double b) const { return std::abs(a - b); }
};

// rho(u, v) = |<g, u - v>| for a fixed direction g.
struct InnerProductMetric {
  Vec g;
  double operator()(const Vec& a, const Vec& b) const { return std::abs(g.dot(a - b)); }
};

struct ExtractResult {
  std::vector<std::size_t> indices;  // 0-based, ascending
  std::vector<double> radii;
  double median_radius = 0.0;
};

// Majority-ball extraction. r_j is the smallest radius whose closed ball
// around point j holds more than m/2 of the points (the (floor(m/2)+1)-th
// smallest distance, self included); the returned set holds every point whose
// radius is at most the ceil(m/2)-th smallest radius.
template <class Point, class Metric>
ExtractResult extract(std::span<const Point> points, const Metric& rho) {
  const std::size_t m = points.size();
  if (m == 0) throw DomainError("extract needs at least one point");
  const std::size_t order = m / 2;  // 0-based position of the (floor(m/2)+1)-th entry
  ExtractResult out;
  out.radii.resize(m);
  std::vector<double> dist(m);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t t = 0; t < m; ++t) dist[t] = t == j ? 0.0 : rho(points[j], points[t]);
    std::nth_element(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(order), dist.end());
    out.radii[j] = dist[order];
  }
  std::vector<double> sorted = out.radii;
  std::sort(sorted.begin(), sorted.end());
  out.median_radius = sorted[(m + 1) / 2 - 1];
  for (std::size_t k = 0; k < m; ++k)
    if (out.radii[k] <= out.median_radius) out.indices.push_back(k);
  return out;
}

template <class Point, class Metric>
ExtractResult extract(const std::vector<Point>& points, const Metric& rho) {
  return extract(std::span<const Point>(points.data(), points.size()), rho);
}

// The point at the smallest index returned by extract.
template <class Point, class Metric>
std::pair<Point, std::size_t> robust_select(const std::vector<Point>& points, const Metric& rho) {
  const ExtractResult r = extract(points, rho);
  const std::size_t k = r.indices.front();
  return {points[k], k};
}

}  // namespace pbssp::robust
