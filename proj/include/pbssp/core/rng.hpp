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

#include <cmath>
#include <cstdint>
#include <random>

#include "pbssp/core/types.hpp"

namespace pbssp {

using Rng = std::mt19937_64;

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// Independent stream keyed by (master, stream); does not depend on how many
// other streams exist or in which order they are created.
inline Rng make_stream(std::uint64_t master, std::uint64_t stream) {
  return Rng(detail::splitmix64(detail::splitmix64(master) ^ detail::splitmix64(stream + 0x632be59bd9b4e019ULL)));
}

// Child stream seeded from one draw of the parent.
inline Rng fork(Rng& parent) { return Rng(detail::splitmix64(parent())); }

inline double standard_normal(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return n(rng);
}

// Gamma variable with a prescribed mean and variance. When mean <= 0 the
// distribution is shifted so that the shape stays positive: a Gamma with mean
// sqrt(var) and variance var is drawn and moved by (mean - sqrt(var)).
struct GammaLaw {
  double shape = 1.0;
  double scale = 1.0;
  double shift = 0.0;

  static GammaLaw from_moments(double mean, double var) {
    if (!(var > 0.0)) throw DomainError("gamma noise needs a positive variance");
    GammaLaw g;
    double base_mean = mean;
    if (!(mean > 0.0)) {
      base_mean = std::sqrt(var);
      g.shift = mean - base_mean;
    }
    g.shape = base_mean * base_mean / var;
    g.scale = var / base_mean;
    return g;
  }
  double mean() const { return shape * scale + shift; }

  double draw(Rng& rng) const {
    std::gamma_distribution<double> d(shape, scale);
    return d(rng) + shift;
  }
  // Mean of n independent draws, sampled exactly through the sum of gammas.
  double draw_mean(std::size_t n, Rng& rng) const {
    const double dn = static_cast<double>(n);
    std::gamma_distribution<double> d(shape * dn, scale / dn);
    return d(rng) + shift;
  }
};

}  // namespace pbssp
