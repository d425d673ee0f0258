// Copyright 2026 The magnet Authors.
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

#ifndef MAGNET_INIT_HPP_
#define MAGNET_INIT_HPP_

#include <cmath>
#include <cstddef>

#include "magnet/rng.hpp"
#include "magnet/tensor.hpp"

namespace magnet {

/// sqrt(6) / sqrt(fan_in + fan_out).
inline double xavier_bound(std::size_t fan_in, std::size_t fan_out) {
  return std::sqrt(6.0) / std::sqrt(static_cast<double>(fan_in + fan_out));
}

/// rows x cols matrix, i.i.d. uniform within +-xavier_bound(rows, cols).
inline Tensor xavier_uniform(std::size_t rows, std::size_t cols, Rng& rng) {
  const double bound = xavier_bound(rows, cols);
  Tensor t(rows, cols);
  for (double& v : t.data()) v = rng.uniform(-bound, bound);
  return t;
}

}  // namespace magnet

#endif  // MAGNET_INIT_HPP_
