// Copyright 2026 The Fourswap Authors
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

#ifndef FOURSWAP_SRC_TYPES_HPP_
#define FOURSWAP_SRC_TYPES_HPP_

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

namespace fsw {

using Metadata = std::vector<std::pair<std::string, std::string>>;

// Sampled probability (or count-derived frequency) against a delay axis.
struct FringeTrace {
  std::vector<double> tau;
  std::vector<double> value;
  // Empty for model traces; one standard error per point otherwise.
  std::vector<double> error;
  Metadata meta;
};

// Dense 2D map: values(i, j) at (x[i], y[j]).
struct Map2D {
  std::string x_name;
  std::string y_name;
  std::vector<double> x;
  std::vector<double> y;
  Eigen::MatrixXd values;
  Metadata meta;
};

}  // namespace fsw

#endif  // FOURSWAP_SRC_TYPES_HPP_
