// Copyright 2026 The HaarLab Authors. All Rights Reserved.
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


#ifndef HAARLAB_CONFIG_HPP_
#define HAARLAB_CONFIG_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "haarlab/experiments.hpp"
#include "haarlab/grid.hpp"
#include "haarlab/kernels.hpp"
#include "json.hpp"

namespace haarlab {

// Key-value run configuration. Lines are "key = value", '#' starts a comment.
// s, p, q accept comma lists; their Cartesian product forms the norm list.
struct RunConfig {
  GridSpec grid{1, 14, 1};
  KernelOptions kernel;
  std::vector<double> s_list = {1.0};
  std::vector<double> p_list = {0.8};
  std::vector<double> q_list = {1.0};
  double A = 0.0;
  int K = -1;  // -1: min(8, J - 2)
  std::vector<int> N_list;
  std::vector<std::string> probes = {"all"};
  uint64_t seed = 1;
  int n_draws = 16;
  TruncationPolicy trunc;
  double tol_power = 0.15;
  double tol_exp = 0.1;
  double min_r2 = 0.9;
  std::string model = "auto";
  std::string out = "out";
  // Generator and operator selection.
  std::string generator = "density_failure";
  std::string op = "E";
  int N = 4;
  int j = 3;
  int kappa = 2;
  int sigma = 1;
  double band = 8.0;
  std::string kind = "F";

  std::vector<SmoothnessParams> NormList() const;
  std::vector<int> EffectiveNs() const;
  void Validate() const;
};

// Sets one key; throws HaarlabError(kValidation) on unknown keys or bad values.
void ApplyConfigKey(RunConfig *cfg, const std::string &key, const std::string &value);
RunConfig ParseConfig(std::istream &is);
// Accepts a key-value file or a JSON run manifest (its "config" object).
RunConfig LoadConfig(const std::string &path);

nlohmann::json ConfigToJson(const RunConfig &cfg);
RunConfig ConfigFromJson(const nlohmann::json &j);

}  // namespace haarlab

#endif  // HAARLAB_CONFIG_HPP_
