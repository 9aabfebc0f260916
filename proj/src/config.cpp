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


#include "haarlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "haarlab/io.hpp"

namespace haarlab {

namespace {

std::string Trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitList(const std::string &v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double ParseReal(const std::string &key, const std::string &v) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception &) {
    throw HaarlabError(ErrorKind::kValidation, "key '" + key + "': not a number: " + v);
  }
}

long long ParseInt(const std::string &key, const std::string &v) {
  try {
    size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception &) {
    throw HaarlabError(ErrorKind::kValidation, "key '" + key + "': not an integer: " + v);
  }
}

std::vector<double> RealList(const std::string &key, const std::string &v) {
  std::vector<double> out;
  for (const auto &x : SplitList(v)) out.push_back(ParseReal(key, x));
  if (out.empty()) throw HaarlabError(ErrorKind::kValidation, "key '" + key + "': empty list");
  return out;
}

// a..b ranges are accepted as well as explicit lists.
std::vector<int> IntList(const std::string &key, const std::string &v) {
  std::vector<int> out;
  for (const auto &x : SplitList(v)) {
    const auto dots = x.find("..");
    if (dots != std::string::npos) {
      const int a = static_cast<int>(ParseInt(key, Trim(x.substr(0, dots))));
      const int b = static_cast<int>(ParseInt(key, Trim(x.substr(dots + 2))));
      for (int i = a; i <= b; ++i) out.push_back(i);
    } else {
      out.push_back(static_cast<int>(ParseInt(key, x)));
    }
  }
  return out;
}

std::string Join(const std::vector<std::string> &v) {
  std::string s;
  for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

}  // namespace

std::vector<SmoothnessParams> RunConfig::NormList() const {
  std::vector<SmoothnessParams> out;
  for (double s : s_list)
    for (double p : p_list)
      for (double q : q_list) {
        SmoothnessParams prm;
        prm.s = s;
        prm.p = p;
        prm.q = q;
        prm.A = A;
        prm.M = kernel.M;
        prm.K = K >= 0 ? K : std::min(8, grid.J - 2);
        out.push_back(prm);
      }
  return out;
}

std::vector<int> RunConfig::EffectiveNs() const {
  if (!N_list.empty()) return N_list;
  std::vector<int> out;
  const int top = grid.d == 1 ? std::min(10, grid.J - 4) : std::min(6, grid.J - 4);
  for (int n = 2; n <= top; ++n) out.push_back(n);
  return out;
}

void RunConfig::Validate() const {
  grid.Validate();
  if (kernel.M < 1) throw HaarlabError(ErrorKind::kValidation, "M must be >= 1");
  if (!(kernel.delta_min > 0.0)) throw HaarlabError(ErrorKind::kValidation, "delta_min must be positive");
  if (K > grid.J - 2 || K < -1) throw HaarlabError(ErrorKind::kValidation, "K must be -1 (auto) or in [0, J - 2]");
  for (const auto &prm : NormList()) prm.Validate(grid.d);
  for (int n : EffectiveNs())
    if (n < 0 || n > grid.J - 2) throw HaarlabError(ErrorKind::kValidation, "N_list entries must lie in [0, J-2]");
  if (n_draws < 1) throw HaarlabError(ErrorKind::kValidation, "n_draws must be >= 1");
  if (model != "auto" && model != "power" && model != "exponential")
    throw HaarlabError(ErrorKind::kValidation, "model must be auto, power or exponential");
  if (kind != "F" && kind != "B") throw HaarlabError(ErrorKind::kValidation, "kind must be F or B");
  if (op != "E" && op != "T" && op != "S" && op != "P" && op != "I")
    throw HaarlabError(ErrorKind::kValidation, "op must be one of E, T, S, P, I");
}

void ApplyConfigKey(RunConfig *c, const std::string &key, const std::string &value) {
  const std::string v = Trim(value);
  auto i = [&] { return static_cast<int>(ParseInt(key, v)); };
  if (key == "d") c->grid.d = i();
  else if (key == "J") c->grid.J = i();
  else if (key == "B") c->grid.B = i();
  else if (key == "M") c->kernel.M = i();
  else if (key == "delta_min") c->kernel.delta_min = ParseReal(key, v);
  else if (key == "eta0_inner") c->kernel.eta0.inner = ParseReal(key, v);
  else if (key == "eta0_outer") c->kernel.eta0.outer = ParseReal(key, v);
  else if (key == "s") c->s_list = RealList(key, v);
  else if (key == "p") c->p_list = RealList(key, v);
  else if (key == "q") c->q_list = RealList(key, v);
  else if (key == "A") c->A = ParseReal(key, v);
  else if (key == "K") c->K = i();
  else if (key == "N_list") c->N_list = IntList(key, v);
  else if (key == "probes") c->probes = SplitList(v);
  else if (key == "seed") c->seed = static_cast<uint64_t>(ParseInt(key, v));
  else if (key == "n_draws") c->n_draws = i();
  else if (key == "delta") c->trunc.delta = i();
  else if (key == "fixed_K") c->trunc.fixed_K = i();
  else if (key == "tol_power") c->tol_power = ParseReal(key, v);
  else if (key == "tol_exp") c->tol_exp = ParseReal(key, v);
  else if (key == "min_r2") c->min_r2 = ParseReal(key, v);
  else if (key == "model") c->model = v;
  else if (key == "out") c->out = v;
  else if (key == "generator") c->generator = v;
  else if (key == "op") c->op = v;
  else if (key == "N") c->N = i();
  else if (key == "j") c->j = i();
  else if (key == "kappa") c->kappa = i();
  else if (key == "sigma") c->sigma = i();
  else if (key == "band") c->band = ParseReal(key, v);
  else if (key == "kind") c->kind = v;
  else throw HaarlabError(ErrorKind::kValidation, "unknown config key '" + key + "'");
}

RunConfig ParseConfig(std::istream &is) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw HaarlabError(ErrorKind::kValidation, "config line " + std::to_string(lineno) + ": expected key = value");
    ApplyConfigKey(&cfg, Trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  cfg.Validate();
  return cfg;
}

RunConfig LoadConfig(const std::string &path) {
  if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    const nlohmann::json j = ReadJson(path);
    return ConfigFromJson(j.contains("config") ? j.at("config") : j);
  }
  std::ifstream is(path);
  if (!is) throw HaarlabError(ErrorKind::kValidation, "cannot open config " + path);
  return ParseConfig(is);
}

nlohmann::json ConfigToJson(const RunConfig &c) {
  using nlohmann::json;
  auto reals = [](const std::vector<double> &v) {
    json a = json::array();
    for (double x : v) a.push_back(EncodeReal(x));
    return a;
  };
  json j;
  j["grid"] = {{"d", c.grid.d}, {"J", c.grid.J}, {"B", c.grid.B}};
  j["kernel"] = {{"M", c.kernel.M},
                 {"delta_min", c.kernel.delta_min},
                 {"eta0_inner", c.kernel.eta0.inner},
                 {"eta0_outer", c.kernel.eta0.outer}};
  j["norm"] = {{"s", reals(c.s_list)}, {"p", reals(c.p_list)}, {"q", reals(c.q_list)}, {"A", c.A}, {"K", c.K}};
  j["experiment"] = {{"N_list", c.N_list},   {"probes", Join(c.probes)}, {"seed", c.seed},
                     {"n_draws", c.n_draws}, {"delta", c.trunc.delta},   {"fixed_K", c.trunc.fixed_K},
                     {"tol_power", c.tol_power}, {"tol_exp", c.tol_exp}, {"min_r2", c.min_r2},
                     {"model", c.model}};
  j["selection"] = {{"generator", c.generator}, {"op", c.op},       {"N", c.N},       {"j", c.j},
                    {"kappa", c.kappa},         {"sigma", c.sigma}, {"band", c.band}, {"kind", c.kind}};
  j["out"] = c.out;
  return j;
}

RunConfig ConfigFromJson(const nlohmann::json &j) {
  RunConfig c;
  try {
    const auto &g = j.at("grid");
    c.grid = GridSpec{g.at("d").get<int>(), g.at("J").get<int>(), g.at("B").get<int>()};
    const auto &k = j.at("kernel");
    c.kernel.M = k.at("M").get<int>();
    c.kernel.delta_min = k.at("delta_min").get<double>();
    c.kernel.eta0.inner = k.at("eta0_inner").get<double>();
    c.kernel.eta0.outer = k.at("eta0_outer").get<double>();
    const auto &n = j.at("norm");
    auto reals = [](const nlohmann::json &a) {
      std::vector<double> v;
      for (const auto &x : a) v.push_back(DecodeReal(x));
      return v;
    };
    c.s_list = reals(n.at("s"));
    c.p_list = reals(n.at("p"));
    c.q_list = reals(n.at("q"));
    c.A = n.at("A").get<double>();
    c.K = n.at("K").get<int>();
    const auto &e = j.at("experiment");
    c.N_list = e.at("N_list").get<std::vector<int>>();
    c.probes = SplitList(e.at("probes").get<std::string>());
    c.seed = e.at("seed").get<uint64_t>();
    c.n_draws = e.at("n_draws").get<int>();
    c.trunc.delta = e.at("delta").get<int>();
    c.trunc.fixed_K = e.at("fixed_K").get<int>();
    c.tol_power = e.at("tol_power").get<double>();
    c.tol_exp = e.at("tol_exp").get<double>();
    c.min_r2 = e.at("min_r2").get<double>();
    c.model = e.at("model").get<std::string>();
    const auto &s = j.at("selection");
    c.generator = s.at("generator").get<std::string>();
    c.op = s.at("op").get<std::string>();
    c.N = s.at("N").get<int>();
    c.j = s.at("j").get<int>();
    c.kappa = s.at("kappa").get<int>();
    c.sigma = s.at("sigma").get<int>();
    c.band = s.at("band").get<double>();
    c.kind = s.at("kind").get<std::string>();
    c.out = j.at("out").get<std::string>();
  } catch (const nlohmann::json::exception &ex) {
    throw HaarlabError(ErrorKind::kValidation, std::string("malformed config JSON: ") + ex.what());
  }
  c.Validate();
  return c;
}

}  // namespace haarlab
