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


// haarlab: command-line front end.
//
//   haarlab norm  --gen density_failure --s 1 --p 0.8 --q 1 --out out/
//   haarlab avg   --gen band --op E --N 4
//   haarlab gen   --gen gN --N 16
//   haarlab rate  --s 1.25 --p 0.9 --q 2 --model exponential
//   haarlab scan  --config scan.cfg
//   haarlab check [--fault mask]
//
// Exit codes: 0 success, 2 validation error, 3 tolerance failure.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "haarlab/config.hpp"
#include "haarlab/examples.hpp"
#include "haarlab/experiments.hpp"
#include "haarlab/haar.hpp"
#include "haarlab/io.hpp"
#include "haarlab/kernels.hpp"
#include "haarlab/norms.hpp"

namespace {

using haarlab::ErrorKind;
using haarlab::GridField;
using haarlab::HaarlabError;
using haarlab::KernelBank;
using haarlab::RunConfig;

constexpr int kExitValidation = 2;
constexpr int kExitTolerance = 3;

struct Overrides {
  std::string config, seed, out, d, J, K, N, s, p, q, model, gen, op, kind, fault, in, j, kappa, sigma, band, probes,
      n_list, draws;
};

void AddCommon(CLI::App *sub, Overrides *o) {
  sub->add_option("--config", o->config, "key-value config file or JSON run manifest");
  sub->add_option("--seed", o->seed, "base seed");
  sub->add_option("--out", o->out, "output directory");
  sub->add_option("--d", o->d, "dimension");
  sub->add_option("--J", o->J, "grid level");
  sub->add_option("--K", o->K, "finest local-mean level");
  sub->add_option("--N", o->N, "averaging / generator level");
  sub->add_option("--s", o->s, "smoothness (comma list)");
  sub->add_option("--p", o->p, "integrability (comma list, inf allowed)");
  sub->add_option("--q", o->q, "fine index (comma list, inf allowed)");
  sub->add_option("--model", o->model, "auto, power or exponential");
  sub->add_option("--gen", o->gen, "generator name");
  sub->add_option("--in", o->in, "input field (binary with .hdr sidecar)");
  sub->add_option("--op", o->op, "operator: E, T, S, P or I");
  sub->add_option("--kind", o->kind, "F or B");
  sub->add_option("--j", o->j, "fractal level");
  sub->add_option("--kappa", o->kappa, "packet kappa");
  sub->add_option("--sigma", o->sigma, "packet sigma");
  sub->add_option("--band", o->band, "band limit for random fields");
  sub->add_option("--probes", o->probes, "probe ids (comma list) or all");
  sub->add_option("--N-list", o->n_list, "N values, e.g. 2..10");
  sub->add_option("--draws", o->draws, "sign draws for g_N");
}

RunConfig Resolve(const Overrides &o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : haarlab::LoadConfig(o.config);
  const std::pair<const char *, const std::string *> keys[] = {
      {"seed", &o.seed},   {"out", &o.out},     {"d", &o.d},         {"J", &o.J},         {"K", &o.K},         {"N", &o.N},
      {"s", &o.s},         {"p", &o.p},         {"q", &o.q},         {"model", &o.model}, {"generator", &o.gen},
      {"op", &o.op},       {"kind", &o.kind},   {"j", &o.j},         {"kappa", &o.kappa}, {"sigma", &o.sigma},
      {"band", &o.band},   {"probes", &o.probes}, {"N_list", &o.n_list}, {"n_draws", &o.draws}};
  for (const auto &[key, val] : keys)
    if (!val->empty()) haarlab::ApplyConfigKey(&cfg, key, *val);
  cfg.Validate();
  return cfg;
}

nlohmann::json Manifest(const std::string &command, const RunConfig &cfg, const KernelBank *bank) {
  nlohmann::json m;
  m["tool"] = "haarlab";
  m["command"] = command;
  m["config"] = haarlab::ConfigToJson(cfg);
  m["seeds"] = {{"base", cfg.seed}};
  m["tolerances"] = {{"power", cfg.tol_power},
                     {"exponential", cfg.tol_exp},
                     {"min_r2", cfg.min_r2},
                     {"region", haarlab::kRegionTol}};
  if (bank) {
    m["kernel_bank"] = {{"hash", bank->Hash()},
                        {"width", bank->width()},
                        {"fourier_floor", bank->fourier_floor()},
                        {"moment_max_abs", bank->moments().max_abs},
                        {"moment_max_rel", bank->moments().max_rel}};
  }
  return m;
}

std::string Finish(const std::string &command, const RunConfig &cfg, const KernelBank *bank) {
  std::filesystem::create_directories(cfg.out);
  nlohmann::json m = Manifest(command, cfg, bank);
  // The output location does not take part in the hash.
  nlohmann::json keyed = m;
  keyed["config"].erase("out");
  const std::string hash = haarlab::ManifestHash(keyed);
  m["manifest_hash"] = hash;
  haarlab::WriteJson(cfg.out + "/manifest_" + command + ".json", m);
  return hash;
}

std::ofstream OpenCsv(const RunConfig &cfg, const std::string &name, const std::string &hash) {
  std::ofstream os(cfg.out + "/" + name);
  if (!os) throw HaarlabError(ErrorKind::kValidation, "cannot write " + cfg.out + "/" + name);
  os.precision(17);
  os << "# manifest " << hash << "\n";
  return os;
}

KernelBank BuildBank(const RunConfig &cfg) { return KernelBank::Build(cfg.kernel, cfg.grid); }

GridField Generate(const RunConfig &cfg, const KernelBank &bank) {
  const std::string &g = cfg.generator;
  const auto &spec = cfg.grid;
  if (g == "zero") {
    GridField f(spec);
    f.compact = true;
    return f;
  }
  if (g == "density_failure") return haarlab::DensityFailureF(spec);
  if (g == "weierstrass") return haarlab::WeierstrassPacket(cfg.N, haarlab::RademacherSigns(cfg.seed), spec);
  if (g == "gN") return haarlab::CounterexampleGN(cfg.N, cfg.q_list.front(), cfg.n_draws, cfg.seed, bank).g;
  if (g == "tensor_gN") {
    const haarlab::GridSpec s1{1, spec.J, spec.B};
    const KernelBank b1 = KernelBank::Build(cfg.kernel, s1);
    return haarlab::TensorGN(haarlab::CounterexampleGN(cfg.N, cfg.q_list.front(), cfg.n_draws, cfg.seed, b1).g, spec);
  }
  if (g == "band") return haarlab::RandomBandLimited(spec, cfg.band, cfg.seed);
  if (g == "unc") return haarlab::UncPacket(cfg.kappa, cfg.sigma, cfg.N, spec);
  if (g.rfind("fractal:", 0) == 0)
    return haarlab::FractalFamily(haarlab::ParseFractalKind(g.substr(8)),
                                  g.find("sum") != std::string::npos ? cfg.N : cfg.j, spec);
  throw HaarlabError(ErrorKind::kValidation, "unknown generator '" + g + "'");
}

GridField Input(const Overrides &o, const RunConfig &cfg, const KernelBank &bank) {
  if (!o.in.empty()) {
    GridField f = haarlab::ReadFieldBinary(o.in);
    if (f.spec != cfg.grid) throw HaarlabError(ErrorKind::kValidation, "input field grid differs from config grid");
    return f;
  }
  return Generate(cfg, bank);
}

void WriteField(const RunConfig &cfg, const std::string &stem, const GridField &f, const std::string &hash) {
  haarlab::WriteFieldBinary(cfg.out + "/" + stem + ".bin", f);
  if (f.spec.d == 1) {
    std::ofstream os = OpenCsv(cfg, stem + ".csv", hash);
    haarlab::WriteFieldCsv(os, f);
  }
}

int CmdNorm(const Overrides &o) {
  const RunConfig cfg = Resolve(o);
  const KernelBank bank = BuildBank(cfg);
  const GridField f = Input(o, cfg, bank);
  const std::string hash = Finish("norm", cfg, &bank);
  std::ofstream os = OpenCsv(cfg, "norm.csv", hash);
  for (const auto &prm : cfg.NormList()) {
    const haarlab::NormReport r = cfg.kind == "B" ? haarlab::BesovNorm(f, prm, bank) : haarlab::TlNorm(f, prm, bank);
    haarlab::WriteNormReportCsv(os, r);
    std::printf("%s s=%g p=%g q=%g K=%d value=%.17g\n", r.kind.c_str(), prm.s, prm.p, prm.q, prm.K, r.value);
  }
  return 0;
}

GridField ApplyOp(const RunConfig &cfg, const GridField &f) {
  const int N = cfg.N;
  if (cfg.op == "E") return haarlab::DyadicAverage(f, N);
  if (cfg.op == "T") return haarlab::TMask(f, N, haarlab::MaskA::Constant(1.0));
  if (cfg.op == "I") return f;
  const haarlab::Enumeration e = haarlab::BuildCanonicalEnumeration(N, -cfg.grid.B, cfg.grid.B, cfg.grid.d);
  if (cfg.op == "S") return haarlab::PartialSum(f, e, e.markers[N]);
  return haarlab::ProjectionPE(f, e.items);
}

int CmdAvg(const Overrides &o) {
  const RunConfig cfg = Resolve(o);
  const KernelBank bank = BuildBank(cfg);
  const GridField f = Input(o, cfg, bank);
  const GridField g = ApplyOp(cfg, f);
  const std::string hash = Finish("avg", cfg, &bank);
  WriteField(cfg, "avg_" + cfg.op, g, hash);
  std::printf("op=%s N=%d max|out|=%.17g\n", cfg.op.c_str(), cfg.N, g.max_abs());
  return 0;
}

int CmdGen(const Overrides &o) {
  const RunConfig cfg = Resolve(o);
  const KernelBank bank = BuildBank(cfg);
  const GridField f = Generate(cfg, bank);
  const std::string hash = Finish("gen", cfg, &bank);
  WriteField(cfg, "gen", f, hash);
  std::printf("generator=%s max|f|=%.17g margin=%.6g\n", cfg.generator.c_str(), f.max_abs(), f.support_margin());
  return 0;
}

std::vector<haarlab::Probe> SelectProbes(const RunConfig &cfg, const KernelBank &bank) {
  haarlab::ProbeOptions po;
  po.seed = cfg.seed;
  po.gn_draws = cfg.n_draws;
  bool all = false;
  std::set<std::string> want;
  for (const auto &p : cfg.probes) {
    if (p == "all") all = true;
    if (p == "gN") po.include_gn = true;
    want.insert(p);
  }
  std::vector<haarlab::Probe> out;
  for (auto &p : haarlab::StandardProbes(cfg.grid, bank, po))
    if (all || want.count(p.id)) out.push_back(std::move(p));
  if (out.empty()) throw HaarlabError(ErrorKind::kValidation, "no probes selected");
  return out;
}

std::vector<haarlab::ScanRow> RunScan(const RunConfig &cfg, const KernelBank &bank) {
  std::vector<haarlab::ScanTuple> tuples;
  for (const auto &prm : cfg.NormList()) tuples.push_back({prm.s, prm.p, prm.q});
  haarlab::ScanOptions so;
  so.Ns = cfg.EffectiveNs();
  so.trunc = cfg.trunc;
  so.tol_power = cfg.tol_power;
  so.tol_exp = cfg.tol_exp;
  so.min_r2 = cfg.min_r2;
  auto rows = haarlab::RegionScan(tuples, SelectProbes(cfg, bank), so, bank);
  if (cfg.model != "auto") {
    const auto model = cfg.model == "power" ? haarlab::RateModel::kPower : haarlab::RateModel::kExponential;
    for (auto &r : rows) {
      if (!r.error.empty() || r.fit.samples.size() < 3) continue;
      r.fit = haarlab::FitRate(r.fit.samples, model);
      const double tol = model == haarlab::RateModel::kPower ? so.tol_power : so.tol_exp;
      const bool need_r2 = std::isfinite(r.predicted) && r.predicted != 0.0;
      r.agree = std::isfinite(r.predicted) && std::abs(r.fit.exponent - r.predicted) <= tol &&
                (!need_r2 || r.fit.r2 >= so.min_r2);
    }
  }
  return rows;
}

int CmdRateOrScan(const Overrides &o, const std::string &name) {
  const RunConfig cfg = Resolve(o);
  const KernelBank bank = BuildBank(cfg);
  const auto rows = RunScan(cfg, bank);
  const std::string hash = Finish(name, cfg, &bank);
  std::ofstream os = OpenCsv(cfg, name + ".csv", hash);
  haarlab::WriteScanCsv(os, rows);
  bool all_agree = true;
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto &r = rows[i];
    std::vector<std::pair<double, double>> series;
    for (const auto &pt : r.points) series.emplace_back(pt.N, pt.ratio);
    haarlab::WritePlotData(cfg.out + "/" + name + "_" + std::to_string(i) + ".dat", series,
                           "manifest " + hash + " N ratio s=" + std::to_string(r.t.s) +
                               " p=" + std::to_string(r.t.p) + " q=" + std::to_string(r.t.q));
    std::printf("s=%g p=%g q=%g predicted=%s(%g) measured=%g r2=%.3f %s%s\n", r.t.s, r.t.p, r.t.q,
                haarlab::GrowthName(r.verdict.predicted_growth), r.predicted, r.fit.exponent, r.fit.r2,
                r.agree ? "agree" : "disagree", r.error.empty() ? "" : (" error: " + r.error).c_str());
    all_agree = all_agree && r.agree;
  }
  if (name == "rate" && !all_agree) return kExitTolerance;
  return 0;
}

int CmdCheck(const Overrides &o) {
  const RunConfig cfg = Resolve(o);
  const KernelBank bank = BuildBank(cfg);
  haarlab::IdentityOptions io;
  io.seed = cfg.seed;
  io.fault = o.fault;
  if (!io.fault.empty() && io.fault != "mask" && io.fault != "martingale" && io.fault != "support")
    throw HaarlabError(ErrorKind::kValidation, "unknown fault '" + io.fault + "'");
  const auto rep = haarlab::IdentitySuite(cfg.grid, bank, io);
  const std::string hash = Finish("check", cfg, &bank);
  std::ofstream os = OpenCsv(cfg, "check.csv", hash);
  haarlab::WriteIdentityCsv(os, rep);
  for (const auto &c : rep.checks)
    std::printf("%-16s %s residual=%.3e tol=%.1e\n", c.name.c_str(), c.pass ? "PASS" : "FAIL", c.residual, c.tol);
  return rep.ok() ? 0 : kExitTolerance;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"haarlab: Haar system experiments in Besov and Triebel-Lizorkin spaces"};
  app.require_subcommand(1);
  Overrides o;
  std::map<std::string, CLI::App *> subs;
  for (const char *name : {"norm", "avg", "gen", "rate", "scan", "check"}) {
    subs[name] = app.add_subcommand(name);
    AddCommon(subs[name], &o);
  }
  subs["norm"]->description("quasi-norm of a generated or loaded field");
  subs["avg"]->description("apply E_N, T_N, S_R or P_E and export the result");
  subs["gen"]->description("emit an example field");
  subs["rate"]->description("growth exponents of ||E_N|| lower bounds; exit 3 on disagreement");
  subs["scan"]->description("region scan over the product of the s, p, q lists");
  subs["check"]->description("exact-identity suite; exit 3 on a failed check");
  subs["check"]->add_option("--fault", o.fault, "inject a fault: mask, martingale or support");
  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitValidation;
  }
  try {
    if (subs["norm"]->parsed()) return CmdNorm(o);
    if (subs["avg"]->parsed()) return CmdAvg(o);
    if (subs["gen"]->parsed()) return CmdGen(o);
    if (subs["rate"]->parsed()) return CmdRateOrScan(o, "rate");
    if (subs["scan"]->parsed()) return CmdRateOrScan(o, "scan");
    if (subs["check"]->parsed()) return CmdCheck(o);
  } catch (const HaarlabError &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitValidation;
}
