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

#ifndef HAARLAB_KERNELS_HPP_
#define HAARLAB_KERNELS_HPP_

#include <memory>
#include <string>
#include <vector>

#include "haarlab/grid.hpp"

namespace haarlab {

enum class ExecPolicy { kSerial, kParallel };

// Radial cutoff: 1 on |xi| <= inner, 0 on |xi| >= outer.
struct Eta0Profile {
  double inner = 0.25;
  double outer = 0.375;
  double operator()(double r) const;
};

struct KernelOptions {
  int M = 5;
  // Shape parameter of the generating bump exp(-a / (1 - 4 x^2)).
  double shape_a = 10.0;
  double delta_min = 1e-3;
  Eta0Profile eta0;
  // Widths tried for the bump of beta before giving up.
  std::vector<double> dilation_ladder = {1.0, 0.9, 0.8, 0.7};
};

struct MomentCertificate {
  double max_abs = 0.0;
  double max_rel = 0.0;  // relative to the L1 norm of beta
  double beta_l1 = 0.0;
  std::vector<int> worst;
};

struct SmoothnessParams {
  double s = 1.0;
  double p = 2.0;
  double q = 2.0;
  double A = 0.0;  // 0 selects d/p + 1/4
  int M = 5;
  int K = 8;
  void Validate(int d) const;
  double EffectiveA(int d) const;
};

class KernelBank {
 public:
  static KernelBank Build(const KernelOptions &opt, const GridSpec &spec);

  const KernelOptions &options() const { return opt_; }
  const GridSpec &spec() const { return spec_; }
  int M() const { return opt_.M; }
  int laplace_power() const { return m_; }
  double width() const { return width_; }
  double delta_min() const { return opt_.delta_min; }
  double fourier_floor() const { return fourier_floor_; }
  double beta0_floor() const { return beta0_floor_; }
  const MomentCertificate &moments() const { return moments_; }
  std::string Hash() const;

  // Point samples on the grid (level 0 kernels and helpers).
  const GridField &beta0() const { return beta0_; }
  const GridField &beta() const { return beta_; }
  const GridField &beta_primitive() const { return beta_primitive_; }
  const GridField &phi() const { return phi_; }
  const GridField &sigma_bump() const { return sigma_bump_; }

  // r-th derivative of the one-dimensional factor of the bump behind beta.
  double BumpDeriv(int r, double u) const;
  double Bump0(double u) const;
  // Analytic Fourier transforms.
  double BetaHat(const double *xi) const;
  double Beta0Hat(const double *xi) const;
  // Primitive of beta for d = 1.
  double Primitive(double u) const;
  double Beta1d(double u) const;
  double Eta0(const double *xi, int k) const;

  struct LevelFactors {
    // by_order[g][bin]: per-axis DFT for derivative order 2g (k >= 1) or the beta0 factor.
    std::vector<std::vector<cplx>> by_order;
  };
  // Discrete multiplier of L_k at an FFT bin (exact DFT of cell-integrated weights).
  class Symbol {
   public:
    cplx operator()(const int64_t *idx) const;

   private:
    friend class KernelBank;
    const KernelBank *bank_ = nullptr;
    int k_ = 0;
    std::shared_ptr<const LevelFactors> f_;
  };
  Symbol LevelSymbol(int k) const;
  cplx Multiplier(int k, const int64_t *idx) const { return LevelSymbol(k)(idx); }

  // Ensures per-axis factors for level k are available.
  void Prepare(int k) const;
  void DropCache() const;

 private:
  struct Cache;
  std::shared_ptr<const LevelFactors> Factors(int k) const;
  std::shared_ptr<const LevelFactors> ComputeFactors(int k) const;

  KernelOptions opt_;
  GridSpec spec_;
  int m_ = 3;
  double width_ = 1.0;
  double norm_ = 1.0;   // integral of the unit bump
  double norm0_ = 1.0;  // integral of the beta0 bump
  double c_ = 1.0;      // (-16/pi^2)^m
  double fourier_floor_ = 0.0;
  double beta0_floor_ = 0.0;
  MomentCertificate moments_;
  GridField beta0_, beta_, beta_primitive_, phi_, sigma_bump_;
  std::vector<std::vector<double>> multinomial_;  // gamma lists with coefficients
  std::shared_ptr<Cache> cache_;
};

// Spectrum of a field, computed once and reused across levels.
struct Spectrum {
  GridSpec spec;
  std::vector<cplx> hat;
  bool is_complex = false;
};
Spectrum ToSpectrum(const GridField &f);

GridField LocalMean(const GridField &f, int k, const KernelBank &bank);
GridField LocalMean(const Spectrum &f, int k, const KernelBank &bank);
GridField LambdaOp(const GridField &f, int k, const KernelBank &bank);
GridField PiOp(const GridField &f, int N, const KernelBank &bank);
// Fused L_k Lambda_k (the multiplier numerator only).
GridField ResolutionTerm(const GridField &f, int k, const KernelBank &bank);
GridField ResolutionTerm(const Spectrum &f, int k, const KernelBank &bank);

struct PeetreOptions {
  double r_trunc = -1.0;  // negative: whole box
  ExecPolicy policy = ExecPolicy::kParallel;
};
struct PeetreResult {
  GridField value;
  double truncation_bound = 0.0;  // sup|g| (1 + 2^j R)^{-A}, zero when untruncated
};
PeetreResult PeetreMax(const GridField &g, double A, int j, const PeetreOptions &opt = {});

// sup|L_k psi_j| with psi_j(x) = exp(2 pi i 2^j x) psi(x), d = 1.
double BkjSup(int k, int j, const KernelBank &bank);

}  // namespace haarlab

#endif  // HAARLAB_KERNELS_HPP_
