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

#include "haarlab/grid.hpp"

#include <algorithm>
#include <cmath>

namespace haarlab {

const char *ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kValidation: return "ValidationError";
    case ErrorKind::kResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorKind::kMarginViolation: return "MarginViolation";
    case ErrorKind::kFourierFloorViolation: return "FourierFloorViolation";
    case ErrorKind::kLevelTooFine: return "LevelTooFine";
    case ErrorKind::kMaskOutOfRange: return "MaskOutOfRange";
    case ErrorKind::kDegenerateFit: return "DegenerateFit";
  }
  return "Error";
}

int64_t GridSpec::size() const {
  int64_t s = 1;
  for (int i = 0; i < d; ++i) s *= n_axis();
  return s;
}

double GridSpec::h() const { return std::ldexp(1.0, -J); }

double GridSpec::cell_volume() const { return std::ldexp(1.0, -J * d); }

int64_t GridSpec::axis_index(double t) const {
  return static_cast<int64_t>(std::floor((t + B) * std::ldexp(1.0, J)));
}

void GridSpec::Validate() const {
  if (d < 1 || d > 8) throw HaarlabError(ErrorKind::kValidation, "d must be in [1,8]");
  if (B < 1 || (B & (B - 1)) != 0)
    throw HaarlabError(ErrorKind::kValidation, "B must be a positive power of two");
  if (J < 0 || J > 28) throw HaarlabError(ErrorKind::kValidation, "J out of range");
  if (static_cast<double>(d) * (J + 1 + std::log2(B)) > 31)
    throw HaarlabError(ErrorKind::kValidation, "grid too large");
}

GridField::GridField(const GridSpec &s, bool complex_valued)
    : spec(s), values(static_cast<size_t>(s.size()), cplx(0.0, 0.0)), is_complex(complex_valued) {}

double GridField::max_abs() const {
  double m = 0.0;
  for (const auto &v : values) m = std::max(m, std::abs(v));
  return m;
}

double GridField::support_margin(double rel_tol) const {
  // Half of the widest empty circular arc of the support, minimized over axes.
  const double thr = rel_tol * max_abs();
  const int64_t n = spec.n_axis();
  std::vector<std::vector<char>> occupied(spec.d, std::vector<char>(n, 0));
  std::array<int64_t, 8> idx{};
  bool any = false;
  for (int64_t f = 0; f < size(); ++f) {
    if (std::abs(values[f]) <= thr) continue;
    any = true;
    Unravel(f, spec, idx.data());
    for (int i = 0; i < spec.d; ++i) occupied[i][idx[i]] = 1;
  }
  if (!any) return spec.B;
  double margin = spec.B;
  for (int i = 0; i < spec.d; ++i) {
    int64_t best = 0, run = 0;
    for (int64_t t = 0; t < 2 * n; ++t) {
      run = occupied[i][t % n] ? 0 : run + 1;
      best = std::max(best, std::min(run, n));
    }
    margin = std::min(margin, 0.5 * best * spec.h());
  }
  return margin;
}

GridField &GridField::operator+=(const GridField &o) {
  if (o.spec != spec) throw HaarlabError(ErrorKind::kValidation, "grid mismatch");
  for (int64_t i = 0; i < size(); ++i) values[i] += o.values[i];
  is_complex = is_complex || o.is_complex;
  compact = compact && o.compact;
  return *this;
}

GridField &GridField::operator-=(const GridField &o) {
  if (o.spec != spec) throw HaarlabError(ErrorKind::kValidation, "grid mismatch");
  for (int64_t i = 0; i < size(); ++i) values[i] -= o.values[i];
  is_complex = is_complex || o.is_complex;
  compact = compact && o.compact;
  return *this;
}

GridField &GridField::operator*=(cplx c) {
  for (auto &v : values) v *= c;
  if (c.imag() != 0.0) is_complex = true;
  return *this;
}

GridField operator+(GridField a, const GridField &b) { return a += b; }
GridField operator-(GridField a, const GridField &b) { return a -= b; }
GridField operator*(cplx c, GridField a) { return a *= c; }

void Unravel(int64_t flat, const GridSpec &spec, int64_t *idx) {
  const int64_t n = spec.n_axis();
  for (int i = spec.d - 1; i >= 0; --i) {
    idx[i] = flat % n;
    flat /= n;
  }
}

int64_t Ravel(const int64_t *idx, const GridSpec &spec) {
  const int64_t n = spec.n_axis();
  int64_t flat = 0;
  for (int i = 0; i < spec.d; ++i) flat = flat * n + ((idx[i] % n) + n) % n;
  return flat;
}

double MaxAbsDiff(const GridField &a, const GridField &b) {
  double m = 0.0;
  for (int64_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double L2Norm(const GridField &f) {
  double s = 0.0;
  for (const auto &v : f.values) s += std::norm(v);
  return std::sqrt(s * f.spec.cell_volume());
}

}  // namespace haarlab
