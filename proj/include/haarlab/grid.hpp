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

#ifndef HAARLAB_GRID_HPP_
#define HAARLAB_GRID_HPP_

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace haarlab {

using cplx = std::complex<double>;

enum class ErrorKind {
  kValidation,
  kResolutionTooCoarse,
  kMarginViolation,
  kFourierFloorViolation,
  kLevelTooFine,
  kMaskOutOfRange,
  kDegenerateFit,
};

const char *ErrorKindName(ErrorKind kind);

class HaarlabError : public std::runtime_error {
 public:
  HaarlabError(ErrorKind kind, const std::string &what)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + what),
        kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Periodic box [-B, B)^d sampled at the midpoints of level-J dyadic cells.
struct GridSpec {
  int d = 1;
  int J = 10;
  int B = 1;

  int64_t n_axis() const { return static_cast<int64_t>(B) << (J + 1); }
  int64_t size() const;
  double h() const;
  double cell_volume() const;
  double coord(int64_t i) const { return -B + (static_cast<double>(i) + 0.5) * h(); }
  // Lower-left corner index along an axis of the level-J cell containing t.
  int64_t axis_index(double t) const;
  // Integer frequency of FFT bin i, and its physical value.
  int64_t freq_index(int64_t i) const { return i < n_axis() / 2 ? i : i - n_axis(); }
  double freq(int64_t i) const { return static_cast<double>(freq_index(i)) / (2.0 * B); }
  void Validate() const;
  bool operator==(const GridSpec &o) const { return d == o.d && J == o.J && B == o.B; }
  bool operator!=(const GridSpec &o) const { return !(*this == o); }
};

// Samples are interpreted as values of a function constant on level-J cells.
struct GridField {
  GridSpec spec;
  std::vector<cplx> values;
  bool is_complex = false;
  // True when the field claims compact support away from the box boundary.
  bool compact = false;

  GridField() = default;
  explicit GridField(const GridSpec &s, bool complex_valued = false);

  int64_t size() const { return static_cast<int64_t>(values.size()); }
  cplx &operator[](int64_t i) { return values[i]; }
  const cplx &operator[](int64_t i) const { return values[i]; }

  double max_abs() const;
  // Half the widest empty periodic gap of the support, minimized over axes. A kernel of
  // radius up to this value acts on the periodic box as it would on the whole space.
  double support_margin(double rel_tol = 1e-14) const;

  GridField &operator+=(const GridField &o);
  GridField &operator-=(const GridField &o);
  GridField &operator*=(cplx c);
};

GridField operator+(GridField a, const GridField &b);
GridField operator-(GridField a, const GridField &b);
GridField operator*(cplx c, GridField a);

// Row-major multi-index helpers.
void Unravel(int64_t flat, const GridSpec &spec, int64_t *idx);
int64_t Ravel(const int64_t *idx, const GridSpec &spec);

// Fill a field from a point function evaluated at sample midpoints.
template <typename F>
GridField SampleField(const GridSpec &spec, F &&fn, bool complex_valued = false) {
  GridField out(spec, complex_valued);
  std::array<double, 8> x{};
  std::array<int64_t, 8> idx{};
  for (int64_t f = 0; f < out.size(); ++f) {
    Unravel(f, spec, idx.data());
    for (int i = 0; i < spec.d; ++i) x[i] = spec.coord(idx[i]);
    out.values[f] = fn(x.data());
  }
  return out;
}

double MaxAbsDiff(const GridField &a, const GridField &b);
double L2Norm(const GridField &f);

}  // namespace haarlab

#endif  // HAARLAB_GRID_HPP_
