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

#include "haarlab/haar.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "haarlab/dyadic.hpp"

namespace haarlab {

bool HaarIndex::operator<(const HaarIndex &o) const {
  if (k != o.k) return k < o.k;
  if (nu != o.nu) return nu < o.nu;
  return eps < o.eps;
}

std::string HaarIndex::ToString() const {
  std::ostringstream os;
  os << "h(k=" << k << ",nu=";
  for (int i = 0; i < dim(); ++i) os << (i ? "," : "") << nu[i];
  os << ",eps=";
  for (int i = 0; i < dim(); ++i) os << eps_at(i);
  os << ")";
  return os.str();
}

HaarIndex MakeHaarIndex(int k, std::vector<int64_t> nu, const std::vector<int> &eps) {
  HaarIndex h;
  h.k = k;
  h.nu = std::move(nu);
  for (int e : eps) h.eps = (h.eps << 1) | (e ? 1u : 0u);
  return h;
}

double MaskA::at(const std::vector<int64_t> &nu, uint32_t eps) const {
  auto it = entries.find({nu, eps});
  return it == entries.end() ? default_value : it->second;
}

void MaskA::Validate() const {
  if (std::abs(default_value) > 1.0) throw HaarlabError(ErrorKind::kMaskOutOfRange, "default mask value exceeds 1");
  for (const auto &kv : entries)
    if (std::abs(kv.second) > 1.0) throw HaarlabError(ErrorKind::kMaskOutOfRange, "mask entry exceeds 1 in modulus");
}

MaskA MaskA::Constant(double a) {
  MaskA m;
  m.default_value = a;
  return m;
}

const char *FlavorName(Flavor f) {
  switch (f) {
    case Flavor::kAdmissible: return "admissible";
    case Flavor::kStronglyAdmissible: return "strongly-admissible";
    case Flavor::kArbitrary: return "arbitrary";
  }
  return "arbitrary";
}

namespace {

int64_t LevelAxis(const GridSpec &s, int level) { return static_cast<int64_t>(s.B) << (level + 1); }

// Flat index at a given level of the cube with multi-index nu, periodically wrapped.
int64_t CubeFlat(const GridSpec &s, int level, const std::vector<int64_t> &nu) {
  const int64_t n = LevelAxis(s, level);
  const int64_t shift = static_cast<int64_t>(s.B) << level;
  int64_t flat = 0;
  for (int i = 0; i < s.d; ++i) flat = flat * n + (((nu[i] + shift) % n) + n) % n;
  return flat;
}

int64_t Pow(int64_t base, int e) {
  int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Child c (bitmask, axis i at bit d-1-i) of parent flat index at level l.
int64_t ChildFlat(const GridSpec &s, int level, int64_t parent, uint32_t c) {
  const int64_t n = LevelAxis(s, level), n2 = 2 * n;
  int64_t idx[8];
  for (int i = s.d - 1; i >= 0; --i) {
    idx[i] = parent % n;
    parent /= n;
  }
  int64_t flat = 0;
  for (int i = 0; i < s.d; ++i) flat = flat * n2 + 2 * idx[i] + ((c >> (s.d - 1 - i)) & 1);
  return flat;
}

double EpsSign(uint32_t eps, uint32_t child) {
  // Product over active axes of +1 (lower half) or -1 (upper half).
  return (__builtin_popcount(eps & child) & 1) ? -1.0 : 1.0;
}

// sums[l][cube] = sum of samples over the level-l cube.
struct Pyramid {
  GridSpec spec;
  int lo = 0;
  std::vector<std::vector<cplx>> sums;
  const std::vector<cplx> &at(int l) const { return sums[l - lo]; }
};

Pyramid BuildPyramid(const GridField &f, int lo) {
  const GridSpec &s = f.spec;
  Pyramid p;
  p.spec = s;
  p.lo = lo;
  p.sums.resize(s.J - lo + 1);
  p.sums[s.J - lo] = f.values;
  for (int l = s.J - 1; l >= lo; --l) {
    const auto &fine = p.sums[l + 1 - lo];
    const int64_t n = LevelAxis(s, l), nf = 2 * n;
    std::vector<cplx> coarse(static_cast<size_t>(Pow(n, s.d)), cplx(0.0, 0.0));
    const int64_t total = static_cast<int64_t>(fine.size());
    for (int64_t c = 0; c < total; ++c) {
      int64_t r = c, flat = 0, mul = 1;
      for (int i = s.d - 1; i >= 0; --i) {
        flat += ((r % nf) / 2) * mul;
        r /= nf;
        mul *= n;
      }
      coarse[flat] += fine[c];
    }
    p.sums[l - lo] = std::move(coarse);
  }
  return p;
}

cplx CoeffFromPyramid(const Pyramid &p, const HaarIndex &idx) {
  const GridSpec &s = p.spec;
  const double inv_cells = std::ldexp(1.0, -(s.J - idx.k) * s.d);
  if (idx.is_scaling()) return p.at(idx.k)[CubeFlat(s, idx.k, idx.nu)] * inv_cells;
  const int64_t parent = CubeFlat(s, idx.k, idx.nu);
  const auto &child = p.at(idx.k + 1);
  cplx acc(0.0, 0.0);
  for (uint32_t c = 0; c < (1u << s.d); ++c) acc += EpsSign(idx.eps, c) * child[ChildFlat(s, idx.k, parent, c)];
  return acc * inv_cells;
}

// Accumulates coefficient * h into detail arrays and synthesizes the field.
class Synth {
 public:
  explicit Synth(const GridSpec &s) : s_(s), detail_(s.J + 1) {}
  void Add(const HaarIndex &idx, cplx coef) {
    if (idx.is_scaling()) {
      Level(idx.k)[CubeFlat(s_, idx.k, idx.nu)] += coef;
      return;
    }
    const int64_t parent = CubeFlat(s_, idx.k, idx.nu);
    auto &child = Level(idx.k + 1);
    for (uint32_t c = 0; c < (1u << s_.d); ++c) child[ChildFlat(s_, idx.k, parent, c)] += EpsSign(idx.eps, c) * coef;
  }
  GridField Finish(bool complex_valued) {
    std::vector<cplx> v;
    int start = 0;
    while (start <= s_.J && detail_[start].empty()) ++start;
    GridField out(s_, complex_valued);
    if (start > s_.J) return out;
    v = detail_[start];
    for (int l = start + 1; l <= s_.J; ++l) {
      const int64_t n = LevelAxis(s_, l), nc = n / 2;
      std::vector<cplx> next(static_cast<size_t>(Pow(n, s_.d)));
      const int64_t total = static_cast<int64_t>(next.size());
      const auto &det = detail_[l];
      for (int64_t c = 0; c < total; ++c) {
        int64_t r = c, flat = 0, mul = 1;
        for (int i = s_.d - 1; i >= 0; --i) {
          flat += ((r % n) / 2) * mul;
          r /= n;
          mul *= nc;
        }
        next[c] = v[flat] + (det.empty() ? cplx(0.0, 0.0) : det[c]);
      }
      v = std::move(next);
    }
    out.values = std::move(v);
    if (!complex_valued)
      for (auto &x : out.values) x = cplx(x.real(), 0.0);
    return out;
  }

 private:
  std::vector<cplx> &Level(int l) {
    if (detail_[l].empty()) detail_[l].assign(static_cast<size_t>(Pow(LevelAxis(s_, l), s_.d)), cplx(0.0, 0.0));
    return detail_[l];
  }
  GridSpec s_;
  std::vector<std::vector<cplx>> detail_;
};

void CheckLevel(const GridSpec &s, int k) {
  if (k > s.J - 1) throw HaarlabError(ErrorKind::kLevelTooFine, "Haar level must be <= J-1");
  if (k < 0) throw HaarlabError(ErrorKind::kValidation, "negative Haar level");
}

std::vector<int64_t> NuFromFlat(const GridSpec &s, int level, int64_t flat) {
  const int64_t n = LevelAxis(s, level);
  const int64_t shift = static_cast<int64_t>(s.B) << level;
  std::vector<int64_t> nu(s.d);
  for (int i = s.d - 1; i >= 0; --i) {
    nu[i] = flat % n - shift;
    flat /= n;
  }
  return nu;
}

GridField SynthesizeSubset(const GridField &f, const std::vector<HaarIndex> &items, size_t count) {
  int lo = f.spec.J;
  for (size_t i = 0; i < count; ++i) {
    CheckLevel(f.spec, items[i].k);
    lo = std::min(lo, items[i].k);
  }
  Pyramid p = BuildPyramid(f, lo);
  Synth syn(f.spec);
  for (size_t i = 0; i < count; ++i) syn.Add(items[i], CoeffFromPyramid(p, items[i]));
  return syn.Finish(f.is_complex);
}

}  // namespace

double HaarEval(const HaarIndex &idx, const double *x) {
  double v = 1.0;
  for (int i = 0; i < idx.dim(); ++i) {
    const double t = std::ldexp(x[i], idx.k) - static_cast<double>(idx.nu[i]);
    if (t < 0.0 || t >= 1.0) return 0.0;
    if (idx.eps_at(i) && t >= 0.5) v = -v;
  }
  return v;
}

GridField HaarField(const HaarIndex &idx, const GridSpec &spec) {
  CheckLevel(spec, idx.k);
  Synth syn(spec);
  syn.Add(idx, cplx(1.0, 0.0));
  GridField out = syn.Finish(false);
  out.compact = true;
  return out;
}

cplx HaarCoeff(const GridField &f, const HaarIndex &idx) {
  CheckLevel(f.spec, idx.k);
  const GridSpec &s = f.spec;
  const int64_t L = int64_t{1} << (s.J - idx.k);
  const int64_t n = s.n_axis();
  const int64_t cells = Pow(L, s.d);
  cplx acc(0.0, 0.0);
  int64_t off[8], base[8];
  for (int i = 0; i < s.d; ++i) base[i] = idx.nu[i] * L + static_cast<int64_t>(s.B) * (int64_t{1} << s.J);
  for (int64_t c = 0; c < cells; ++c) {
    int64_t r = c;
    double sign = 1.0;
    for (int i = s.d - 1; i >= 0; --i) {
      off[i] = r % L;
      r /= L;
      if (idx.eps_at(i) && off[i] >= L / 2) sign = -sign;
    }
    int64_t flat = 0;
    for (int i = 0; i < s.d; ++i) flat = flat * n + (((base[i] + off[i]) % n) + n) % n;
    acc += sign * f[flat];
  }
  return acc / static_cast<double>(cells);
}

GridField DyadicAverage(const GridField &f, int N, ExecPolicy policy) {
  const GridSpec &s = f.spec;
  if (N < 0 || N > s.J) throw HaarlabError(ErrorKind::kValidation, "dyadic_average needs 0 <= N <= J");
  const int64_t L = int64_t{1} << (s.J - N);
  const int64_t nb = LevelAxis(s, N);
  const int64_t n = s.n_axis();
  const int64_t blocks = Pow(nb, s.d);
  const int64_t cells = Pow(L, s.d);
  std::vector<int64_t> offsets(static_cast<size_t>(cells));
  for (int64_t c = 0; c < cells; ++c) {
    int64_t r = c, flat = 0, mul = 1;
    for (int i = s.d - 1; i >= 0; --i) {
      flat += (r % L) * mul;
      r /= L;
      mul *= n;
    }
    offsets[c] = flat;
  }
  GridField out(s, f.is_complex);
  out.compact = f.compact;
  auto body = [&](int64_t b) {
    int64_t r = b, origin = 0, mul = 1;
    for (int i = s.d - 1; i >= 0; --i) {
      origin += (r % nb) * L * mul;
      r /= nb;
      mul *= n;
    }
    cplx acc(0.0, 0.0);
    for (int64_t c = 0; c < cells; ++c) acc += f[origin + offsets[c]];
    acc /= static_cast<double>(cells);
    for (int64_t c = 0; c < cells; ++c) out[origin + offsets[c]] = acc;
  };
  if (policy == ExecPolicy::kParallel) {
#pragma omp parallel for schedule(static)
    for (int64_t b = 0; b < blocks; ++b) body(b);
  } else {
    for (int64_t b = 0; b < blocks; ++b) body(b);
  }
  return out;
}

GridField DyadicComplement(const GridField &f, int N, ExecPolicy policy) {
  GridField out = f;
  out -= DyadicAverage(f, N, policy);
  return out;
}

GridField TMask(const GridField &f, int N, const MaskA &a) {
  a.Validate();
  const GridSpec &s = f.spec;
  if (N < -1) throw HaarlabError(ErrorKind::kValidation, "t_mask level must be >= -1");
  if (N + 1 > s.J) throw HaarlabError(ErrorKind::kLevelTooFine, "t_mask needs N+1 <= J");
  const int lvl = std::max(N, 0);
  Pyramid p = BuildPyramid(f, lvl);
  Synth syn(s);
  const int64_t cubes = Pow(LevelAxis(s, lvl), s.d);
  for (int64_t c = 0; c < cubes; ++c) {
    HaarIndex idx;
    idx.k = lvl;
    idx.nu = NuFromFlat(s, lvl, c);
    if (N < 0) {
      const double w = a.at(idx.nu, 0);
      if (w != 0.0) syn.Add(idx, w * CoeffFromPyramid(p, idx));
      continue;
    }
    for (uint32_t e = 1; e < (1u << s.d); ++e) {
      idx.eps = e;
      const double w = a.at(idx.nu, e);
      if (w != 0.0) syn.Add(idx, w * CoeffFromPyramid(p, idx));
    }
  }
  return syn.Finish(f.is_complex);
}

AdmissibilityReport CheckAdmissible(const Enumeration &e, bool strong, int b_max) {
  AdmissibilityReport rep;
  struct Track {
    int max_level = -1;
    int64_t pos = -1;
  };
  std::map<std::vector<int64_t>, Track> cubes;
  int worst = -1;
  const int reach = strong ? 2 : 0;
  for (size_t n = 0; n < e.items.size(); ++n) {
    const HaarIndex &it = e.items[n];
    const int d = it.dim();
    std::vector<int64_t> unit(d);
    for (int i = 0; i < d; ++i) unit[i] = FloorDiv(it.nu[i], int64_t{1} << it.k);
    // All unit cubes whose (dilated) cube contains the support.
    const int side = 2 * reach + 1;
    int64_t combos = Pow(side, d);
    for (int64_t c = 0; c < combos; ++c) {
      std::vector<int64_t> cube(d);
      int64_t r = c;
      for (int i = d - 1; i >= 0; --i) {
        cube[i] = unit[i] + (r % side) - reach;
        r /= side;
      }
      Track &t = cubes[cube];
      if (t.max_level >= 0) {
        const int gap = t.max_level - it.k;
        if (gap > worst) {
          worst = gap;
          rep.n = static_cast<int64_t>(n);
          rep.n_prime = t.pos;
          rep.cube = cube;
          rep.level_gap = gap;
        }
      }
      if (it.k > t.max_level) {
        t.max_level = it.k;
        t.pos = static_cast<int64_t>(n);
      }
    }
  }
  const int need = std::max(1, worst + 1);
  if (need <= b_max) {
    rep.ok = true;
    rep.b = need;
  } else {
    rep.ok = false;
    rep.b = need;
  }
  if (worst <= 0) {
    rep.n = rep.n_prime = -1;
    rep.cube.clear();
  }
  return rep;
}

Enumeration BuildCanonicalEnumeration(int k_max, int box_lo, int box_hi, int d) {
  if (box_hi <= box_lo || k_max < 0) throw HaarlabError(ErrorKind::kValidation, "bad enumeration box");
  Enumeration e;
  e.d = d;
  e.box_lo = box_lo;
  e.box_hi = box_hi;
  auto cubes_at = [&](int k, auto &&fn) {
    const int64_t lo = static_cast<int64_t>(box_lo) << k, hi = static_cast<int64_t>(box_hi) << k;
    const int64_t w = hi - lo;
    const int64_t total = Pow(w, d);
    std::vector<int64_t> nu(d);
    for (int64_t c = 0; c < total; ++c) {
      int64_t r = c;
      for (int i = d - 1; i >= 0; --i) {
        nu[i] = lo + r % w;
        r /= w;
      }
      fn(nu);
    }
  };
  cubes_at(0, [&](const std::vector<int64_t> &nu) { e.items.push_back(HaarIndex{0, nu, 0}); });
  e.markers.push_back(static_cast<int64_t>(e.items.size()));
  for (int k = 0; k <= k_max; ++k) {
    cubes_at(k, [&](const std::vector<int64_t> &nu) {
      for (uint32_t eps = 1; eps < (1u << d); ++eps) e.items.push_back(HaarIndex{k, nu, eps});
    });
    e.markers.push_back(static_cast<int64_t>(e.items.size()));
  }
  e.flavor = Flavor::kStronglyAdmissible;
  AdmissibilityReport rep = CheckAdmissible(e, true);
  e.b = rep.b;
  return e;
}

GridField PartialSum(const GridField &f, const Enumeration &e, int64_t R) {
  if (R < 0 || R > static_cast<int64_t>(e.items.size()))
    throw HaarlabError(ErrorKind::kValidation, "partial sum index out of range");
  if (R == 0) return GridField(f.spec, f.is_complex);
  return SynthesizeSubset(f, e.items, static_cast<size_t>(R));
}

GridField ProjectionPE(const GridField &f, const std::vector<HaarIndex> &E) {
  if (E.empty()) return GridField(f.spec, f.is_complex);
  return SynthesizeSubset(f, E, E.size());
}

std::vector<int> HaarFrequencyLevels(const std::vector<HaarIndex> &E) {
  std::vector<int> lv;
  for (const auto &h : E) lv.push_back(h.k);
  std::sort(lv.begin(), lv.end());
  lv.erase(std::unique(lv.begin(), lv.end()), lv.end());
  return lv;
}

std::vector<double> HaarFrequencies(const std::vector<HaarIndex> &E) {
  std::vector<double> out;
  for (int k : HaarFrequencyLevels(E)) out.push_back(std::ldexp(1.0, k));
  return out;
}

void WriteEnumeration(std::ostream &os, const Enumeration &e) {
  os << "# haarlab enumeration v1\n";
  os << "d " << e.d << "\n";
  os << "b " << e.b << "\n";
  os << "flavor " << FlavorName(e.flavor) << "\n";
  os << "box " << e.box_lo << " " << e.box_hi << "\n";
  os << "markers";
  for (auto m : e.markers) os << " " << m;
  os << "\n";
  os << "count " << e.items.size() << "\n";
  for (const auto &h : e.items) {
    os << h.k;
    for (auto v : h.nu) os << " " << v;
    os << " ";
    for (int i = 0; i < h.dim(); ++i) os << h.eps_at(i);
    os << "\n";
  }
}

Enumeration ReadEnumeration(std::istream &is) {
  Enumeration e;
  std::string line;
  int64_t count = -1;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    auto need = [&](bool ok) {
      if (!ok) throw HaarlabError(ErrorKind::kValidation, "bad enumeration header line: " + line);
    };
    if (key == "d") {
      need(static_cast<bool>(ls >> e.d) && e.d >= 1 && e.d <= 8);
    } else if (key == "b") {
      need(static_cast<bool>(ls >> e.b));
    } else if (key == "flavor") {
      std::string f;
      ls >> f;
      e.flavor = f == "admissible" ? Flavor::kAdmissible
                                   : (f == "strongly-admissible" ? Flavor::kStronglyAdmissible : Flavor::kArbitrary);
    } else if (key == "box") {
      need(static_cast<bool>(ls >> e.box_lo >> e.box_hi));
    } else if (key == "markers") {
      int64_t m;
      while (ls >> m) e.markers.push_back(m);
    } else if (key == "count") {
      need(static_cast<bool>(ls >> count) && count >= 0);
      break;
    } else {
      throw HaarlabError(ErrorKind::kValidation, "unknown enumeration header key: " + key);
    }
  }
  if (count < 0) throw HaarlabError(ErrorKind::kValidation, "enumeration has no count line");
  for (int64_t i = 0; i < count; ++i) {
    if (!std::getline(is, line)) throw HaarlabError(ErrorKind::kValidation, "truncated enumeration");
    std::istringstream ls(line);
    HaarIndex h;
    ls >> h.k;
    h.nu.resize(e.d);
    for (int j = 0; j < e.d; ++j) ls >> h.nu[j];
    std::string bits;
    ls >> bits;
    if (!ls || static_cast<int>(bits.size()) != e.d || bits.find_first_not_of("01") != std::string::npos) throw HaarlabError(ErrorKind::kValidation, "bad eps bits");
    for (char c : bits) h.eps = (h.eps << 1) | (c == '1' ? 1u : 0u);
    e.items.push_back(std::move(h));
  }
  return e;
}

}  // namespace haarlab
