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


#include "haarlab/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace haarlab {

namespace {

static_assert(std::endian::native == std::endian::little, "binary field format assumes a little-endian host");

std::ofstream OpenOut(const std::string &path, std::ios::openmode mode = std::ios::out) {
  std::ofstream os(path, mode);
  if (!os) throw HaarlabError(ErrorKind::kValidation, "cannot open " + path + " for writing");
  return os;
}

}  // namespace

void WriteFieldBinary(const std::string &path, const GridField &f) {
  {
    std::ofstream hdr = OpenOut(path + ".hdr");
    hdr << "d " << f.spec.d << "\nJ " << f.spec.J << "\nB " << f.spec.B << "\ncomplex " << (f.is_complex ? 1 : 0)
        << "\ncompact " << (f.compact ? 1 : 0) << "\n";
  }
  std::ofstream os = OpenOut(path, std::ios::out | std::ios::binary);
  const int per = f.is_complex ? 2 : 1;
  std::vector<double> buf;
  buf.reserve(static_cast<size_t>(f.size()) * per);
  for (const auto &v : f.values) {
    buf.push_back(v.real());
    if (f.is_complex) buf.push_back(v.imag());
  }
  os.write(reinterpret_cast<const char *>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(double)));
}

GridField ReadFieldBinary(const std::string &path) {
  std::ifstream hdr(path + ".hdr");
  if (!hdr) throw HaarlabError(ErrorKind::kValidation, "missing header " + path + ".hdr");
  GridSpec spec;
  int cplx_flag = 0, compact = 0;
  std::string key;
  while (hdr >> key) {
    if (key == "d") hdr >> spec.d;
    else if (key == "J") hdr >> spec.J;
    else if (key == "B") hdr >> spec.B;
    else if (key == "complex") hdr >> cplx_flag;
    else if (key == "compact") hdr >> compact;
    else throw HaarlabError(ErrorKind::kValidation, "unknown header key " + key);
  }
  spec.Validate();
  GridField f(spec, cplx_flag != 0);
  f.compact = compact != 0;
  const int per = f.is_complex ? 2 : 1;
  std::vector<double> buf(static_cast<size_t>(f.size()) * per);
  std::ifstream is(path, std::ios::binary);
  if (!is) throw HaarlabError(ErrorKind::kValidation, "cannot open " + path);
  is.read(reinterpret_cast<char *>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(double)));
  if (is.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(double)))
    throw HaarlabError(ErrorKind::kValidation, "field file " + path + " is truncated");
  for (int64_t i = 0; i < f.size(); ++i)
    f[i] = f.is_complex ? cplx(buf[2 * i], buf[2 * i + 1]) : cplx(buf[i], 0.0);
  return f;
}

void WriteFieldCsv(std::ostream &os, const GridField &f) {
  if (f.spec.d != 1) throw HaarlabError(ErrorKind::kValidation, "CSV export is one-dimensional");
  char line[96];
  os << (f.is_complex ? "x,re,im\n" : "x,value\n");
  for (int64_t i = 0; i < f.size(); ++i) {
    if (f.is_complex)
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", f.spec.coord(i), f[i].real(), f[i].imag());
    else
      std::snprintf(line, sizeof(line), "%.17g,%.17g\n", f.spec.coord(i), f[i].real());
    os << line;
  }
}

void WritePlotData(const std::string &path, const std::vector<std::pair<double, double>> &series,
                   const std::string &header) {
  std::ofstream os = OpenOut(path);
  if (!header.empty()) os << "# " << header << "\n";
  char line[64];
  for (const auto &[x, y] : series) {
    std::snprintf(line, sizeof(line), "%.17g %.17g\n", x, y);
    os << line;
  }
}

std::string ManifestHash(const nlohmann::json &manifest) {
  const std::string s = manifest.dump();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void WriteJson(const std::string &path, const nlohmann::json &j) {
  std::ofstream os = OpenOut(path);
  os << j.dump(2) << "\n";
}

nlohmann::json ReadJson(const std::string &path) {
  std::ifstream is(path);
  if (!is) throw HaarlabError(ErrorKind::kValidation, "cannot open " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception &e) {
    throw HaarlabError(ErrorKind::kValidation, std::string("bad JSON in ") + path + ": " + e.what());
  }
}

nlohmann::json EncodeReal(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double DecodeReal(const nlohmann::json &j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
    throw HaarlabError(ErrorKind::kValidation, "bad real " + s);
  }
  return j.get<double>();
}

}  // namespace haarlab
