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


#ifndef HAARLAB_IO_HPP_
#define HAARLAB_IO_HPP_

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "haarlab/grid.hpp"
#include "json.hpp"

namespace haarlab {

// Raw little-endian float64 samples (re, im interleaved when complex) plus a
// key-value sidecar "<path>.hdr" holding d, J, B, complex and compact.
void WriteFieldBinary(const std::string &path, const GridField &f);
GridField ReadFieldBinary(const std::string &path);
// x,re[,im] rows; d = 1 only.
void WriteFieldCsv(std::ostream &os, const GridField &f);

// Two columns, one series per file.
void WritePlotData(const std::string &path, const std::vector<std::pair<double, double>> &series,
                   const std::string &header = "");

// 64-bit FNV-1a of the compact JSON dump, as 16 hex digits.
std::string ManifestHash(const nlohmann::json &manifest);
void WriteJson(const std::string &path, const nlohmann::json &j);
nlohmann::json ReadJson(const std::string &path);

// Doubles that may be infinite are stored as numbers or the string "inf".
nlohmann::json EncodeReal(double v);
double DecodeReal(const nlohmann::json &j);

}  // namespace haarlab

#endif  // HAARLAB_IO_HPP_
