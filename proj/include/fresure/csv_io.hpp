// Copyright 2026 The fresure Authors
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

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "fresure/dynamics.hpp"
#include "fresure/spectra.hpp"

namespace fresure {

/// Shortest-exact decimal text is not used; every value is written with 17
/// significant digits so export -> import -> export is byte-stable.
std::string format_double(double v);

/// Columns `t_s,re,im`, header row required.
void write_fid_csv(const std::filesystem::path& path, const FidRecord& fid);
/// Throws IoError on unreadable files, malformed rows or a non-uniform time axis.
FidRecord read_fid_csv(const std::filesystem::path& path);

/// Columns `freq_hz,amplitude,re,im`.
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spec);
/// `amplitude` is taken verbatim; the mode is inferred from whether it equals re.
Spectrum read_spectrum_csv(const std::filesystem::path& path);

/// Single numeric column; a non-numeric first line is treated as a header.
std::vector<double> read_series_csv(const std::filesystem::path& path);

/// Generic numeric table writer.
void write_table_csv(const std::filesystem::path& path, std::span<const std::string> header,
                     std::span<const std::vector<double>> columns);

}  // namespace fresure
