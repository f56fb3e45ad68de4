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

#include "fresure/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fresure/error.hpp"

namespace fresure {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open " + path.string() + " for writing");
  }
  return out;
}

void close_out(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) {
    throw IoError("failed writing " + path.string());
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return cells;
}

bool parse_double(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

// Reads a CSV with the exact header, returning numeric rows.
std::vector<std::vector<double>> read_table(const std::filesystem::path& path,
                                            const std::vector<std::string>& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string() + " for reading");
  }
  std::string line;
  if (!std::getline(in, line) || split(line) != header) {
    std::string want;
    for (std::size_t i = 0; i < header.size(); ++i) {
      want += (i ? "," : "") + header[i];
    }
    throw IoError(path.string() + ": expected header '" + want + "'");
  }
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                    std::to_string(header.size()) + " columns");
    }
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (!parse_double(cells[i], row[i])) {
        throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                      cells[i] + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_fid_csv(const std::filesystem::path& path, const FidRecord& fid) {
  auto out = open_out(path);
  out << "t_s,re,im\n";
  for (std::size_t k = 0; k < fid.n_samples(); ++k) {
    out << format_double(fid.time(k)) << ',' << format_double(fid.values[k].real()) << ','
        << format_double(fid.values[k].imag()) << '\n';
  }
  close_out(out, path);
}

FidRecord read_fid_csv(const std::filesystem::path& path) {
  const auto rows = read_table(path, {"t_s", "re", "im"});
  if (rows.size() < 2) {
    throw IoError(path.string() + ": an FID needs at least 2 samples");
  }
  FidRecord fid;
  fid.dt_s = rows[1][0] - rows[0][0];
  if (!(fid.dt_s > 0.0) || rows[0][0] != 0.0) {
    throw IoError(path.string() + ": time axis must start at 0 and increase");
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double expected = fid.dt_s * static_cast<double>(k);
    if (std::abs(rows[k][0] - expected) > 1e-9 * std::max(fid.dt_s, std::abs(expected))) {
      throw IoError(path.string() + ": time axis is not uniform at row " + std::to_string(k + 2));
    }
    fid.values.emplace_back(rows[k][1], rows[k][2]);
  }
  fid.meta = {path.filename().string(), "imported", 1};
  return fid;
}

void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spec) {
  auto out = open_out(path);
  out << "freq_hz,amplitude,re,im\n";
  for (std::size_t k = 0; k < spec.size(); ++k) {
    out << format_double(spec.freq_hz[k]) << ',' << format_double(spec.amplitude[k]) << ','
        << format_double(spec.complex_values[k].real()) << ','
        << format_double(spec.complex_values[k].imag()) << '\n';
  }
  close_out(out, path);
}

Spectrum read_spectrum_csv(const std::filesystem::path& path) {
  const auto rows = read_table(path, {"freq_hz", "amplitude", "re", "im"});
  if (rows.size() < 2) {
    throw IoError(path.string() + ": a spectrum needs at least 2 bins");
  }
  Spectrum spec;
  bool absorption = true;
  for (const auto& r : rows) {
    spec.freq_hz.push_back(r[0]);
    spec.amplitude.push_back(r[1]);
    spec.complex_values.emplace_back(r[2], r[3]);
    absorption = absorption && r[1] == r[2];
  }
  spec.bin_hz = spec.freq_hz[1] - spec.freq_hz[0];
  if (!(spec.bin_hz > 0.0)) {
    throw IoError(path.string() + ": frequency axis must increase");
  }
  spec.mode = absorption ? SpectrumMode::absorption : SpectrumMode::magnitude;
  return spec;
}

std::vector<double> read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string() + " for reading");
  }
  std::vector<double> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto cells = split(line);
    if (cells.empty() || cells.front().empty()) {
      continue;
    }
    double v = 0.0;
    if (!parse_double(cells.front(), v)) {
      if (line_no == 1) {
        continue;
      }
      throw IoError(path.string() + ":" + std::to_string(line_no) + ": bad number '" +
                    cells.front() + "'");
    }
    out.push_back(v);
  }
  return out;
}

void write_table_csv(const std::filesystem::path& path, std::span<const std::string> header,
                     std::span<const std::vector<double>> columns) {
  if (header.size() != columns.size()) {
    throw ArgumentError("write_table_csv: header/column count mismatch");
  }
  auto out = open_out(path);
  for (std::size_t c = 0; c < header.size(); ++c) {
    out << (c ? "," : "") << header[c];
  }
  out << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      out << (c ? "," : "") << format_double(columns[c][r]);
    }
    out << '\n';
  }
  close_out(out, path);
}

}  // namespace fresure
