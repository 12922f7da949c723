// Copyright 2026 The comot Authors.
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
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "comot/geometry.hpp"
#include "comot/tracklets.hpp"

namespace comot {

/// One MOTChallenge row: frame,id,bb_left,bb_top,bb_width,bb_height,conf,x,y,z
struct MotLine {
  int frame = 1;
  TrackId id = -1;
  double left = 0.0;
  double top = 0.0;
  double width = 0.0;
  double height = 0.0;
  double conf = 1.0;
  double x = -1.0;
  double y = -1.0;
  double z = -1.0;

  friend bool operator==(const MotLine&, const MotLine&) = default;
};

class MotParseError : public std::runtime_error {
 public:
  MotParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Shortest decimal that parses back to exactly `value`.
std::string format_real(double value);

std::string format_mot_line(const MotLine& line);

/// Blank lines are skipped. Throws MotParseError naming the 1-based line
/// number (and field, when one is at fault).
std::vector<MotLine> parse_mot(std::istream& in);
std::vector<MotLine> parse_mot(std::string_view text);

/// Writes lines sorted by (frame, id).
void write_mot_lines(std::ostream& out, std::vector<MotLine> lines);

std::vector<MotLine> read_mot_lines(const std::filesystem::path& path);
void write_mot_lines(const std::filesystem::path& path, std::vector<MotLine> lines);

/// Throws std::invalid_argument for negative ids or duplicate (frame, id).
Tracklets to_tracklets(const std::vector<MotLine>& lines, const ImageSize& image);
std::vector<MotLine> to_mot_lines(const Tracklets& tracklets, const ImageSize& image);

Tracklets read_mot(const std::filesystem::path& path, const ImageSize& image);
void write_mot(const Tracklets& tracklets, const ImageSize& image,
               const std::filesystem::path& path);

}  // namespace comot
