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

#include "comot/mot_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace comot {
namespace {

constexpr std::string_view kFieldNames[] = {"frame",     "id",        "bb_left", "bb_top",
                                            "bb_width",  "bb_height", "conf",    "x",
                                            "y",         "z"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_field(std::string_view text, std::size_t line_no, std::size_t field) {
  const std::string_view t = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw MotParseError(line_no, "field " + std::to_string(field + 1) + " (" +
                                     std::string(kFieldNames[field]) + "): invalid number '" +
                                     std::string(t) + "'");
  }
  return value;
}

MotLine parse_line(std::string_view text, std::size_t line_no) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    fields.push_back(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
    if (comma == std::string_view::npos) {
      break;
    }
    start = comma + 1;
  }
  if (fields.size() != 10) {
    throw MotParseError(line_no, "expected 10 fields, got " + std::to_string(fields.size()));
  }
  MotLine m;
  m.frame = parse_field<int>(fields[0], line_no, 0);
  if (m.frame < 1) {
    throw MotParseError(line_no, "field 1 (frame): frame must be >= 1");
  }
  m.id = parse_field<TrackId>(fields[1], line_no, 1);
  double* reals[] = {&m.left, &m.top, &m.width, &m.height, &m.conf, &m.x, &m.y, &m.z};
  for (std::size_t k = 0; k < 8; ++k) {
    *reals[k] = parse_field<double>(fields[k + 2], line_no, k + 2);
  }
  if (m.width < 0.0 || m.height < 0.0) {
    throw MotParseError(line_no, "box width and height must be non-negative");
  }
  return m;
}

void sort_lines(std::vector<MotLine>& lines) {
  std::stable_sort(lines.begin(), lines.end(), [](const MotLine& a, const MotLine& b) {
    return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
  });
}

}  // namespace

MotParseError::MotParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string format_mot_line(const MotLine& m) {
  std::string s = std::to_string(m.frame) + "," + std::to_string(m.id);
  for (double v : {m.left, m.top, m.width, m.height, m.conf, m.x, m.y, m.z}) {
    s += ',';
    s += format_real(v);
  }
  return s;
}

std::vector<MotLine> parse_mot(std::istream& in) {
  std::vector<MotLine> lines;
  std::string text;
  std::size_t line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (trim(text).empty()) {
      continue;
    }
    lines.push_back(parse_line(text, line_no));
  }
  return lines;
}

std::vector<MotLine> parse_mot(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_mot(in);
}

void write_mot_lines(std::ostream& out, std::vector<MotLine> lines) {
  sort_lines(lines);
  for (const MotLine& m : lines) {
    out << format_mot_line(m) << '\n';
  }
}

std::vector<MotLine> read_mot_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  return parse_mot(in);
}

void write_mot_lines(const std::filesystem::path& path, std::vector<MotLine> lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  write_mot_lines(out, std::move(lines));
}

Tracklets to_tracklets(const std::vector<MotLine>& lines, const ImageSize& image) {
  std::vector<MotLine> sorted = lines;
  sort_lines(sorted);
  Tracklets out;
  for (const MotLine& m : sorted) {
    if (m.id < 0) {
      throw std::invalid_argument("frame " + std::to_string(m.frame) +
                                  ": negative id cannot form a tracklet");
    }
    auto& points = out[m.id];
    if (!points.empty() && points.back().frame == m.frame) {
      throw std::invalid_argument("duplicate (frame " + std::to_string(m.frame) + ", id " +
                                  std::to_string(m.id) + ")");
    }
    points.push_back({m.frame, from_pixel({m.left, m.top, m.width, m.height}, image), m.conf});
  }
  return out;
}

std::vector<MotLine> to_mot_lines(const Tracklets& tracklets, const ImageSize& image) {
  std::vector<MotLine> lines;
  for (const auto& [id, points] : tracklets) {
    for (const TrackPoint& p : points) {
      const PixelBox b = to_pixel(p.box, image);
      lines.push_back({p.frame, id, b.left, b.top, b.width, b.height, p.score, -1.0, -1.0, -1.0});
    }
  }
  sort_lines(lines);
  return lines;
}

Tracklets read_mot(const std::filesystem::path& path, const ImageSize& image) {
  return to_tracklets(read_mot_lines(path), image);
}

void write_mot(const Tracklets& tracklets, const ImageSize& image,
               const std::filesystem::path& path) {
  write_mot_lines(path, to_mot_lines(tracklets, image));
}

}  // namespace comot
