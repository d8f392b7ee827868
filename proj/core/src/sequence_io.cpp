#include "oet/sequence_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <tuple>

#include "oet/config.hpp"
#include "oet/error.hpp"
#include "oet/image_io.hpp"

namespace oet {

namespace fs = std::filesystem;

namespace {

bool is_image(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".pgm";
}

// Sort key: the last run of digits in the stem (missing digits sort last),
// then the full name.
std::tuple<bool, unsigned long long, std::string> frame_key(const fs::path& p) {
  const std::string stem = p.stem().string();
  auto end = stem.find_last_of("0123456789");
  if (end == std::string::npos) return {true, 0, p.filename().string()};
  auto begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(stem[begin - 1]))) --begin;
  unsigned long long number = 0;
  std::from_chars(stem.data() + begin, stem.data() + end + 1, number);
  return {false, number, p.filename().string()};
}

}  // namespace

std::vector<BoundingBox> parse_groundtruth(std::string_view text) {
  std::vector<BoundingBox> boxes;
  int line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    const size_t nl = text.find('\n', pos);
    const std::string_view line =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;

    std::vector<double> fields;
    size_t i = 0;
    auto is_sep = [](char c) {
      return c == ',' || c == ' ' || c == '\t' || c == '\r';
    };
    while (i < line.size()) {
      while (i < line.size() && is_sep(line[i])) ++i;
      if (i >= line.size()) break;
      size_t j = i;
      while (j < line.size() && !is_sep(line[j])) ++j;
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + j, v);
      if (ec != std::errc{} || ptr != line.data() + j) {
        throw ParseError(line_no, "non-numeric token '" +
                                      std::string(line.substr(i, j - i)) + "'");
      }
      fields.push_back(v);
      i = j;
    }
    if (fields.empty()) continue;
    if (fields.size() < 4) {
      throw ParseError(line_no, "expected 4 fields x,y,w,h, got " +
                                    std::to_string(fields.size()));
    }
    const BoundingBox box{fields[0], fields[1], fields[2], fields[3]};
    if (!box.valid()) throw ParseError(line_no, "box width and height must be positive");
    boxes.push_back(box);
  }
  return boxes;
}

std::vector<BoundingBox> load_groundtruth(const fs::path& path) {
  return parse_groundtruth(read_text_file(path));
}

SequenceManifest scan_sequence(const fs::path& dir) {
  const fs::path img_dir = dir / kImageDir;
  SequenceManifest manifest;
  manifest.name = fs::absolute(dir).lexically_normal().filename().string();
  if (manifest.name.empty()) {
    manifest.name = fs::absolute(dir).lexically_normal().parent_path().filename().string();
  }
  std::error_code ec;
  if (fs::is_directory(img_dir, ec)) {
    for (const auto& entry : fs::directory_iterator(img_dir)) {
      if (entry.is_regular_file() && is_image(entry.path())) {
        manifest.frame_paths.push_back(entry.path());
      }
    }
  }
  if (manifest.frame_paths.empty()) {
    throw EmptySequence("no image frames found in '" + img_dir.string() + "'");
  }
  std::sort(manifest.frame_paths.begin(), manifest.frame_paths.end(),
            [](const fs::path& a, const fs::path& b) { return frame_key(a) < frame_key(b); });

  const fs::path gt_path = dir / kGroundTruthFile;
  if (fs::exists(gt_path)) {
    auto boxes = load_groundtruth(gt_path);
    if (boxes.size() != manifest.frame_paths.size()) {
      throw CountMismatch("sequence has " + std::to_string(manifest.frame_paths.size()) +
                          " frames but " + std::to_string(boxes.size()) +
                          " ground-truth boxes");
    }
    manifest.ground_truth = std::move(boxes);
  }
  return manifest;
}

LoadedSequence load_sequence(const fs::path& dir) {
  LoadedSequence out;
  out.manifest = scan_sequence(dir);
  out.frames.reserve(out.manifest.frame_paths.size());
  int index = 0;
  for (const auto& path : out.manifest.frame_paths) {
    Frame f{read_grayscale(path), index++};
    try {
      f.validate();
    } catch (const InvalidInput& e) {
      throw UndecodableImage("'" + path.string() + "': " + e.what());
    }
    out.frames.push_back(std::move(f));
  }
  return out;
}

std::string format_results(std::span<const BoundingBox> boxes) {
  std::string out;
  char line[128];
  for (const auto& b : boxes) {
    std::snprintf(line, sizeof line, "%.2f,%.2f,%.2f,%.2f\n", b.x, b.y, b.w, b.h);
    out += line;
  }
  return out;
}

void write_results(const fs::path& path, std::span<const BoundingBox> boxes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << format_results(boxes);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

void write_sequence(const fs::path& dir, std::span<const Frame> frames,
                    std::span<const BoundingBox> ground_truth) {
  const fs::path img_dir = dir / kImageDir;
  std::error_code ec;
  fs::create_directories(img_dir, ec);
  if (ec) throw IoError("cannot create '" + img_dir.string() + "': " + ec.message());
  char name[32];
  for (size_t i = 0; i < frames.size(); ++i) {
    std::snprintf(name, sizeof name, "%04zu.png", i + 1);
    write_png(img_dir / name, frames[i].pixels);
  }
  write_results(dir / kGroundTruthFile, ground_truth);
}

}  // namespace oet
