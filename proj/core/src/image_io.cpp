#include "oet/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

// jpeglib.h needs FILE and size_t declared first.
#include <jpeglib.h>

#include "oet/error.hpp"

namespace oet {

namespace fs = std::filesystem;

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const fs::path& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  return f;
}

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

double luma(double r, double g, double b) {
  return kLumaR * r + kLumaG * g + kLumaB * b;
}

// Converts interleaved 8- or 16-bit samples to grayscale.
Matrix to_gray(const std::vector<std::uint8_t>& data, int width, int height,
               int channels, int bytes_per_sample) {
  const double max_value = bytes_per_sample == 2 ? 65535.0 : 255.0;
  auto sample = [&](size_t index) -> double {
    if (bytes_per_sample == 2) {
      return (data[2 * index] << 8 | data[2 * index + 1]) / max_value;
    }
    return data[index] / max_value;
  };
  Matrix out(height, width);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const size_t base = (static_cast<size_t>(y) * width + x) * channels;
      if (channels >= 3) {
        out(y, x) = luma(sample(base), sample(base + 1), sample(base + 2));
      } else {
        out(y, x) = sample(base);
      }
    }
  }
  return out.cwiseMax(0.0).cwiseMin(1.0);
}

Matrix read_pgm(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UndecodableImage("cannot open '" + path.string() + "'");
  std::string magic;
  in >> magic;
  auto next_int = [&]() {
    int value = 0;
    while (in >> std::ws && in.peek() == '#') {
      std::string comment;
      std::getline(in, comment);
    }
    if (!(in >> value)) {
      throw UndecodableImage("malformed PGM header in '" + path.string() + "'");
    }
    return value;
  };
  if (magic != "P5" && magic != "P2") {
    throw UndecodableImage("'" + path.string() + "' is not a PGM file");
  }
  const int width = next_int();
  const int height = next_int();
  const int max_value = next_int();
  if (width <= 0 || height <= 0 || max_value <= 0 || max_value > 65535) {
    throw UndecodableImage("bad PGM dimensions in '" + path.string() + "'");
  }
  Matrix out(height, width);
  if (magic == "P2") {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        out(y, x) = static_cast<double>(next_int()) / max_value;
      }
    }
  } else {
    in.get();  // single whitespace before the raster
    const int bytes = max_value > 255 ? 2 : 1;
    std::vector<std::uint8_t> raster(static_cast<size_t>(width) * height * bytes);
    if (!in.read(reinterpret_cast<char*>(raster.data()),
                 static_cast<std::streamsize>(raster.size()))) {
      throw UndecodableImage("truncated PGM raster in '" + path.string() + "'");
    }
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const size_t i = static_cast<size_t>(y) * width + x;
        const int v = bytes == 2 ? (raster[2 * i] << 8 | raster[2 * i + 1])
                                 : raster[i];
        out(y, x) = static_cast<double>(v) / max_value;
      }
    }
  }
  return out.cwiseMin(1.0);
}

Matrix read_png(const fs::path& path) {
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str())) {
    throw UndecodableImage("cannot decode PNG '" + path.string() + "': " +
                           image.message);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    std::string message = image.message;
    png_image_free(&image);
    throw UndecodableImage("cannot decode PNG '" + path.string() + "': " + message);
  }
  const int width = static_cast<int>(image.width);
  const int height = static_cast<int>(image.height);
  return to_gray(buffer, width, height, color ? 3 : 1, 1);
}

struct JpegErrorManager {
  jpeg_error_mgr base;
  std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorManager*>(cinfo->err);
  std::longjmp(err->jump, 1);
}

Matrix read_jpeg(const fs::path& path) {
  FilePtr file = open_file(path, "rb");
  jpeg_decompress_struct cinfo{};
  JpegErrorManager err{};
  cinfo.err = jpeg_std_error(&err.base);
  err.base.error_exit = jpeg_error_exit;
  std::vector<std::uint8_t> pixels;
  int width = 0;
  int height = 0;
  int channels = 0;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw UndecodableImage("cannot decode JPEG '" + path.string() + "'");
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, file.get());
  jpeg_read_header(&cinfo, TRUE);
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  channels = cinfo.output_components;
  pixels.resize(static_cast<size_t>(width) * height * channels);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = pixels.data() +
                   static_cast<size_t>(cinfo.output_scanline) * width * channels;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return to_gray(pixels, width, height, channels, 1);
}

}  // namespace

Matrix read_grayscale(const fs::path& path) {
  std::array<unsigned char, 8> header{};
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UndecodableImage("cannot open '" + path.string() + "'");
    in.read(reinterpret_cast<char*>(header.data()), header.size());
    if (in.gcount() < 2) throw UndecodableImage("'" + path.string() + "' is empty");
  }
  if (header[0] == 0x89 && header[1] == 'P' && header[2] == 'N' && header[3] == 'G') {
    return read_png(path);
  }
  if (header[0] == 0xFF && header[1] == 0xD8) return read_jpeg(path);
  if (header[0] == 'P' && (header[1] == '5' || header[1] == '2')) {
    return read_pgm(path);
  }
  throw UndecodableImage("unrecognized image format: '" + path.string() + "'");
}

void write_png(const fs::path& path, const Matrix& pixels) {
  const int width = static_cast<int>(pixels.cols());
  const int height = static_cast<int>(pixels.rows());
  std::vector<std::uint8_t> buffer(static_cast<size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      buffer[static_cast<size_t>(y) * width + x] = quantize(pixels(y, x));
    }
  }
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0, nullptr)) {
    std::string message = image.message;
    png_image_free(&image);
    throw IoError("cannot write PNG '" + path.string() + "': " + message);
  }
}

void write_pgm(const fs::path& path, const Matrix& pixels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << "P5\n" << pixels.cols() << ' ' << pixels.rows() << "\n255\n";
  for (Eigen::Index y = 0; y < pixels.rows(); ++y) {
    for (Eigen::Index x = 0; x < pixels.cols(); ++x) {
      out.put(static_cast<char>(quantize(pixels(y, x))));
    }
  }
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace oet
