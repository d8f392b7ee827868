#pragma once

#include <filesystem>

#include "oet/numerics.hpp"

namespace oet {

inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

/// Decodes PNG, JPEG or binary/ASCII PGM (detected from the file header) to
/// grayscale intensities in [0, 1]. Colour images are converted with the
/// luma weights above. Throws UndecodableImage on any failure.
Matrix read_grayscale(const std::filesystem::path& path);

/// 8-bit grayscale PNG; values are clipped to [0, 1] and rounded.
void write_png(const std::filesystem::path& path, const Matrix& pixels);

/// 8-bit binary PGM (P5).
void write_pgm(const std::filesystem::path& path, const Matrix& pixels);

}  // namespace oet
