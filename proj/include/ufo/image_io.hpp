#pragma once

#include <filesystem>

#include "ufo/image.hpp"

namespace ufo {

// Reads an 8-bit grayscale or RGB raster (PNG, PGM, PPM). Alpha is dropped,
// palettes and sub-byte grayscale are expanded. Throws Error with
// FileUnreadable, DecodeError, UnsupportedBitDepth or EmptyImage.
ImageBuffer load_frame(const std::filesystem::path& path);

// Values are rounded and clamped to [0, 255] on write.
void save_png(const std::filesystem::path& path, const ImageBuffer& img);
void save_pnm(const std::filesystem::path& path, const ImageBuffer& img);

}  // namespace ufo
