#pragma once

#include <filesystem>

#include "wmarena/image.hpp"

namespace wmarena {

/// Decodes any PNG libpng understands to 8-bit RGB, samples scaled to [0,1].
RgbImage read_png(const std::filesystem::path& path);

/// Writes 8-bit RGB; samples are clamped and rounded to the nearest of 256 levels.
void write_png(const std::filesystem::path& path, const RgbImage& img);

}  // namespace wmarena
