#include "wmarena/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "wmarena/error.hpp"

namespace wmarena {

RgbImage read_png(const std::filesystem::path& path) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&image, path.c_str()))
    throw Error("cannot read PNG " + path.string() + ": " + image.message);
  image.format = PNG_FORMAT_RGB;
  std::vector<png_byte> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw Error("cannot decode PNG " + path.string() + ": " + msg);
  }
  const int w = static_cast<int>(image.width);
  const int h = static_cast<int>(image.height);
  std::vector<double> samples(buffer.size());
  for (std::size_t i = 0; i < buffer.size(); ++i) samples[i] = buffer[i] / 255.0;
  return RgbImage(w, h, std::move(samples));
}

void write_png(const std::filesystem::path& path, const RgbImage& img) {
  if (img.empty()) throw ValidationError("cannot write an empty image");
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(img.width());
  image.height = static_cast<png_uint_32>(img.height());
  image.format = PNG_FORMAT_RGB;
  auto s = img.samples();
  std::vector<png_byte> buffer(s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    buffer[i] = static_cast<png_byte>(std::lround(std::clamp(s[i], 0.0, 1.0) * 255.0));
  if (!png_image_write_to_file(&image, path.c_str(), 0, buffer.data(), 0, nullptr))
    throw Error("cannot write PNG " + path.string() + ": " + image.message);
}

}  // namespace wmarena
