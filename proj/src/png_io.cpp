#include "mreg/png_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <memory>
#include <string>

#include "mreg/error.hpp"

namespace mreg {
namespace {

struct PngErrorState {
  std::jmp_buf jump;
  char message[256] = {};
};

void on_png_error(png_structp png, png_const_charp msg) {
  auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
  std::snprintf(state->message, sizeof(state->message), "%s", msg);
  std::longjmp(state->jump, 1);
}

void on_png_warning(png_structp, png_const_charp) {}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void append_bytes(png_structp png, png_bytep data, png_size_t length) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + length);
}

void flush_nothing(png_structp) {}

}  // namespace

std::uint8_t quantize_intensity(double v) {
  const double scaled = std::round(std::clamp(v, 0.0, 1.0) * 255.0);
  return static_cast<std::uint8_t>(scaled);
}

Image read_png(const std::filesystem::path& path) {
  const std::string name = path.string();
  FilePtr file(std::fopen(name.c_str(), "rb"));
  if (!file) throw IoError("cannot open " + name);

  png_byte signature[8];
  if (std::fread(signature, 1, 8, file.get()) != 8 || png_sig_cmp(signature, 0, 8) != 0)
    throw IoError("cannot decode " + name + ": not a PNG file");

  PngErrorState state;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &state, on_png_error,
                                           on_png_warning);
  if (png == nullptr) throw IoError("cannot decode " + name + ": libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError("cannot decode " + name + ": libpng init failed");
  }

  std::vector<png_byte> pixels;
  std::vector<png_bytep> rows;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int channels = 0;

  if (setjmp(state.jump)) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("cannot decode " + name + ": " + state.message);
  }

  png_init_io(png, file.get());
  png_set_sig_bytes(png, 8);
  png_read_info(png, info);

  const int color_type = png_get_color_type(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const bool has_alpha = (color_type & PNG_COLOR_MASK_ALPHA) != 0 ||
                         png_get_valid(png, info, PNG_INFO_tRNS) != 0;
  if (has_alpha) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw IoError("cannot decode " + name + ": images with alpha are not supported");
  }
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (bit_depth == 16) png_set_strip_16(png);
  png_read_update_info(png, info);

  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  channels = png_get_channels(png, info);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  pixels.resize(row_bytes * height);
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) rows[y] = pixels.data() + y * row_bytes;
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);

  if (channels != 1 && channels != 3)
    throw IoError("cannot decode " + name + ": unsupported channel count " +
                  std::to_string(channels));

  const Geometry geometry{static_cast<int>(height), static_cast<int>(width), channels};
  std::vector<double> data(geometry.size());
  for (int c = 0; c < channels; ++c)
    for (png_uint_32 y = 0; y < height; ++y)
      for (png_uint_32 x = 0; x < width; ++x)
        data[(static_cast<std::size_t>(c) * height + y) * width + x] =
            pixels[y * row_bytes + x * channels + c] / 255.0;
  return Image(geometry, std::move(data));
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  const int width = img.width();
  const int height = img.height();
  const int channels = img.channels();
  std::vector<png_byte> pixels(static_cast<std::size_t>(width) * height * channels);
  for (int c = 0; c < channels; ++c)
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        pixels[(static_cast<std::size_t>(y) * width + x) * channels + c] =
            quantize_intensity(img.at(c, y, x));
  std::vector<png_bytep> rows(height);
  for (int y = 0; y < height; ++y)
    rows[y] = pixels.data() + static_cast<std::size_t>(y) * width * channels;

  std::vector<std::uint8_t> out;
  PngErrorState state;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state, on_png_error,
                                            on_png_warning);
  if (png == nullptr) throw IoError("libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    throw IoError("libpng init failed");
  }
  if (setjmp(state.jump)) {
    png_destroy_write_struct(&png, &info);
    throw IoError(std::string("PNG encoding failed: ") + state.message);
  }
  png_set_write_fn(png, &out, append_bytes, flush_nothing);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, width, height, 8,
               channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_png(const Image& img, const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = encode_png(img);
  FilePtr file(std::fopen(path.string().c_str(), "wb"));
  if (!file) throw IoError("cannot write " + path.string());
  if (std::fwrite(bytes.data(), 1, bytes.size(), file.get()) != bytes.size())
    throw IoError("short write to " + path.string());
}

}  // namespace mreg
