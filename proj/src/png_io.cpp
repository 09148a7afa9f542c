#include "coocmatch/png_io.hpp"

#include <png.h>

#include <cstdio>
#include <stdexcept>
#include <vector>

namespace coocmatch {

namespace {

struct ReadCtx {
  std::FILE* fp = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~ReadCtx() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

struct WriteCtx {
  std::FILE* fp = nullptr;
  png_structp png = nullptr;
  png_infop info = nullptr;
  ~WriteCtx() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

}  // namespace

ImageBuffer load_png(const std::string& path) {
  ReadCtx ctx;
  ctx.fp = std::fopen(path.c_str(), "rb");
  if (!ctx.fp) throw std::runtime_error("cannot open: " + path);

  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                   nullptr);
  if (!ctx.png) throw std::runtime_error("png_create_read_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw std::runtime_error("png_create_info_struct failed");

  std::vector<png_byte> row;
  if (setjmp(png_jmpbuf(ctx.png)))
    throw std::runtime_error("png read error: " + path);

  png_init_io(ctx.png, ctx.fp);
  png_read_info(ctx.png, ctx.info);

  const png_uint_32 width = png_get_image_width(ctx.png, ctx.info);
  const png_uint_32 height = png_get_image_height(ctx.png, ctx.info);
  const int bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  const int color_type = png_get_color_type(ctx.png, ctx.info);

  if (bit_depth == 16)
    throw std::runtime_error("16-bit PNG rejected (pixel-exact 8-bit input "
                             "required): " + path);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(ctx.png);
  if (png_get_valid(ctx.png, ctx.info, PNG_INFO_tRNS))
    png_set_tRNS_to_alpha(ctx.png);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  int channels = png_get_channels(ctx.png, ctx.info);
  if (channels == 4) {
    // tRNS expansion can add an alpha plane after the first update
    png_set_strip_alpha(ctx.png);
    png_read_update_info(ctx.png, ctx.info);
    channels = png_get_channels(ctx.png, ctx.info);
  }
  if (channels != 1 && channels != 3)
    throw std::runtime_error("unsupported PNG channel layout: " + path);

  ImageBuffer image(static_cast<int>(height), static_cast<int>(width),
                    channels, PixelMode::integer);
  row.resize(png_get_rowbytes(ctx.png, ctx.info));
  for (png_uint_32 y = 0; y < height; ++y) {
    png_read_row(ctx.png, row.data(), nullptr);
    for (png_uint_32 x = 0; x < width; ++x)
      for (int c = 0; c < channels; ++c)
        image.at(static_cast<int>(y), static_cast<int>(x), c) =
            static_cast<double>(row[x * channels + c]);
  }
  png_read_end(ctx.png, nullptr);
  return image;
}

void save_png(const ImageBuffer& image, const std::string& path) {
  if (image.mode() != PixelMode::integer)
    throw std::invalid_argument("save_png: integer-mode image required");
  image.validate();

  WriteCtx ctx;
  ctx.fp = std::fopen(path.c_str(), "wb");
  if (!ctx.fp) throw std::runtime_error("cannot open for write: " + path);

  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                    nullptr);
  if (!ctx.png) throw std::runtime_error("png_create_write_struct failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw std::runtime_error("png_create_info_struct failed");

  std::vector<png_byte> row(static_cast<std::size_t>(image.width()) *
                            image.channels());
  if (setjmp(png_jmpbuf(ctx.png)))
    throw std::runtime_error("png write error: " + path);

  png_init_io(ctx.png, ctx.fp);
  png_set_compression_level(ctx.png, 6);
  png_set_IHDR(ctx.png, ctx.info, static_cast<png_uint_32>(image.width()),
               static_cast<png_uint_32>(image.height()), 8,
               image.channels() == 1 ? PNG_COLOR_TYPE_GRAY
                                     : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);

  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x)
      for (int c = 0; c < image.channels(); ++c)
        row[static_cast<std::size_t>(x) * image.channels() + c] =
            static_cast<png_byte>(image.at(y, x, c));
    png_write_row(ctx.png, row.data());
  }
  png_write_end(ctx.png, ctx.info);
}

}  // namespace coocmatch
