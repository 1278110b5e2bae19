#pragma once

// PNG (via libpng's simplified API) and binary PGM/PPM reading and writing.

#include <png.h>

#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "retinoblob/error.hpp"
#include "retinoblob/image.hpp"

namespace retinoblob {

namespace detail {

struct Decoded {
  Size size;
  int channels = 0;  // 1 (gray) or 3 (rgb)
  std::vector<std::uint8_t> bytes;
};

inline std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) throw IoError("file not found: " + path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return data;
}

inline void write_file(const std::filesystem::path& path, const void* data, std::size_t size) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

inline Decoded decode_png(const std::vector<std::uint8_t>& data, const std::string& name) {
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, data.data(), data.size()))
    throw FormatError("corrupt PNG " + name + ": " + image.message);
  const bool colour = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  // Read with an alpha channel so the library never composites; we drop it below.
  image.format = colour ? PNG_FORMAT_RGBA : PNG_FORMAT_GA;
  const int in_ch = colour ? 4 : 2;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw FormatError("corrupt PNG " + name + ": " + msg);
  }
  Decoded out;
  out.size = {static_cast<int>(image.width), static_cast<int>(image.height)};
  out.channels = colour ? 3 : 1;
  out.bytes.reserve(out.size.area() * static_cast<std::size_t>(out.channels));
  for (std::size_t i = 0; i < buffer.size(); i += static_cast<std::size_t>(in_ch))
    for (int c = 0; c < out.channels; ++c) out.bytes.push_back(buffer[i + static_cast<std::size_t>(c)]);
  return out;
}

inline Decoded decode_pnm(const std::vector<std::uint8_t>& data, const std::string& name) {
  std::size_t pos = 2;
  auto next_int = [&]() -> long {
    for (;;) {
      while (pos < data.size() && std::isspace(data[pos])) ++pos;
      if (pos < data.size() && data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    if (pos >= data.size() || !std::isdigit(data[pos])) throw FormatError("malformed PNM header: " + name);
    long v = 0;
    while (pos < data.size() && std::isdigit(data[pos])) {
      v = v * 10 + (data[pos++] - '0');
      if (v > 1'000'000'000) throw FormatError("malformed PNM header: " + name);
    }
    return v;
  };
  Decoded out;
  out.channels = data[1] == '6' ? 3 : 1;
  const long w = next_int();
  const long h = next_int();
  const long maxval = next_int();
  if (w < 1 || h < 1 || maxval < 1 || maxval > 255)
    throw FormatError("unsupported PNM geometry or depth: " + name);
  ++pos;  // single whitespace after maxval
  const std::size_t need = static_cast<std::size_t>(w) * static_cast<std::size_t>(h) *
                           static_cast<std::size_t>(out.channels);
  if (pos > data.size() || data.size() - pos < need) throw FormatError("truncated PNM data: " + name);
  out.size = {static_cast<int>(w), static_cast<int>(h)};
  out.bytes.assign(data.begin() + static_cast<std::ptrdiff_t>(pos),
                   data.begin() + static_cast<std::ptrdiff_t>(pos + need));
  if (maxval != 255)
    for (auto& b : out.bytes) b = static_cast<std::uint8_t>((b * 255 + maxval / 2) / maxval);
  return out;
}

inline Decoded decode(const std::filesystem::path& path) {
  const auto data = read_file(path);
  static constexpr std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (data.size() >= 8 && std::memcmp(data.data(), kPngMagic, 8) == 0) return decode_png(data, path.string());
  if (data.size() >= 2 && data[0] == 'P' && (data[1] == '5' || data[1] == '6'))
    return decode_pnm(data, path.string());
  throw FormatError("unsupported or corrupt image format: " + path.string());
}

inline std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  for (auto& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

inline void encode(const std::filesystem::path& path, Size size, int channels, const std::uint8_t* bytes) {
  const std::string ext = lower_extension(path);
  if (ext == ".pgm" || ext == ".ppm") {
    if ((ext == ".pgm") != (channels == 1))
      throw DataError("extension " + ext + " does not match channel count for " + path.string());
    std::string header = (channels == 1 ? "P5\n" : "P6\n") + std::to_string(size.width) + " " +
                         std::to_string(size.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), bytes, bytes + size.area() * static_cast<std::size_t>(channels));
    write_file(path, out.data(), out.size());
    return;
  }
  png_image image;
  std::memset(&image, 0, sizeof image);
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(size.width);
  image.height = static_cast<png_uint_32>(size.height);
  image.format = channels == 1 ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  png_alloc_size_t needed = 0;
  if (!png_image_write_to_memory(&image, nullptr, &needed, 0, bytes, 0, nullptr))
    throw IoError("PNG encoding failed for " + path.string() + ": " + image.message);
  std::vector<std::uint8_t> buffer(needed);
  if (!png_image_write_to_memory(&image, buffer.data(), &needed, 0, bytes, 0, nullptr))
    throw IoError("PNG encoding failed for " + path.string() + ": " + image.message);
  write_file(path, buffer.data(), needed);
}

}  // namespace detail

/// Decodes PNG, PGM (P5) or PPM (P6). Gray files are replicated into RGB and
/// alpha is dropped.
[[nodiscard]] inline ColorImage load_color(const std::filesystem::path& path) {
  const auto d = detail::decode(path);
  ColorImage out(d.size);
  auto& px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (d.channels == 3)
      px[i] = {d.bytes[3 * i], d.bytes[3 * i + 1], d.bytes[3 * i + 2]};
    else
      px[i] = gray_to_rgb(d.bytes[i]);
  }
  return out;
}

/// Single-channel files load verbatim; colour files go through luma().
[[nodiscard]] inline GrayImage load_gray(const std::filesystem::path& path) {
  const auto d = detail::decode(path);
  if (d.channels == 1) return GrayImage(d.size.width, d.size.height, d.bytes);
  GrayImage out(d.size);
  for (std::size_t i = 0; i < out.pixels().size(); ++i)
    out.pixels()[i] = luma({d.bytes[3 * i], d.bytes[3 * i + 1], d.bytes[3 * i + 2]});
  return out;
}

[[nodiscard]] inline BinaryMask load_mask(const std::filesystem::path& path) {
  return gray_to_mask(load_gray(path));
}

/// Format chosen from the extension: .pgm/.ppm write binary PNM, anything else PNG.
inline void save_gray(const GrayImage& img, const std::filesystem::path& path) {
  detail::encode(path, img.size(), 1, img.pixels().data());
}

inline void save_mask(const BinaryMask& mask, const std::filesystem::path& path) {
  save_gray(mask_to_gray(mask), path);
}

inline void save_color(const ColorImage& img, const std::filesystem::path& path) {
  static_assert(sizeof(Rgb) == 3);
  detail::encode(path, img.size(), 3, reinterpret_cast<const std::uint8_t*>(img.pixels().data()));
}

}  // namespace retinoblob
