#pragma once

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spikefield/errors.hpp"
#include "spikefield/stream.hpp"
#include "spikefield/types.hpp"

namespace spikefield {

// ---------------------------------------------------------------------------
// .spm float maps (nonuniformity / dark-current). Same header prefix as .spk
// with magic "SPM1", steps fixed to 1, then float32 little-endian row-major.
// ---------------------------------------------------------------------------

inline void write_spm(const std::vector<double>& values, int width, int height,
                      const std::string& path) {
  if (values.size() != static_cast<std::size_t>(width) * height)
    throw DimensionMismatch("write_spm: value count does not match dimensions");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("write_spm: cannot open " + path);
  out.write("SPM1", 4);
  detail::put_u32le(out, static_cast<std::uint32_t>(width));
  detail::put_u32le(out, static_cast<std::uint32_t>(height));
  detail::put_u32le(out, 1u);
  detail::put_u64le(out, 0u);
  for (double v : values) {
    float f = static_cast<float>(v);
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    detail::put_u32le(out, u);
  }
  if (!out) throw Error("write_spm: sink I/O failure");
}

inline std::vector<double> read_spm(const std::string& path, int& width, int& height) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_spm: cannot open " + path);
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "SPM1", 4) != 0) throw BadMagic("not a SPM1 map");
  std::uint32_t w = detail::get_u32le(in);
  std::uint32_t h = detail::get_u32le(in);
  detail::get_u32le(in);  // steps, unused for maps
  detail::get_u64le(in);  // clock, unused for maps
  if (w == 0 || h == 0) throw ZeroDimension("zero dimension in map header");
  std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> values(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t u = detail::get_u32le(in);
    if (!in) throw TruncatedPayload("map payload cut short");
    float f;
    std::memcpy(&f, &u, 4);
    values[i] = f;
  }
  width = static_cast<int>(w);
  height = static_cast<int>(h);
  return values;
}

// ---------------------------------------------------------------------------
// 16-bit grayscale PGM (P5, maxval 65535, big-endian samples).
// ---------------------------------------------------------------------------

// Writes intensity/scale rounded to 16 bits. `scale` maps stored integers
// back to intensity units: intensity = stored * scale.
inline void write_pgm16(const IntensityImage& img, double scale, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("write_pgm16: cannot open " + path);
  out << "P5\n" << img.width << " " << img.height << "\n65535\n";
  for (double v : img.values) {
    long s = std::lround(v / scale);
    s = std::clamp(s, 0L, 65535L);
    std::uint8_t b[2] = {static_cast<std::uint8_t>(s >> 8), static_cast<std::uint8_t>(s & 0xff)};
    out.write(reinterpret_cast<const char*>(b), 2);
  }
  if (!out) throw Error("write_pgm16: sink I/O failure");
}

inline IntensityImage read_pgm16(const std::string& path, double scale) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_pgm16: cannot open " + path);
  std::string magic;
  in >> magic;
  if (magic != "P5") throw BadMagic("not a P5 PGM: " + path);
  auto next_int = [&in, &path]() {
    // skip whitespace and '#' comment lines
    for (;;) {
      int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    long v;
    if (!(in >> v)) throw Error("read_pgm16: bad header in " + path);
    return v;
  };
  long w = next_int(), h = next_int(), maxval = next_int();
  in.get();  // single whitespace before raster
  if (w < 1 || h < 1) throw ZeroDimension("zero dimension in PGM header");
  IntensityImage img(static_cast<int>(w), static_cast<int>(h));
  bool two_byte = maxval > 255;
  for (std::size_t i = 0; i < img.values.size(); ++i) {
    int hi = in.get();
    long s = hi;
    if (two_byte) {
      int lo = in.get();
      s = (static_cast<long>(hi) << 8) | lo;
    }
    if (!in) throw TruncatedPayload("PGM raster cut short: " + path);
    img.values[i] = s * scale;
  }
  return img;
}

// ---------------------------------------------------------------------------
// 8-bit grayscale PNG via zlib.
// ---------------------------------------------------------------------------

namespace detail {

inline void png_chunk(std::ostream& out, const char type[4],
                      const std::vector<std::uint8_t>& data) {
  std::uint8_t len[4] = {static_cast<std::uint8_t>(data.size() >> 24),
                         static_cast<std::uint8_t>(data.size() >> 16),
                         static_cast<std::uint8_t>(data.size() >> 8),
                         static_cast<std::uint8_t>(data.size())};
  out.write(reinterpret_cast<const char*>(len), 4);
  out.write(type, 4);
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(type), 4);
  crc = crc32(crc, data.data(), static_cast<uInt>(data.size()));
  std::uint8_t c[4] = {static_cast<std::uint8_t>(crc >> 24), static_cast<std::uint8_t>(crc >> 16),
                       static_cast<std::uint8_t>(crc >> 8), static_cast<std::uint8_t>(crc)};
  out.write(reinterpret_cast<const char*>(c), 4);
}

}  // namespace detail

inline void write_png_gray8(const std::vector<std::uint8_t>& pixels, int width, int height,
                            const std::string& path) {
  if (pixels.size() != static_cast<std::size_t>(width) * height)
    throw DimensionMismatch("write_png_gray8: pixel count does not match dimensions");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("write_png_gray8: cannot open " + path);
  static const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  out.write(reinterpret_cast<const char*>(sig), 8);

  std::vector<std::uint8_t> ihdr(13);
  auto put32 = [](std::uint8_t* p, std::uint32_t v) {
    p[0] = static_cast<std::uint8_t>(v >> 24);
    p[1] = static_cast<std::uint8_t>(v >> 16);
    p[2] = static_cast<std::uint8_t>(v >> 8);
    p[3] = static_cast<std::uint8_t>(v);
  };
  put32(ihdr.data(), static_cast<std::uint32_t>(width));
  put32(ihdr.data() + 4, static_cast<std::uint32_t>(height));
  ihdr[8] = 8;   // bit depth
  ihdr[9] = 0;   // grayscale
  ihdr[10] = ihdr[11] = ihdr[12] = 0;
  detail::png_chunk(out, "IHDR", ihdr);

  // One filter byte (0 = none) per scanline, then zlib-compress.
  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(height) * (width + 1));
  for (int y = 0; y < height; ++y) {
    raw.push_back(0);
    raw.insert(raw.end(), pixels.begin() + static_cast<std::size_t>(y) * width,
               pixels.begin() + static_cast<std::size_t>(y + 1) * width);
  }
  uLongf bound = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> idat(bound);
  if (compress2(idat.data(), &bound, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw Error("write_png_gray8: zlib compression failed");
  idat.resize(bound);
  detail::png_chunk(out, "IDAT", idat);
  detail::png_chunk(out, "IEND", {});
  if (!out) throw Error("write_png_gray8: sink I/O failure");
}

// Linear scaling: pixel = clamp(round(value * 255 / scale)). The default CLI
// scale maps the firing threshold to full white.
inline void write_png_gray8(const IntensityImage& img, double scale, const std::string& path) {
  std::vector<std::uint8_t> px(img.values.size());
  for (std::size_t i = 0; i < px.size(); ++i) {
    long v = std::lround(img.values[i] * 255.0 / scale);
    px[i] = static_cast<std::uint8_t>(std::clamp(v, 0L, 255L));
  }
  write_png_gray8(px, img.width, img.height, path);
}

// FNV-1a 64-bit, used for dataset manifest content hashes.
inline std::uint64_t fnv1a64_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("fnv1a64_file: cannot open " + path);
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    std::streamsize n = in.gcount();
    for (std::streamsize i = 0; i < n; ++i) {
      h ^= static_cast<std::uint8_t>(buf[i]);
      h *= 0x100000001b3ull;
    }
    if (!in) break;
  }
  return h;
}

}  // namespace spikefield
