#pragma once

#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "spikefield/errors.hpp"
#include "spikefield/types.hpp"

namespace spikefield {

// Bit-packed H x W x T binary spike tensor. Packing is frame-major, then
// row-major within a frame, MSB-first within each byte; every frame is padded
// to a whole byte boundary so single frames can be sliced without bit shifts.
// Streams are immutable after construction; use SpikeStream::Builder to fill
// one in.
class SpikeStream {
 public:
  SpikeStream(int width, int height, int steps, double clock_period,
              std::vector<std::uint8_t> bits)
      : width_(width), height_(height), steps_(steps), clock_period_(clock_period),
        bits_(std::move(bits)) {
    if (width_ < 1 || height_ < 1 || steps_ < 1)
      throw ZeroDimension("spike stream dimensions must be >= 1");
    if (!(clock_period_ > 0.0))
      throw Error("clock_period must be > 0");
    if (bits_.size() != payload_bytes())
      throw TruncatedPayload("bit buffer has " + std::to_string(bits_.size()) +
                             " bytes, expected " + std::to_string(payload_bytes()));
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int steps() const { return steps_; }
  double clock_period() const { return clock_period_; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::size_t frame_bytes() const {
    return (static_cast<std::size_t>(width_) * height_ + 7) / 8;
  }
  std::size_t payload_bytes() const { return frame_bytes() * steps_; }

  bool get(const PixelCoord& p, int t) const {
    require_in_bounds(p, width_, height_);
    if (t < 0 || t >= steps_) throw OutOfBounds("step " + std::to_string(t));
    return get_unchecked(p.x, p.y, t);
  }

  bool get_unchecked(int x, int y, int t) const {
    std::size_t i = static_cast<std::size_t>(y) * width_ + x;
    return (bits_[frame_bytes() * t + i / 8] >> (7 - (i & 7))) & 1u;
  }

  // Number of spikes at p within [t_begin, t_end).
  long spike_count(const PixelCoord& p, int t_begin, int t_end) const {
    require_in_bounds(p, width_, height_);
    if (t_begin < 0 || t_begin > t_end || t_end > steps_)
      throw OutOfBounds("range [" + std::to_string(t_begin) + "," +
                        std::to_string(t_end) + ") not within [0," +
                        std::to_string(steps_) + "]");
    long n = 0;
    for (int t = t_begin; t < t_end; ++t) n += get_unchecked(p.x, p.y, t);
    return n;
  }

  long spike_count(const PixelCoord& p) const { return spike_count(p, 0, steps_); }

  std::vector<int> spike_times(const PixelCoord& p) const {
    require_in_bounds(p, width_, height_);
    std::vector<int> times;
    for (int t = 0; t < steps_; ++t)
      if (get_unchecked(p.x, p.y, t)) times.push_back(t);
    return times;
  }

  // Ordered adjacent spike-time pairs; empty when the pixel has < 2 spikes.
  std::vector<std::pair<int, int>> inter_spike_intervals(const PixelCoord& p) const {
    std::vector<int> times = spike_times(p);
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 1; i < times.size(); ++i)
      pairs.emplace_back(times[i - 1], times[i]);
    return pairs;
  }

  // Copy of the window [t_center - floor(w/2), t_center + ceil(w/2)) clipped
  // to [0, steps).
  SpikeStream slice_window(int t_center, int w) const {
    std::int64_t lo = static_cast<std::int64_t>(t_center) - w / 2;
    std::int64_t hi = static_cast<std::int64_t>(t_center) + (w + 1) / 2;
    lo = std::max<std::int64_t>(lo, 0);
    hi = std::min<std::int64_t>(hi, steps_);
    if (w <= 0 || lo >= hi)
      throw EmptyWindow("window of length " + std::to_string(w) + " at t=" +
                        std::to_string(t_center) + " clips to nothing");
    std::size_t fb = frame_bytes();
    std::vector<std::uint8_t> out(bits_.begin() + lo * fb, bits_.begin() + hi * fb);
    return SpikeStream(width_, height_, static_cast<int>(hi - lo), clock_period_,
                       std::move(out));
  }

  bool operator==(const SpikeStream& o) const {
    return width_ == o.width_ && height_ == o.height_ && steps_ == o.steps_ &&
           clock_period_ == o.clock_period_ && bits_ == o.bits_;
  }

  class Builder {
   public:
    Builder(int width, int height, int steps, double clock_period)
        : width_(width), height_(height), steps_(steps), clock_period_(clock_period) {
      if (width_ < 1 || height_ < 1 || steps_ < 1)
        throw ZeroDimension("spike stream dimensions must be >= 1");
      frame_bytes_ = (static_cast<std::size_t>(width_) * height_ + 7) / 8;
      bits_.assign(frame_bytes_ * steps_, 0);
    }

    void set(int x, int y, int t) {
      std::size_t i = static_cast<std::size_t>(y) * width_ + x;
      bits_[frame_bytes_ * t + i / 8] |= static_cast<std::uint8_t>(0x80u >> (i & 7));
    }

    std::uint8_t* frame_data(int t) { return bits_.data() + frame_bytes_ * t; }
    std::size_t frame_bytes() const { return frame_bytes_; }

    SpikeStream build() && {
      return SpikeStream(width_, height_, steps_, clock_period_, std::move(bits_));
    }

   private:
    int width_, height_, steps_;
    double clock_period_;
    std::size_t frame_bytes_;
    std::vector<std::uint8_t> bits_;
  };

 private:
  int width_;
  int height_;
  int steps_;
  double clock_period_;  // seconds per step (t0)
  std::vector<std::uint8_t> bits_;
};

namespace detail {

inline void put_u32le(std::ostream& out, std::uint32_t v) {
  std::uint8_t b[4] = {static_cast<std::uint8_t>(v), static_cast<std::uint8_t>(v >> 8),
                       static_cast<std::uint8_t>(v >> 16), static_cast<std::uint8_t>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

inline void put_u64le(std::ostream& out, std::uint64_t v) {
  std::uint8_t b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

inline std::uint32_t get_u32le(std::istream& in) {
  std::uint8_t b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

inline std::uint64_t get_u64le(std::istream& in) {
  std::uint8_t b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace detail

// .spk layout: "SPK1", u32le width, u32le height, u32le steps, u64le clock
// period in integer nanoseconds, then `steps` packed frames. Returns total
// bytes written.
inline std::size_t write_spk(const SpikeStream& stream, std::ostream& out) {
  out.write("SPK1", 4);
  detail::put_u32le(out, static_cast<std::uint32_t>(stream.width()));
  detail::put_u32le(out, static_cast<std::uint32_t>(stream.height()));
  detail::put_u32le(out, static_cast<std::uint32_t>(stream.steps()));
  std::uint64_t clock_ns =
      static_cast<std::uint64_t>(std::llround(stream.clock_period() * 1e9));
  detail::put_u64le(out, clock_ns);
  out.write(reinterpret_cast<const char*>(stream.bits().data()),
            static_cast<std::streamsize>(stream.payload_bytes()));
  if (!out) throw Error("write_spk: sink I/O failure");
  return 24 + stream.payload_bytes();
}

inline std::size_t write_spk(const SpikeStream& stream, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("write_spk: cannot open " + path);
  return write_spk(stream, out);
}

inline SpikeStream read_spk(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "SPK1", 4) != 0)
    throw BadMagic("not a SPK1 stream");
  std::uint32_t w = detail::get_u32le(in);
  std::uint32_t h = detail::get_u32le(in);
  std::uint32_t steps = detail::get_u32le(in);
  std::uint64_t clock_ns = detail::get_u64le(in);
  if (!in) throw TruncatedPayload("header cut short");
  if (w == 0 || h == 0 || steps == 0) throw ZeroDimension("zero dimension in header");
  if (clock_ns == 0) throw Error("clock period must be > 0");
  std::size_t frame_bytes = (static_cast<std::size_t>(w) * h + 7) / 8;
  std::size_t want = frame_bytes * steps;
  std::vector<std::uint8_t> bits(want);
  in.read(reinterpret_cast<char*>(bits.data()), static_cast<std::streamsize>(want));
  if (static_cast<std::size_t>(in.gcount()) != want)
    throw TruncatedPayload("payload has " + std::to_string(in.gcount()) +
                           " bytes, header implies " + std::to_string(want));
  if (in.peek() != std::char_traits<char>::eof())
    throw TruncatedPayload("trailing bytes after payload");
  return SpikeStream(static_cast<int>(w), static_cast<int>(h),
                     static_cast<int>(steps), static_cast<double>(clock_ns) * 1e-9,
                     std::move(bits));
}

inline SpikeStream read_spk(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("read_spk: cannot open " + path);
  return read_spk(in);
}

}  // namespace spikefield
