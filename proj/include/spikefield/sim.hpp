#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spikefield/errors.hpp"
#include "spikefield/parallel.hpp"
#include "spikefield/rng.hpp"
#include "spikefield/stream.hpp"
#include "spikefield/types.hpp"

namespace spikefield::sim {

enum class ResetMode {
  SubtractThreshold,  // soft reset: residual charge carries over
  ResetToZero,        // hard reset: residual charge discarded
};

// Per-pixel multiplicative firing-threshold deviation R(x,y).
struct NonuniformityMap {
  int width = 0;
  int height = 0;
  std::vector<double> r;

  NonuniformityMap() = default;
  NonuniformityMap(int w, int h, double fill = 1.0)
      : width(w), height(h), r(static_cast<std::size_t>(w) * h, fill) {}

  double at(int x, int y) const { return r[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) { return r[static_cast<std::size_t>(y) * width + x]; }

  void validate() const {
    if (r.size() != static_cast<std::size_t>(width) * height)
      throw DimensionMismatch("nonuniformity map: value count does not match dimensions");
    for (double v : r)
      if (!(v > 0.0) || !std::isfinite(v)) throw Error("nonuniformity values must be finite and > 0");
  }

  static NonuniformityMap uniform(int w, int h) { return NonuniformityMap(w, h, 1.0); }

  // R ~ U[1 - half_range, 1 + half_range]; the entry closest to 1 is snapped
  // to exactly 1 so the map carries its own reference pixel.
  static NonuniformityMap random_uniform(int w, int h, double half_range, std::uint64_t seed) {
    NonuniformityMap map(w, h);
    Pcg32 rng(hash_seed(seed, 0x6e6f6e75ull));
    std::size_t ref = 0;
    double best = 1e300;
    for (std::size_t i = 0; i < map.r.size(); ++i) {
      map.r[i] = rng.uniform(1.0 - half_range, 1.0 + half_range);
      double d = std::fabs(map.r[i] - 1.0);
      if (d < best) {
        best = d;
        ref = i;
      }
    }
    map.r[ref] = 1.0;
    return map;
  }
};

struct SpikeCameraModel {
  double theta = 1.0;            // firing threshold phi (C*dV in accumulation units)
  double clock_period = 50e-6;   // seconds per tick (t0)
  ResetMode reset_mode = ResetMode::SubtractThreshold;
  IntensityImage dark_current;   // L_d, per-pixel equivalent intensity per tick
  NonuniformityMap nonuniformity;
  bool shot_noise = false;
  double photon_scale = 100.0;   // photons per unit intensity per tick

  void validate() const {
    if (!(theta > 0.0)) throw Error("theta must be > 0");
    if (!(photon_scale > 0.0)) throw Error("photon_scale must be > 0");
    if (!(clock_period > 0.0)) throw Error("clock_period must be > 0");
    dark_current.validate("dark current");
    nonuniformity.validate();
    if (dark_current.width != nonuniformity.width || dark_current.height != nonuniformity.height)
      throw DimensionMismatch("dark current and nonuniformity map dimensions differ");
  }

  static SpikeCameraModel ideal(int w, int h, double theta = 1.0) {
    SpikeCameraModel m;
    m.theta = theta;
    m.dark_current = IntensityImage(w, h, 0.0);
    m.nonuniformity = NonuniformityMap::uniform(w, h);
    return m;
  }
};

// Integrate-and-fire capture of a frame sequence, steps_per_frame clock ticks
// per frame. Per pixel: V += L + L_d each tick (Poisson-resampled when shot
// noise is on); a spike fires when V reaches theta * R(x,y). The accumulator
// persists across frame boundaries. Per-pixel RNG streams are derived from
// (seed, pixel index), so threading never changes the output.
inline SpikeStream simulate_stream(std::span<const IntensityImage> frames,
                                   const SpikeCameraModel& model, int steps_per_frame,
                                   std::uint64_t seed) {
  if (frames.empty()) throw DimensionMismatch("simulate_stream: no frames");
  if (steps_per_frame < 1) throw Error("steps_per_frame must be >= 1");
  model.validate();
  const int w = frames[0].width, h = frames[0].height;
  for (const auto& f : frames)
    if (f.width != w || f.height != h)
      throw DimensionMismatch("simulate_stream: frame dimensions differ");
  if (model.nonuniformity.width != w || model.nonuniformity.height != h)
    throw DimensionMismatch("simulate_stream: model maps do not match frame dimensions");

  const int total_steps = static_cast<int>(frames.size()) * steps_per_frame;
  SpikeStream::Builder builder(w, h, total_steps, model.clock_period);
  const std::size_t n_px = static_cast<std::size_t>(w) * h;
  const std::size_t fb = builder.frame_bytes();
  std::uint8_t* bits = builder.frame_data(0);

  parallel_chunks(
      static_cast<std::int64_t>(n_px), worker_count() * 8,
      [&](int, std::int64_t b, std::int64_t e) {
        for (std::int64_t i = b; i < e; ++i) {
          const int x = static_cast<int>(i % w), y = static_cast<int>(i / w);
          const double thr = model.theta * model.nonuniformity.at(x, y);
          const double ld = model.dark_current.at(x, y);
          Pcg32 rng(hash_seed(seed, 0x73696d75ull, static_cast<std::uint64_t>(i)));
          const std::uint8_t mask = static_cast<std::uint8_t>(0x80u >> (i & 7));
          const std::size_t byte0 = static_cast<std::size_t>(i) / 8;
          double v = 0.0;
          int t = 0;
          for (const auto& frame : frames) {
            const double mean = frame.values[i] + ld;
            const double lambda = model.photon_scale * mean;
            for (int s = 0; s < steps_per_frame; ++s, ++t) {
              double a = mean;
              if (model.shot_noise)
                a = static_cast<double>(poisson(rng, lambda)) / model.photon_scale;
              v += a;
              if (v >= thr) {
                bits[fb * t + byte0] |= mask;
                v = (model.reset_mode == ResetMode::SubtractThreshold) ? v - thr : 0.0;
              }
            }
          }
        }
      },
      /*align=*/8);
  return std::move(builder).build();
}

inline SpikeStream simulate_stream(const IntensityImage& frame, const SpikeCameraModel& model,
                                   int steps, std::uint64_t seed) {
  return simulate_stream(std::span<const IntensityImage>(&frame, 1), model, steps, seed);
}

// Asymptotic spikes per tick for a constant input; analytic oracle for tests.
inline double firing_rate_expectation(double intensity, double theta, double r, double ld) {
  if (!(theta * r > 0.0)) throw Error("theta * r must be > 0");
  return (intensity + ld) / (theta * r);
}

namespace detail {

// Per-pixel arithmetic mean of adjacent spike gaps; quiet pixels (< 2 spikes)
// are collected rather than imputed.
inline std::vector<double> mean_intervals(const SpikeStream& s,
                                          std::vector<std::size_t>& starved) {
  std::vector<double> mean(static_cast<std::size_t>(s.width()) * s.height(), 0.0);
  for (int y = 0; y < s.height(); ++y)
    for (int x = 0; x < s.width(); ++x) {
      int first = -1, last = -1;
      long n = 0;
      for (int t = 0; t < s.steps(); ++t)
        if (s.get_unchecked(x, y, t)) {
          if (first < 0) first = t;
          last = t;
          ++n;
        }
      std::size_t i = static_cast<std::size_t>(y) * s.width() + x;
      if (n < 2)
        starved.push_back(i);
      else
        mean[i] = static_cast<double>(last - first) / static_cast<double>(n - 1);
    }
  return mean;
}

inline void require_fed(const std::vector<std::size_t>& starved, const char* what) {
  if (starved.empty()) return;
  std::string msg = std::string(what) + ": " + std::to_string(starved.size()) +
                    " pixels with < 2 spikes (first indices:";
  for (std::size_t i = 0; i < std::min<std::size_t>(starved.size(), 4); ++i)
    msg += " " + std::to_string(starved[i]);
  throw InsufficientSpikes(msg + ")");
}

}  // namespace detail

// Two-scene dark-current recovery: per pixel L_d = L1 * T1 / (T_d - T1) with
// T_d, T1 the mean inter-spike intervals of the dark and lit captures.
inline IntensityImage calibrate_dark_current(const SpikeStream& dark_stream,
                                             const SpikeStream& lit_stream, double l1) {
  if (dark_stream.width() != lit_stream.width() || dark_stream.height() != lit_stream.height())
    throw DimensionMismatch("calibrate_dark_current: stream dimensions differ");
  if (!(l1 > 0.0)) throw Error("l1 must be > 0");
  std::vector<std::size_t> starved;
  std::vector<double> t_d = detail::mean_intervals(dark_stream, starved);
  detail::require_fed(starved, "dark stream");
  std::vector<double> t_1 = detail::mean_intervals(lit_stream, starved);
  detail::require_fed(starved, "lit stream");

  IntensityImage ld(dark_stream.width(), dark_stream.height());
  for (std::size_t i = 0; i < ld.values.size(); ++i) {
    if (t_d[i] <= t_1[i])
      throw DegenerateInterval("pixel " + std::to_string(i) +
                               ": dark interval <= lit interval (non-physical input)");
    ld.values[i] = l1 * t_1[i] / (t_d[i] - t_1[i]);
  }
  return ld;
}

// Threshold-deviation recovery from one uniformly lit capture. The reference
// pixel is the one whose response product (l2 + L_d) * T2 sits closest to the
// map-wide mean (ties: lowest row-major index); it maps to exactly 1.
//
// Default orientation follows the per-pixel threshold identity
// C dV * R(x,y) = alpha (L2 + L_d(x,y)) T2(x,y), i.e. R = P(x,y) / P(ref).
// `literal_eq7` emits the reciprocal instead, as the ratio is printed in the
// source material.
inline NonuniformityMap calibrate_nonuniformity(const SpikeStream& stream_l2, double l2,
                                                const IntensityImage& ld_map,
                                                bool literal_eq7 = false) {
  if (ld_map.width != stream_l2.width() || ld_map.height != stream_l2.height())
    throw DimensionMismatch("calibrate_nonuniformity: ld map dimensions differ from stream");
  if (!(l2 > 0.0)) throw Error("l2 must be > 0");
  std::vector<std::size_t> starved;
  std::vector<double> t2 = detail::mean_intervals(stream_l2, starved);
  detail::require_fed(starved, "l2 stream");

  std::vector<double> response(t2.size());
  double mean = 0.0;
  for (std::size_t i = 0; i < t2.size(); ++i) {
    response[i] = (l2 + ld_map.values[i]) * t2[i];
    mean += response[i];
  }
  mean /= static_cast<double>(response.size());

  std::size_t ref = 0;
  double best = std::fabs(response[0] - mean);
  for (std::size_t i = 1; i < response.size(); ++i) {
    double d = std::fabs(response[i] - mean);
    if (d < best) {
      best = d;
      ref = i;
    }
  }

  NonuniformityMap map(stream_l2.width(), stream_l2.height());
  for (std::size_t i = 0; i < response.size(); ++i)
    map.r[i] = literal_eq7 ? response[ref] / response[i] : response[i] / response[ref];
  return map;
}

}  // namespace spikefield::sim
