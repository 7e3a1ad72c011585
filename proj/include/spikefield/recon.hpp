#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "spikefield/stream.hpp"
#include "spikefield/types.hpp"

namespace spikefield::recon {

// Reconstruction plus a validity mask: spike-starved pixels (the dark parts
// of a scene) reconstruct to 0 with their mask bit cleared instead of erroring.
struct Reconstruction {
  IntensityImage image;
  std::vector<std::uint8_t> mask;  // 1 = estimate backed by spikes
};

// Texture from inter-spike interval: L = theta / (n - m) for the adjacent
// spike pair around t. The pair containing t wins (ties to the earlier pair);
// at stream edges the nearest pair is used.
inline Reconstruction tfi(const SpikeStream& stream, int t, double theta) {
  if (t < 0 || t >= stream.steps()) throw OutOfBounds("tfi: t outside stream");
  Reconstruction out{IntensityImage(stream.width(), stream.height()),
                     std::vector<std::uint8_t>(
                         static_cast<std::size_t>(stream.width()) * stream.height(), 0)};
  for (int y = 0; y < stream.height(); ++y)
    for (int x = 0; x < stream.width(); ++x) {
      auto pairs = stream.inter_spike_intervals({x, y});
      if (pairs.empty()) continue;
      const std::pair<int, int>* pick = nullptr;
      long best_dist = 0;
      for (const auto& p : pairs) {
        long dist = 0;
        if (t < p.first)
          dist = p.first - t;
        else if (t > p.second)
          dist = t - p.second;
        if (!pick || dist < best_dist) {
          pick = &p;
          best_dist = dist;
        }
        if (dist == 0) break;  // containment, earliest pair
      }
      std::size_t i = static_cast<std::size_t>(y) * stream.width() + x;
      out.image.values[i] = theta / static_cast<double>(pick->second - pick->first);
      out.mask[i] = 1;
    }
  return out;
}

// Texture from playback: L = theta * count / window_length over the length-w
// window centered at t, clipped to the stream bounds.
inline Reconstruction tfp(const SpikeStream& stream, int t, int w, double theta) {
  if (w < 1) throw EmptyWindow("tfp: window must be >= 1");
  std::int64_t lo = std::max<std::int64_t>(static_cast<std::int64_t>(t) - w / 2, 0);
  std::int64_t hi = std::min<std::int64_t>(static_cast<std::int64_t>(t) + (w + 1) / 2,
                                           stream.steps());
  if (lo >= hi) throw EmptyWindow("tfp: window clips to nothing");
  const double len = static_cast<double>(hi - lo);
  Reconstruction out{IntensityImage(stream.width(), stream.height()),
                     std::vector<std::uint8_t>(
                         static_cast<std::size_t>(stream.width()) * stream.height(), 1)};
  for (int y = 0; y < stream.height(); ++y)
    for (int x = 0; x < stream.width(); ++x)
      out.image.at(x, y) = theta *
                           static_cast<double>(stream.spike_count(
                               {x, y}, static_cast<int>(lo), static_cast<int>(hi))) /
                           len;
  return out;
}

// Full-stream firing rate; identical to tfp with w = steps.
inline Reconstruction long_term_rate(const SpikeStream& stream, double theta) {
  return tfp(stream, stream.steps() / 2, stream.steps(), theta);
}

}  // namespace spikefield::recon
