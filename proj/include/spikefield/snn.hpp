#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "spikefield/errors.hpp"
#include "spikefield/sim.hpp"

namespace spikefield::snn {

using sim::ResetMode;

struct IFLayerConfig {
  double v_th = 1.0;                 // base firing threshold
  int steps = 256;                   // unrolled time steps T
  ResetMode reset = ResetMode::SubtractThreshold;
  bool detach_reset = true;          // reset path excluded from BPTT
  // Interpretation of the per-pixel deviation R: false modulates the firing
  // threshold to v_th * R (default); true keeps the base threshold and scales
  // the summed spike count by R instead — the literal output-scaling reading.
  bool literal_scale_output = false;

  double surrogate_scale() const { return 1.0 / v_th; }

  void validate() const {
    if (!(v_th > 0.0)) throw Error("v_th must be > 0");
    if (steps < 1) throw Error("steps must be >= 1");
  }
};

// Per-step state retained for backpropagation through time.
struct IFTrace {
  int steps = 0;
  double v_th = 0.0;
  double theta_eff = 0.0;  // threshold actually compared against
  double r = 1.0;
  ResetMode reset = ResetMode::SubtractThreshold;
  bool detach_reset = true;
  bool literal_scale_output = false;
  std::vector<double> charged_v;      // membrane potential after charging, pre-reset
  std::vector<std::uint8_t> spikes;   // S_t
};

struct IFResult {
  double count = 0.0;  // generated spike count (scaled by r in literal mode)
  IFTrace trace;
};

// Unrolled integrate-and-fire dynamics with per-step inputs; the constant-
// input overload below is the production path (a rendered ray intensity is
// static across the T steps).
inline IFResult if_forward_sequence(std::span<const double> inputs, double r,
                                    const IFLayerConfig& cfg) {
  cfg.validate();
  if (!(r > 0.0)) throw Error("nonuniformity value must be > 0");
  if (static_cast<int>(inputs.size()) != cfg.steps)
    throw TraceMismatch("input length " + std::to_string(inputs.size()) +
                        " != cfg.steps " + std::to_string(cfg.steps));
  IFResult out;
  IFTrace& tr = out.trace;
  tr.steps = cfg.steps;
  tr.v_th = cfg.v_th;
  tr.r = r;
  tr.theta_eff = cfg.literal_scale_output ? cfg.v_th : cfg.v_th * r;
  tr.reset = cfg.reset;
  tr.detach_reset = cfg.detach_reset;
  tr.literal_scale_output = cfg.literal_scale_output;
  tr.charged_v.resize(cfg.steps);
  tr.spikes.resize(cfg.steps);

  double v = 0.0;
  long raw_count = 0;
  for (int t = 0; t < cfg.steps; ++t) {
    v += inputs[t];
    tr.charged_v[t] = v;
    bool fire = v >= tr.theta_eff;
    tr.spikes[t] = fire ? 1 : 0;
    if (fire) {
      ++raw_count;
      v = (cfg.reset == ResetMode::SubtractThreshold) ? v - tr.theta_eff : 0.0;
    }
  }
  out.count = cfg.literal_scale_output ? r * static_cast<double>(raw_count)
                                       : static_cast<double>(raw_count);
  return out;
}

inline IFResult if_forward(double intensity, double r, const IFLayerConfig& cfg) {
  if (!(intensity >= 0.0)) throw NegativeIntensity("if_forward: intensity must be >= 0");
  std::vector<double> inputs(static_cast<std::size_t>(cfg.steps), intensity);
  return if_forward_sequence(inputs, r, cfg);
}

// BPTT with the constant surrogate dS/dV = 1/v_th at every step. Returns the
// gradient of (count * upstream_grad) w.r.t. the scalar ray intensity. With
// detach_reset the closed form is upstream * T(T+1) / (2 v_th).
inline double if_backward(const IFTrace& trace, double upstream_grad) {
  if (trace.steps < 1 || static_cast<int>(trace.spikes.size()) != trace.steps ||
      static_cast<int>(trace.charged_v.size()) != trace.steps)
    throw TraceMismatch("trace step count disagrees with its buffers");
  const double sur = 1.0 / trace.v_th;
  const double per_spike = trace.literal_scale_output ? upstream_grad * trace.r : upstream_grad;

  double g_v = 0.0;   // d(out) / dV_t flowing backwards
  double g_x = 0.0;   // accumulated d(out) / d(intensity)
  for (int t = trace.steps - 1; t >= 0; --t) {
    // V_t(post) = H_t - theta_eff * S_t   (SubtractThreshold)
    //           = H_t * (1 - S_t)         (ResetToZero)
    double dv_dh;
    if (trace.reset == ResetMode::SubtractThreshold)
      dv_dh = trace.detach_reset ? 1.0 : 1.0 - trace.theta_eff * sur;
    else
      dv_dh = trace.detach_reset ? (trace.spikes[t] ? 0.0 : 1.0)
                                 : (trace.spikes[t] ? 0.0 : 1.0) - trace.charged_v[t] * sur;
    double g_h = per_spike * sur + g_v * dv_dh;
    g_x += g_h;  // dH_t/dx_t = 1, and the intensity feeds every step
    g_v = g_h;   // dH_t/dV_{t-1} = 1
  }
  return g_x;
}

struct SpikeRenderLoss {
  double loss = 0.0;
  double grad = 0.0;             // d(loss) / d(rendered intensity)
  double generated_count = 0.0;
  double difference = 0.0;       // generated - observed
};

// Long-term spike rendering loss for one ray: D = generated count over T
// steps minus the observed count, loss = D^2, gradient via the surrogate.
inline SpikeRenderLoss spike_render_loss(double rendered_intensity, long observed_count,
                                         double r, const IFLayerConfig& cfg) {
  if (!(rendered_intensity >= 0.0))
    throw NegativeIntensity("spike_render_loss: rendered intensity must be >= 0");
  IFResult fwd = if_forward(rendered_intensity, r, cfg);
  SpikeRenderLoss out;
  out.generated_count = fwd.count;
  out.difference = fwd.count - static_cast<double>(observed_count);
  out.loss = out.difference * out.difference;
  out.grad = 2.0 * out.difference * if_backward(fwd.trace, 1.0);
  return out;
}

}  // namespace spikefield::snn
