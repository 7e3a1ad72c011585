#pragma once

#include <stdexcept>
#include <string>

namespace spikefield {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// ---- file format ----
struct BadMagic : Error {
  explicit BadMagic(const std::string& msg) : Error(msg) {}
};
struct TruncatedPayload : Error {
  explicit TruncatedPayload(const std::string& msg) : Error(msg) {}
};
struct ZeroDimension : Error {
  explicit ZeroDimension(const std::string& msg) : Error(msg) {}
};

// ---- argument / state validation ----
struct OutOfBounds : Error {
  explicit OutOfBounds(const std::string& msg) : Error(msg) {}
};
struct EmptyWindow : Error {
  explicit EmptyWindow(const std::string& msg) : Error(msg) {}
};
struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};
struct ShapeMismatch : Error {
  explicit ShapeMismatch(const std::string& msg) : Error(msg) {}
};
struct TooSmall : Error {
  explicit TooSmall(const std::string& msg) : Error(msg) {}
};

// ---- calibration ----
struct InsufficientSpikes : Error {
  explicit InsufficientSpikes(const std::string& msg) : Error(msg) {}
};
struct DegenerateInterval : Error {
  explicit DegenerateInterval(const std::string& msg) : Error(msg) {}
};

// ---- differentiable ops ----
struct TraceMismatch : Error {
  explicit TraceMismatch(const std::string& msg) : Error(msg) {}
};
struct NegativeIntensity : Error {
  explicit NegativeIntensity(const std::string& msg) : Error(msg) {}
};
struct NegativeDensity : Error {
  explicit NegativeDensity(const std::string& msg) : Error(msg) {}
};
struct CacheMismatch : Error {
  explicit CacheMismatch(const std::string& msg) : Error(msg) {}
};

// ---- training ----
struct DatasetEmpty : Error {
  explicit DatasetEmpty(const std::string& msg) : Error(msg) {}
};
struct NonFiniteLoss : Error {
  explicit NonFiniteLoss(const std::string& msg) : Error(msg) {}
};
struct IndivisibleSteps : Error {
  explicit IndivisibleSteps(const std::string& msg) : Error(msg) {}
};

}  // namespace spikefield
