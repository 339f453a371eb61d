#pragma once

namespace rrae {

inline constexpr const char* kVersion = "0.1.0";

// Bumped whenever the checkpoint / dataset / manifest layouts change.
inline constexpr int kCheckpointFormatVersion = 1;
inline constexpr int kDatasetFormatVersion = 1;

} // namespace rrae
