#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "m2s2/point_cloud.hpp"

namespace m2s2 {

/// Parameters for the synthetic fixtures. Unset counts fall back to the
/// fixture's default.
struct SynthParams {
  double radius = 1.0;
  int points = 40;       // per circle (or total, for arcs and noise)
  double noise = 0.02;   // std of the Gaussian jitter per coordinate
  int fill_points = 60;  // filled_circle only
  int colors = 0;        // 0: fixture default
  std::uint64_t seed = 0;
};

const std::vector<std::string>& synth_fixture_names();

/// circle: one noisy circle of color 0.
/// filled_circle: three circles of color 0 in a row; the first is filled by
///   a disk of color 1.
/// colocated_circles: one circle per color (default 2) at the same place,
///   angularly interleaved.
/// dichromatic_arcs: upper half color 0, lower half color 1.
/// trichromatic_arcs: three 120 degree arcs of colors 0, 1, 2.
/// uniform_noise: uniform points in [0, 2r]^2 with random colors (default 2).
/// Throws InputError for an unknown name.
LabelledPointCloud synthesize(const std::string& fixture, const SynthParams& params);

}  // namespace m2s2
