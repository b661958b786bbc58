#pragma once

#include <cstdint>

#include "wmarena/image.hpp"

namespace wmarena {

/// Parameters of the synthetic natural-statistics generator.
struct SynthParams {
  double luminance_contrast = 0.018;  // expected std of the 1/f luminance field
  double chroma_contrast = 0.03;      // expected std of the 1/f chroma field
  double texture_sigma = 0.003;       // white luminance noise
  double cutoff = 0.375;              // normalized radius where the 1/f field stops
  double base_low = 0.35;
  double base_high = 0.65;
};

/// Deterministic synthetic image: uniform base colour, a 1/f-amplitude random
/// luminance field, a 1/f chroma field along a random luminance-neutral
/// direction, and white texture noise, clamped to [0,1].
/// Width and height must be multiples of 8 and at least 64.
RgbImage synth_image(std::uint64_t seed, int width = 256, int height = 256,
                     const SynthParams& params = {});

}  // namespace wmarena
