#pragma once

#include <string>
#include <vector>

#include "wmarena/image.hpp"

namespace wmarena {

/// Keyless feature groups, in order:
///   radial_00..31      log mean power of the full-frame luminance FFT in 32
///                      radius bins of width 1/64 (DC excluded)
///   ring_comb_0..7     log(even-comb / odd-comb mean power) per latent FFT ring
///   ring_disp_0..7     even-comb / odd-comb coefficient of variation of magnitudes
///   band_comb_0..1     log(even / odd comb power) in the full-frame bands
///                      [0.00625, 0.0375) and [0.0375, 0.0625)
///   dct_mean_{lo,mid,hi}, dct_kurt_{lo,mid,hi}
///                      8x8 block DCT mean |c| and kurtosis, zig-zag 1-5, 6-14, 15-30
///   resid_logvar, resid_skew, resid_kurt
///                      moments of the 3x3 Laplacian residual
///   lattice_{latent-sig,ss-dct,pix-add,pix-wide}
///                      1 - mean per-bit phase concentration on each codec's public
///                      QIM geometry (pix: best activity level); 0 on a lattice, ~1 off it
inline constexpr std::size_t kFeatureCount = 63;
inline constexpr double kFeatureLogFloor = 1e-12;

const std::vector<std::string>& feature_names();

/// Deterministic, key-free. Images whose sides are not multiples of 8 are
/// edge-padded first.
std::vector<double> extract_features(const RgbImage& img);

std::vector<std::vector<double>> extract_features_batch(const std::vector<const RgbImage*>& images, int jobs = 0);

}  // namespace wmarena
