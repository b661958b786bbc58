#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "wmarena/transforms.hpp"

// Key-independent geometry of the codecs (which coefficients carry what) and
// the QIM primitives. This is public method knowledge: the keyless feature
// extractor reads it, the codecs build on it.
namespace wmarena::geometry {

// ---- QIM -------------------------------------------------------------------
// Lattice for bit b with dither d (in units of step): (k + d + b/2) * step.

double qim_embed(double c, int bit, double dither, double step);
int qim_decide(double c, double dither, double step);
/// 1 on either coset lattice, 0 halfway between them.
double qim_confidence(double c, double dither, double step);
/// exp(2*pi*i * c / (step/2)); both cosets of one dither share this phase.
std::complex<double> lattice_phasor(double c, double step);

/// Largest odd integer <= x (at least 1 when x >= 1, else 0).
int largest_odd_at_most(double x);

// ---- ring-fft ----------------------------------------------------------------

inline constexpr int kRingCount = 8;
inline constexpr double kRingInner = 0.05;    // latent-normalized radius of ring 0
inline constexpr double kRingWidth = 0.03125; // 8 rings reach 0.30

/// Even comb: (u + v) even. Odd comb: the rest.
inline bool even_comb(int u, int v) { return ((u + v) % 2 + 2) % 2 == 0; }

struct RingFftLayout {
  int latent_width = 0;
  int latent_height = 0;
  std::vector<std::vector<FreqIndex>> pattern;    // even comb, representatives
  std::vector<std::vector<FreqIndex>> reference;  // odd comb, every member
};
const RingFftLayout& ring_fft_layout(int latent_width, int latent_height);

// ---- chi2-ring ---------------------------------------------------------------

inline constexpr double kChi2Inner = 0.00625;
inline constexpr double kChi2Outer = 0.0625;
inline constexpr double kChi2FitOuter = 0.1875;
inline constexpr double kChi2PatternScale = 1.3;

struct Chi2Layout {
  int width = 0;
  int height = 0;
  std::vector<FreqIndex> mask;         // even comb in the band, representatives
  std::vector<double> mask_radius;     // normalized radius of each mask entry
  std::vector<FreqIndex> fit;          // off-mask representatives used for the spectrum fit
  std::vector<double> fit_radius;
  std::vector<int> fit_bin;            // half-step bins on a 256-point reference grid
};
const Chi2Layout& chi2_layout(int width, int height);

/// Per-real-dimension standard deviation predicted at each mask radius from a
/// count-weighted log-log power-law fit of the off-mask power spectrum.
std::vector<double> chi2_sigma(const Spectrum2D& s, const Chi2Layout& layout);

// ---- latent-sig --------------------------------------------------------------

inline constexpr int kLatentSigBits = 48;
inline constexpr double kLatentSigStep = 0.02;

struct BlockSlot {
  int block = 0;  // row-major block index
  int zz = 0;     // zig-zag coefficient index
  int bit = 0;
};
/// Zig-zag indices 3, 4, 5, ... (z-major, then blocks) of the latent block DCT;
/// first 48 slots, one per bit.
const std::vector<BlockSlot>& latent_sig_slots(int latent_width, int latent_height);

// ---- ss-dct -------------------------------------------------------------------

inline constexpr int kSsDctCodedBits = 100;
inline constexpr int kSsDctZzFirst = 6;
inline constexpr int kSsDctZzLast = 14;
inline constexpr double kSsDctStep = 0.09;

struct SsDctLayout {
  std::vector<BlockSlot> slots;  // block-major enumeration, bit = slot mod 100
  int per_bit = 0;               // odd
};
const SsDctLayout& ss_dct_layout(int width, int height);

// ---- pix-add / pix-wide -----------------------------------------------------

struct PixConfig {
  int bits = 0;
  double band_low = 0.0;   // normalized radius of DCT index k: k / (2N)
  double band_high = 0.0;
  int per_bit = 0;         // upper bound; smaller images get fewer (odd) slots
  double base_step = 0.0;
};
const PixConfig& pix_add_config();
const PixConfig& pix_wide_config();

struct PixLayout {
  std::vector<std::size_t> flat;  // row-major index into the global DCT plane
  std::vector<int> bit;           // slot i carries bit (i mod bits)
  int per_bit = 0;
  int bits = 0;
};
const PixLayout& pix_layout(const PixConfig& cfg, int width, int height);

/// Perceptual activity ladder: level in {-2, -1, 0, 1} from the mean 8x8
/// block standard deviation of the luminance; step multiplier 2^(level/2).
inline constexpr int kPixLevelMin = -2;
inline constexpr int kPixLevelMax = 1;
inline constexpr double kPixActivityReference = 0.0117;
double block_activity(const ImagePlane& y);
int activity_level(double activity);
double level_multiplier(int level);

}  // namespace wmarena::geometry
