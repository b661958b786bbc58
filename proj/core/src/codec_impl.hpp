#pragma once

#include <memory>

#include "wmarena/codecs.hpp"

namespace wmarena::detail {

std::unique_ptr<Codec> make_ring_fft();
std::unique_ptr<Codec> make_latent_sig();
std::unique_ptr<Codec> make_chi2_ring();
std::unique_ptr<Codec> make_ss_dct();
std::unique_ptr<Codec> make_pix_add();
std::unique_ptr<Codec> make_pix_wide();

/// Overwrite fraction used by the overwrite codecs.
inline double overwrite_fraction(double strength) { return strength < 1.0 ? strength : 1.0; }

/// Bits decided per slot and majority-voted per bit, plus mean slot confidence.
struct VoteResult {
  std::vector<std::uint8_t> bits;
  double confidence = 0.0;
};

/// Fills raw/message accuracies from decoded bits against a reference.
void score_multibit(DetectionOutcome& out, const std::vector<std::uint8_t>& coded,
                    const std::vector<std::uint8_t>& coded_reference,
                    const std::vector<std::uint8_t>& message,
                    const std::optional<Payload>& reference);

}  // namespace wmarena::detail
