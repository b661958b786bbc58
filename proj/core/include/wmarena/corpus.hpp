#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wmarena/image.hpp"

namespace wmarena {

enum class Split { train, val, test };

const char* to_string(Split s);

struct CorpusEntry {
  std::string path;  // relative to the corpus directory, '/' separated
  std::optional<std::string> label;
  RgbImage image;
  Split split = Split::train;
};

struct Corpus {
  std::vector<CorpusEntry> entries;  // sorted by path
  std::vector<std::string> errors;   // one message per skipped file
  std::vector<std::string> warnings;
  std::size_t skipped() const { return errors.size(); }
};

/// One line of a `path<TAB>label` manifest.
struct ManifestEntry {
  std::string path;
  std::string label;
};

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& file);
void write_manifest(const std::filesystem::path& file, const std::vector<ManifestEntry>& entries);

/// Labels accepted in manifests: the codec ids plus "unwatermarked".
const std::vector<std::string>& known_labels();
inline constexpr const char* kUnwatermarkedLabel = "unwatermarked";

/// Loads every *.png below `directory` (sorted by relative path), pads each to
/// multiples of 8, and attaches manifest labels. Unreadable files are skipped
/// and recorded; an unknown manifest label is a ValidationError.
Corpus load_corpus(const std::filesystem::path& directory,
                   const std::optional<std::filesystem::path>& manifest = std::nullopt,
                   int jobs = 0);

/// Stratified split: inside each label group entries are ordered by
/// SHA-256(path, seed); the first floor(n/10) go to val, the next floor(n/10)
/// to test, the rest to train. Pure function of (paths, labels, seed).
/// In-memory corpus of synthetic images with seeds first_seed .. first_seed+count-1,
/// paths "synth-<seed>.png" (seed zero-padded to 6 digits), unlabeled.
Corpus synthetic_corpus(std::size_t count, std::uint64_t first_seed = 0, int width = 256,
                        int height = 256, int jobs = 0);

std::vector<Split> assign_splits(const std::vector<std::string>& paths,
                                 const std::vector<std::string>& labels, std::uint64_t seed);

}  // namespace wmarena
