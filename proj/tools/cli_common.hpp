#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wmarena/attacks.hpp"
#include "wmarena/corpus.hpp"
#include "wmarena/keyed_stream.hpp"
#include "wmarena/serialize.hpp"

namespace wmarena::cli {

namespace fs = std::filesystem;

struct GlobalOptions {
  std::uint64_t seed = 0;
  int jobs = 0;
};

/// --seed, overridden by WMARENA_SEED (decimal or 64 hex characters).
Seed256 run_seed(const GlobalOptions& g);
json seed_config(const GlobalOptions& g);

/// 64 hex characters, or a decimal integer mapped through seed_from_integer.
Seed256 parse_seed_text(const std::string& text);

/// "all" or a comma-separated list of codec ids.
std::vector<std::string> parse_victims(const std::string& text);
/// Comma-separated tokens: policy-set (identity + every rewatermark attack),
/// baselines (default sweeps), all, or explicit attack ids.
std::vector<AttackSpec> parse_attacks(const std::string& text);

struct CorpusOptions {
  std::string directory;
  std::string manifest;
  std::size_t images = 200;
  std::uint64_t first_image = 0;
  int size = 256;
  void add(CLI::App& cmd);
  Corpus load(int jobs) const;
  json config() const;
  std::vector<fs::path> inputs() const;
};

/// Writes manifest.json into `dir`: command, config, tool version, SHA-256 of
/// every input file and the list of outputs (relative names).
void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    const std::vector<fs::path>& inputs, const std::vector<std::string>& outputs,
                    const std::string& file_name = "manifest.json");

std::string file_sha256(const fs::path& file);

void register_codec_commands(CLI::App& app, GlobalOptions& g);
void register_arena_commands(CLI::App& app, GlobalOptions& g);
void register_classifier_commands(CLI::App& app, GlobalOptions& g);
void register_pipeline_commands(CLI::App& app, GlobalOptions& g);

}  // namespace wmarena::cli
