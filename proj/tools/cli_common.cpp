#include "cli_common.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "wmarena/codecs.hpp"
#include "wmarena/error.hpp"

namespace wmarena::cli {

Seed256 parse_seed_text(const std::string& text) {
  if (text.size() == 64) return Seed256::from_hex(text);
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw ValidationError("key/seed must be a decimal integer or 64 hex characters: '" + text + "'");
  try {
    return seed_from_integer(std::stoull(text));
  } catch (const std::out_of_range&) {
    throw ValidationError("seed out of range: '" + text + "'");
  }
}

Seed256 run_seed(const GlobalOptions& g) {
  if (const char* env = std::getenv("WMARENA_SEED"); env && *env) return parse_seed_text(env);
  return seed_from_integer(g.seed);
}

json seed_config(const GlobalOptions& g) {
  json j;
  const char* env = std::getenv("WMARENA_SEED");
  j["seed"] = g.seed;
  j["seed_env"] = env && *env ? json(env) : json(nullptr);
  j["run_seed"] = run_seed(g).hex();
  return j;
}

namespace {

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

}  // namespace

std::vector<std::string> parse_victims(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& token : split_commas(text)) {
    if (token == "all") {
      for (const auto& d : registry())
        if (std::find(out.begin(), out.end(), d.id) == out.end()) out.push_back(d.id);
      continue;
    }
    if (!is_known_codec(token)) throw ValidationError("unknown codec '" + token + "'");
    if (std::find(out.begin(), out.end(), token) == out.end()) out.push_back(token);
  }
  if (out.empty()) throw ValidationError("no victims given");
  return out;
}

std::vector<AttackSpec> parse_attacks(const std::string& text) {
  std::vector<AttackSpec> out;
  auto add = [&](const AttackSpec& s) {
    for (const auto& a : out)
      if (a.id == s.id) return;
    out.push_back(s);
  };
  for (const auto& token : split_commas(text)) {
    if (token == "policy-set" || token == "all") {
      add(identity_attack());
      for (const auto& a : rewatermark_attacks()) add(a);
    }
    if (token == "baselines" || token == "all") {
      for (const auto& a : default_baselines()) add(a);
    }
    if (token != "policy-set" && token != "all" && token != "baselines") add(parse_attack(token));
  }
  if (out.empty()) throw ValidationError("no attacks given");
  return out;
}

void CorpusOptions::add(CLI::App& cmd) {
  cmd.add_option("--corpus", directory, "Directory of PNG images (default: synthetic corpus)")->check(CLI::ExistingDirectory);
  cmd.add_option("--manifest", manifest, "Label manifest (path<TAB>label)");
  cmd.add_option("--images", images, "Synthetic image count when no --corpus is given")->check(CLI::PositiveNumber);
  cmd.add_option("--first-image", first_image, "Seed of the first synthetic image");
  cmd.add_option("--size", size, "Synthetic image side length")->check(CLI::Range(64, 4096));
}

Corpus CorpusOptions::load(int jobs) const {
  if (!directory.empty()) {
    if (!fs::is_directory(directory)) throw ValidationError("corpus directory not found: " + directory);
    std::optional<fs::path> m;
    if (!manifest.empty()) m = fs::path(manifest);
    Corpus c = load_corpus(directory, m, jobs);
    for (const auto& e : c.errors) std::fprintf(stderr, "skipped: %s\n", e.c_str());
    for (const auto& w : c.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    if (c.entries.empty()) throw ValidationError("corpus " + directory + " has no readable images");
    return c;
  }
  if (size % 8) throw ValidationError("--size must be a multiple of 8");
  return synthetic_corpus(images, first_image, size, size, jobs);
}

json CorpusOptions::config() const {
  json j;
  if (!directory.empty()) {
    j["corpus"] = directory;
    j["manifest"] = manifest.empty() ? json(nullptr) : json(manifest);
  } else {
    j["synthetic_images"] = images;
    j["first_image"] = first_image;
    j["size"] = size;
  }
  return j;
}

std::vector<fs::path> CorpusOptions::inputs() const {
  std::vector<fs::path> out;
  if (!directory.empty()) {
    std::vector<fs::path> files;
    for (const auto& e : fs::recursive_directory_iterator(directory))
      if (e.is_regular_file() && e.path().extension() == ".png") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    out.insert(out.end(), files.begin(), files.end());
  }
  if (!manifest.empty()) out.emplace_back(manifest);
  return out;
}

std::string file_sha256(const fs::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  const auto digest = sha256(ss.str());
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (auto b : digest) {
    out += hex[b >> 4];
    out += hex[b & 15];
  }
  return out;
}

void write_manifest(const fs::path& dir, const std::string& command, const json& config,
                    const std::vector<fs::path>& inputs, const std::vector<std::string>& outputs,
                    const std::string& file_name) {
  json m;
  m["schema_version"] = kSchemaVersion;
  m["tool"] = "wmarena";
  m["version"] = WMARENA_VERSION;
  m["command"] = command;
  m["config"] = config;
  json in = json::array();
  for (const auto& p : inputs) in.push_back({{"path", p.generic_string()}, {"sha256", file_sha256(p)}});
  m["inputs"] = in;
  m["outputs"] = outputs;
  write_json_file(dir / file_name, m);
}

}  // namespace wmarena::cli
