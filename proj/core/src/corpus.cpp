#include "wmarena/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

#include "wmarena/codecs.hpp"
#include "wmarena/error.hpp"
#include "wmarena/keyed_stream.hpp"
#include "wmarena/parallel.hpp"
#include "wmarena/png_io.hpp"
#include "wmarena/synth.hpp"

namespace wmarena {

namespace fs = std::filesystem;

const char* to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::val: return "val";
    case Split::test: return "test";
  }
  return "train";
}

const std::vector<std::string>& known_labels() {
  static const std::vector<std::string> labels = [] {
    std::vector<std::string> out;
    for (const auto& d : registry()) out.push_back(d.id);
    out.emplace_back(kUnwatermarkedLabel);
    return out;
  }();
  return labels;
}

std::vector<ManifestEntry> read_manifest(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open manifest " + file.string());
  std::vector<ManifestEntry> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw ValidationError("manifest line " + std::to_string(lineno) + " has no TAB separator");
    out.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return out;
}

void write_manifest(const fs::path& file, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error("cannot write manifest " + file.string());
  for (const auto& e : entries) out << e.path << '\t' << e.label << '\n';
}

Corpus load_corpus(const fs::path& directory, const std::optional<fs::path>& manifest, int jobs) {
  if (!fs::is_directory(directory))
    throw ValidationError("corpus directory does not exist: " + directory.string());

  std::map<std::string, std::string> labels;
  if (manifest) {
    const auto& allowed = known_labels();
    for (auto& e : read_manifest(*manifest)) {
      if (std::find(allowed.begin(), allowed.end(), e.label) == allowed.end())
        throw ValidationError("manifest names unknown label '" + e.label + "'");
      labels[e.path] = e.label;
    }
  }

  std::vector<std::string> paths;
  for (const auto& it : fs::recursive_directory_iterator(directory)) {
    if (!it.is_regular_file()) continue;
    auto ext = it.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    if (ext == ".png") paths.push_back(fs::relative(it.path(), directory).generic_string());
  }
  std::sort(paths.begin(), paths.end());

  Corpus corpus;
  if (paths.empty()) {
    corpus.warnings.push_back("no PNG images found in " + directory.string());
    return corpus;
  }

  std::vector<std::optional<RgbImage>> images(paths.size());
  std::vector<std::string> failures(paths.size());
  parallel_for(paths.size(), jobs, [&](std::size_t i) {
    try {
      images[i] = pad_to_multiple_of_8(read_png(directory / paths[i]));
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });

  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (!images[i]) {
      corpus.errors.push_back(paths[i] + ": " + failures[i]);
      continue;
    }
    CorpusEntry e;
    e.path = paths[i];
    if (auto it = labels.find(paths[i]); it != labels.end()) e.label = it->second;
    e.image = std::move(*images[i]);
    corpus.entries.push_back(std::move(e));
  }

  std::vector<std::string> p;
  std::vector<std::string> l;
  for (const auto& e : corpus.entries) {
    p.push_back(e.path);
    l.push_back(e.label.value_or(""));
  }
  const auto splits = assign_splits(p, l, 0);
  for (std::size_t i = 0; i < splits.size(); ++i) corpus.entries[i].split = splits[i];
  return corpus;
}

Corpus synthetic_corpus(std::size_t count, std::uint64_t first_seed, int width, int height, int jobs) {
  Corpus corpus;
  corpus.entries.resize(count);
  parallel_for(count, jobs, [&](std::size_t i) {
    char name[40];
    std::snprintf(name, sizeof name, "synth-%06llu.png", static_cast<unsigned long long>(first_seed + i));
    corpus.entries[i].path = name;
    corpus.entries[i].image = synth_image(first_seed + i, width, height);
  });
  return corpus;
}

std::vector<Split> assign_splits(const std::vector<std::string>& paths,
                                 const std::vector<std::string>& labels, std::uint64_t seed) {
  if (paths.size() != labels.size()) throw ValidationError("paths and labels differ in length");
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < paths.size(); ++i) groups[labels[i]].push_back(i);

  std::vector<Split> out(paths.size(), Split::train);
  for (auto& [label, members] : groups) {
    std::vector<std::pair<std::array<std::uint8_t, 32>, std::size_t>> order;
    order.reserve(members.size());
    for (auto i : members)
      order.emplace_back(sha256(paths[i] + '\0' + std::to_string(seed)), i);
    std::sort(order.begin(), order.end());
    const std::size_t tenth = members.size() / 10;
    for (std::size_t k = 0; k < order.size(); ++k) {
      const auto i = order[k].second;
      if (k < tenth) out[i] = Split::val;
      else if (k < 2 * tenth) out[i] = Split::test;
    }
  }
  return out;
}

}  // namespace wmarena
