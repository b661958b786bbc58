#include <cstdio>
#include <map>
#include <sstream>

#include "cli_common.hpp"
#include "wmarena/classifier.hpp"
#include "wmarena/error.hpp"
#include "wmarena/features.hpp"
#include "wmarena/png_io.hpp"
#include "wmarena/report.hpp"

namespace wmarena::cli {

namespace {

struct LabeledSet {
  std::vector<std::vector<double>> features;
  std::vector<std::string> labels;
  std::vector<Split> splits;
};

LabeledSet load_labeled(const std::string& dir, std::string manifest, int jobs) {
  if (manifest.empty()) manifest = (fs::path(dir) / "manifest.tsv").string();
  if (!fs::is_regular_file(manifest)) throw ValidationError("missing manifest: " + manifest);
  CorpusOptions c;
  c.directory = dir;
  c.manifest = manifest;
  const Corpus corpus = c.load(jobs);
  LabeledSet out;
  std::vector<const RgbImage*> images;
  for (const auto& e : corpus.entries) {
    if (!e.label) {
      std::fprintf(stderr, "warning: %s has no label, ignored\n", e.path.c_str());
      continue;
    }
    images.push_back(&e.image);
    out.labels.push_back(*e.label);
    out.splits.push_back(e.split);
  }
  if (images.empty()) throw ValidationError("corpus " + dir + " has no labeled images");
  out.features = extract_features_batch(images, jobs);
  return out;
}

}  // namespace

void register_classifier_commands(CLI::App& app, GlobalOptions& g) {
  {
    auto* cmd = app.add_subcommand("gen-corpus", "Synthesize a labeled corpus, one class per codec plus unwatermarked");
    struct Opts {
      std::size_t per_class = 200;
      std::string out;
      std::string classes = "all";
      int size = 256;
      std::uint64_t first_image = 0;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--per-class", o->per_class, "Images per class")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o->out, "Output directory")->required();
    cmd->add_option("--classes", o->classes, "all, or comma-separated class labels");
    cmd->add_option("--size", o->size, "Image side length")->check(CLI::Range(64, 4096));
    cmd->add_option("--first-image", o->first_image, "Seed of the first synthetic image");
    cmd->callback([o, &g] {
      std::vector<std::string> classes;
      if (o->classes == "all") {
        classes = known_labels();
      } else {
        std::stringstream ss(o->classes);
        for (std::string c; std::getline(ss, c, ',');)
          if (!c.empty()) classes.push_back(c);
      }
      if (o->size % 8) throw ValidationError("--size must be a multiple of 8");
      const auto samples = generate_labeled_corpus(classes, o->per_class, run_seed(g), o->first_image, o->size, g.jobs);
      const fs::path out(o->out);
      std::vector<ManifestEntry> manifest;
      json keys = json::object();
      std::vector<std::string> paths, labels;
      for (const auto& s : samples) {
        fs::create_directories((out / s.path).parent_path());
        write_png(out / s.path, s.image);
        manifest.push_back({s.path, s.label});
        keys[s.path] = {{"key", s.key}, {"payload", s.payload}};
        paths.push_back(s.path);
        labels.push_back(s.label);
      }
      write_manifest(out / "manifest.tsv", manifest);
      write_json_file(out / "keys.json", keys);
      const auto splits = assign_splits(paths, labels, 0);
      json counts = json::object();
      for (const auto& c : classes) counts[c] = {{"train", 0}, {"val", 0}, {"test", 0}};
      for (std::size_t i = 0; i < splits.size(); ++i) {
        auto& v = counts[labels[i]][to_string(splits[i])];
        v = v.get<int>() + 1;
      }
      write_json_file(out / "corpus.json", {{"classes", classes}, {"per_class", o->per_class}, {"size", o->size},
                                            {"images", samples.size()}, {"splits", counts}});
      json config = seed_config(g);
      config["per_class"] = o->per_class;
      config["classes"] = classes;
      config["size"] = o->size;
      config["first_image"] = o->first_image;
      std::vector<std::string> outputs = {"manifest.tsv", "keys.json", "corpus.json"};
      for (const auto& p : paths) outputs.push_back(p);
      write_manifest(out, "gen-corpus", config, {}, outputs);
    });
  }
  {
    auto* cmd = app.add_subcommand("train-classifier", "Train the method-identification classifier");
    struct Opts {
      std::string corpus, manifest, out;
      TrainingParams params;
      std::size_t min_per_class = 50;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--corpus", o->corpus, "Labeled corpus directory")->required()->check(CLI::ExistingDirectory);
    cmd->add_option("--manifest", o->manifest, "Label manifest (default: <corpus>/manifest.tsv)");
    cmd->add_option("--lr", o->params.lr, "Initial learning rate");
    cmd->add_option("--epochs", o->params.epochs, "Epochs")->check(CLI::PositiveNumber);
    cmd->add_option("--lambda", o->params.lambda, "L2 regularization weight");
    cmd->add_option("--min-per-class", o->min_per_class, "Minimum images per class");
    cmd->add_option("--out", o->out, "Output directory")->required();
    cmd->callback([o, &g] {
      const auto set = load_labeled(o->corpus, o->manifest, g.jobs);
      TrainingParams params = o->params;
      params.seed = g.seed;
      const auto model = train_classifier(set.features, set.labels, set.splits, known_labels(), feature_names(),
                                          params, o->min_per_class);
      const fs::path out(o->out);
      fs::create_directories(out);
      write_json_file(out / "model.json", model);
      CorpusOptions c;
      c.directory = o->corpus;
      c.manifest = o->manifest.empty() ? (fs::path(o->corpus) / "manifest.tsv").string() : o->manifest;
      write_manifest(out, "train-classifier",
                     {{"corpus", o->corpus}, {"params", params}, {"min_per_class", o->min_per_class}}, c.inputs(),
                     {"model.json"});
      std::fprintf(stderr, "best epoch %d, validation accuracy %s\n", model.best_epoch,
                   format_number(model.best_val_accuracy).c_str());
    });
  }
  {
    auto* cmd = app.add_subcommand("eval-classifier", "Evaluate a trained classifier on a labeled corpus split");
    struct Opts {
      std::string model, corpus, manifest, out;
      std::string split = "test";
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--model", o->model, "model.json")->required();
    cmd->add_option("--corpus", o->corpus, "Labeled corpus directory")->required()->check(CLI::ExistingDirectory);
    cmd->add_option("--manifest", o->manifest, "Label manifest (default: <corpus>/manifest.tsv)");
    cmd->add_option("--split", o->split, "train, val, test or all")
        ->check(CLI::IsMember({"train", "val", "test", "all"}));
    cmd->add_option("--out", o->out, "Output directory")->required();
    cmd->callback([o, &g] {
      if (!fs::is_regular_file(o->model)) throw ValidationError("missing model: " + o->model);
      const auto model = read_json_file(o->model).get<ClassifierModel>();
      const auto set = load_labeled(o->corpus, o->manifest, g.jobs);
      std::vector<std::vector<double>> x;
      std::vector<std::string> y;
      for (std::size_t i = 0; i < set.labels.size(); ++i)
        if (o->split == "all" || o->split == to_string(set.splits[i])) {
          x.push_back(set.features[i]);
          y.push_back(set.labels[i]);
        }
      if (x.empty()) throw ValidationError("split '" + o->split + "' is empty");
      const auto e = evaluate_classifier(model, x, y);
      const fs::path out(o->out);
      fs::create_directories(out);
      write_json_file(out / "evaluation.json", e);
      write_text_file(out / "confusion.csv", confusion_csv(e));
      write_text_file(out / "evaluation.md", evaluation_markdown(e));
      CorpusOptions c;
      c.directory = o->corpus;
      c.manifest = o->manifest.empty() ? (fs::path(o->corpus) / "manifest.tsv").string() : o->manifest;
      auto inputs = c.inputs();
      inputs.insert(inputs.begin(), o->model);
      write_manifest(out, "eval-classifier", {{"model", o->model}, {"corpus", o->corpus}, {"split", o->split}}, inputs,
                     {"evaluation.json", "confusion.csv", "evaluation.md"});
      std::printf("accuracy %s macro_f1 %s\n", format_number(e.accuracy).c_str(), format_number(e.macro_f1).c_str());
    });
  }
}

}  // namespace wmarena::cli
