#include <cstdio>
#include <iostream>

#include "cli_common.hpp"
#include "wmarena/arena.hpp"
#include "wmarena/codecs.hpp"
#include "wmarena/error.hpp"
#include "wmarena/png_io.hpp"

namespace wmarena::cli {

namespace {

std::optional<Payload> message_for(const std::string& codec_id, const WatermarkKey& key, const std::string& text) {
  if (!descriptor(codec_id).multi_bit()) {
    if (!text.empty()) throw ValidationError(codec_id + " is zero-bit and takes no --message");
    return std::nullopt;
  }
  if (text.empty() || text == "random") return random_message(codec_id, key);
  return Payload::from_bit_string(text);
}

json detection_doc(const DetectionOutcome& d, const std::optional<Threshold>& t) {
  json j = d;
  if (t) {
    j["threshold"] = *t;
    j["detected"] = t->is_positive(d.score);
  }
  return j;
}

}  // namespace

void register_codec_commands(CLI::App& app, GlobalOptions& g) {
  {
    auto* cmd = app.add_subcommand("embed", "Embed a watermark into one PNG");
    struct Opts {
      std::string codec, key, message, in, out;
      std::optional<double> strength;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--codec", o->codec, "Codec id")->required();
    cmd->add_option("--key", o->key, "Key: 64 hex characters or a decimal integer")->required();
    cmd->add_option("--message", o->message, "Bit string for multi-bit codecs (default: random from the key)");
    cmd->add_option("--strength", o->strength, "Embedding strength (default: codec default)");
    cmd->add_option("in", o->in, "Input PNG")->required()->check(CLI::ExistingFile);
    cmd->add_option("out", o->out, "Output PNG")->required();
    cmd->callback([o] {
      const CodecDescriptor& d = descriptor(o->codec);
      const WatermarkKey key{parse_seed_text(o->key), d.id};
      const auto message = message_for(d.id, key, o->message);
      const RgbImage img = read_png(o->in);
      const double strength = o->strength.value_or(d.default_strength);
      write_png(o->out, embed(d.id, img, key, message, strength));
      json config{{"codec", d.id}, {"strength", strength}, {"message", message}, {"key", key.seed.hex()}};
      write_manifest(fs::path(o->out).parent_path(), "embed", config, {o->in}, {fs::path(o->out).filename().string()},
                     fs::path(o->out).filename().string() + ".manifest.json");
    });
  }
  {
    auto* cmd = app.add_subcommand("detect", "Detect a watermark in one PNG and print the outcome as JSON");
    struct Opts {
      std::string codec, key, message, threshold, in;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--codec", o->codec, "Codec id")->required();
    cmd->add_option("--key", o->key, "Key: 64 hex characters or a decimal integer")->required();
    cmd->add_option("--message", o->message, "Reference bit string (default: the key's random message)");
    cmd->add_option("--threshold", o->threshold, "Threshold JSON from calibrate; adds a detected flag");
    cmd->add_option("in", o->in, "Input PNG")->required()->check(CLI::ExistingFile);
    cmd->callback([o] {
      const CodecDescriptor& d = descriptor(o->codec);
      const WatermarkKey key{parse_seed_text(o->key), d.id};
      const auto message = message_for(d.id, key, o->message);
      std::optional<Threshold> t;
      if (!o->threshold.empty()) {
        t = read_json_file(o->threshold).get<Threshold>();
        if (t->codec_id != d.id) throw ValidationError("threshold " + o->threshold + " is for codec " + t->codec_id);
      }
      const auto outcome = detect(d.id, read_png(o->in), key, message);
      std::cout << detection_doc(outcome, t).dump(2) << "\n";
    });
  }
  {
    auto* cmd = app.add_subcommand("calibrate", "Calibrate a detection threshold on unwatermarked negatives");
    struct Opts {
      std::string codec, negatives, key, out;
      double fpr = 0.01;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--codec", o->codec, "Codec id")->required();
    cmd->add_option("--negatives", o->negatives, "Directory of unwatermarked PNGs")->required()->check(CLI::ExistingDirectory);
    cmd->add_option("--fpr", o->fpr, "Target false-positive rate")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--key", o->key, "Single key for every negative (default: a fresh key per image from the seed)");
    cmd->add_option("--out", o->out, "Threshold JSON (default: stdout)");
    cmd->callback([o, &g] {
      const CodecDescriptor& d = descriptor(o->codec);
      CorpusOptions corpus;
      corpus.directory = o->negatives;
      const Corpus c = corpus.load(g.jobs);
      const Seed256 run = run_seed(g);
      std::vector<double> scores;
      for (const auto& e : c.entries) {
        const WatermarkKey key = o->key.empty() ? victim_key(run, d.id, e.path) : WatermarkKey{parse_seed_text(o->key), d.id};
        scores.push_back(detect(d.id, e.image, key, random_message(d.id, key)).score);
      }
      const Threshold t = calibrate_threshold(scores, d.score_direction(), o->fpr, d.id);
      const json doc = t;
      if (o->out.empty()) {
        std::cout << doc.dump(2) << "\n";
        return;
      }
      write_json_file(o->out, doc);
      json config = seed_config(g);
      config["codec"] = d.id;
      config["fpr"] = o->fpr;
      config["key"] = o->key.empty() ? json(nullptr) : json(parse_seed_text(o->key).hex());
      const fs::path out(o->out);
      write_manifest(out.parent_path(), "calibrate", config, corpus.inputs(), {out.filename().string()},
                     out.filename().string() + ".manifest.json");
    });
  }
}

}  // namespace wmarena::cli
