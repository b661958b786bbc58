#include <cstdio>

#include "cli_common.hpp"
#include "wmarena/arena.hpp"
#include "wmarena/error.hpp"
#include "wmarena/report.hpp"

namespace wmarena::cli {

namespace {

void require_file(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) throw ValidationError(std::string("missing ") + what + ": " + path);
}

}  // namespace

void register_arena_commands(CLI::App& app, GlobalOptions& g) {
  {
    auto* cmd = app.add_subcommand("matrix", "Build the victim x attack interference matrix");
    struct Opts {
      CorpusOptions corpus;
      std::string victims = "all";
      std::string attacks = "policy-set";
      std::string out;
      double fpr = 0.01;
      std::size_t min_negatives = 100;
    };
    auto o = std::make_shared<Opts>();
    o->corpus.add(*cmd);
    cmd->add_option("--victims", o->victims, "all, or comma-separated codec ids");
    cmd->add_option("--attacks", o->attacks, "policy-set, baselines, all, or comma-separated attack ids");
    cmd->add_option("--fpr", o->fpr, "Target false-positive rate")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--min-negatives", o->min_negatives, "Negatives per calibrated threshold");
    cmd->add_option("--out", o->out, "Output directory")->required();
    cmd->callback([o, &g] {
      const auto victims = parse_victims(o->victims);
      const auto attacks = parse_attacks(o->attacks);
      const Corpus corpus = o->corpus.load(g.jobs);
      ArenaOptions opts;
      opts.target_fpr = o->fpr;
      opts.min_negatives = o->min_negatives;
      opts.jobs = g.jobs;
      const auto m = build_matrix(corpus, victims, attacks, run_seed(g), opts);
      const fs::path out(o->out);
      fs::create_directories(out);
      write_json_file(out / "matrix.json", m);
      write_text_file(out / "matrix.csv", matrix_csv(m));
      write_text_file(out / "matrix.md", matrix_markdown(m));
      write_text_file(out / "nqd_boxplot.csv", nqd_boxplot_csv(m));
      write_text_file(out / "tpr_nqd.svg", tpr_nqd_svg(m));
      json config = seed_config(g);
      config["corpus"] = o->corpus.config();
      config["victims"] = victims;
      std::vector<std::string> ids;
      for (const auto& a : attacks) ids.push_back(a.id);
      config["attacks"] = ids;
      config["fpr"] = o->fpr;
      config["min_negatives"] = o->min_negatives;
      write_manifest(out, "matrix", config, o->corpus.inputs(),
                     {"matrix.json", "matrix.csv", "matrix.md", "nqd_boxplot.csv", "tpr_nqd.svg"});
      for (const auto& s : m.skipped) std::fprintf(stderr, "skipped: %s\n", s.c_str());
    });
  }
  {
    auto* cmd = app.add_subcommand("policy", "Derive the attack policy from a stored matrix");
    struct Opts {
      std::string matrix, out;
      double budget = kDefaultNqdBudget;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--matrix", o->matrix, "matrix.json")->required();
    cmd->add_option("--budget", o->budget, "NQD budget for candidate attacks");
    cmd->add_option("--out", o->out, "Output directory")->required();
    cmd->callback([o] {
      require_file(o->matrix, "matrix");
      const auto m = read_json_file(o->matrix).get<InterferenceMatrix>();
      const auto p = derive_policy(m, o->budget);
      const fs::path out(o->out);
      fs::create_directories(out);
      write_json_file(out / "policy.json", p);
      write_text_file(out / "policy.csv", policy_csv(p));
      write_text_file(out / "policy.md", policy_markdown(p));
      write_manifest(out, "policy", {{"matrix", o->matrix}, {"budget", o->budget}}, {o->matrix},
                     {"policy.json", "policy.csv", "policy.md"});
    });
  }
  {
    auto* cmd = app.add_subcommand("forgery", "Attacker-side recovery of rewatermark attacks");
    struct Opts {
      std::string matrix;
      CorpusOptions corpus;
      std::string victims = "all";
      std::string attack_codecs = "chi2-ring,ss-dct,pix-add,pix-wide";
      std::string out;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--matrix", o->matrix, "Reuse a stored matrix.json instead of running attacks");
    o->corpus.add(*cmd);
    cmd->add_option("--victims", o->victims, "all, or comma-separated codec ids");
    cmd->add_option("--attack-codecs", o->attack_codecs, "Comma-separated attack-capable codec ids");
    cmd->add_option("--out", o->out, "Output directory")->required();
    cmd->callback([o, &g] {
      ForgeryReport report;
      json config = seed_config(g);
      std::vector<fs::path> inputs;
      if (!o->matrix.empty()) {
        require_file(o->matrix, "matrix");
        report = forgery_from_matrix(read_json_file(o->matrix).get<InterferenceMatrix>());
        config["matrix"] = o->matrix;
        inputs.emplace_back(o->matrix);
      } else {
        const auto victims = parse_victims(o->victims);
        const auto codecs = parse_victims(o->attack_codecs);
        const Corpus corpus = o->corpus.load(g.jobs);
        ArenaOptions opts;
        opts.jobs = g.jobs;
        report = evaluate_forgery(corpus, victims, codecs, run_seed(g), opts);
        config["corpus"] = o->corpus.config();
        config["victims"] = victims;
        config["attack_codecs"] = codecs;
        inputs = o->corpus.inputs();
      }
      const fs::path out(o->out);
      fs::create_directories(out);
      write_json_file(out / "forgery.json", report);
      write_text_file(out / "forgery.csv", forgery_csv(report));
      write_manifest(out, "forgery", config, inputs, {"forgery.json", "forgery.csv"});
    });
  }
}

}  // namespace wmarena::cli
