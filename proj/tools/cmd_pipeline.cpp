#include <cstdio>
#include <sstream>

#include "cli_common.hpp"
#include "wmarena/arena.hpp"
#include "wmarena/classifier.hpp"
#include "wmarena/error.hpp"
#include "wmarena/pipeline.hpp"
#include "wmarena/report.hpp"

namespace wmarena::cli {

namespace {

template <typename T>
T load_artifact(const std::string& path, const char* what) {
  if (!fs::is_regular_file(path)) throw ValidationError(std::string("missing ") + what + ": " + path);
  return read_json_file(path).get<T>();
}

}  // namespace

void register_pipeline_commands(CLI::App& app, GlobalOptions& g) {
  {
    auto* cmd = app.add_subcommand("pipeline", "Classify, route through the policy and attack watermarked images");
    struct Opts {
      CorpusOptions corpus;
      std::string victims = "all";
      std::string model, policy, matrix, out;
      std::string mode = "both";
      bool paranoid = false;
      double fpr = 0.01;
    };
    auto o = std::make_shared<Opts>();
    o->corpus.add(*cmd);
    cmd->add_option("--victims", o->victims, "all, or comma-separated codec ids");
    cmd->add_option("--model", o->model, "model.json (required for blackbox)");
    cmd->add_option("--policy", o->policy, "policy.json")->required();
    cmd->add_option("--matrix", o->matrix, "matrix.json whose NQD model scores the attacked images");
    cmd->add_option("--mode", o->mode, "blackbox, beigebox or both")
        ->check(CLI::IsMember({"blackbox", "beigebox", "both"}));
    cmd->add_flag("--paranoid", o->paranoid, "Attack images predicted unwatermarked with chi2-ring");
    cmd->add_option("--fpr", o->fpr, "Target false-positive rate")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--out", o->out, "Output directory")->required();
    cmd->callback([o, &g] {
      const auto policy = load_artifact<PolicyTable>(o->policy, "policy");
      std::optional<ClassifierModel> model;
      if (o->mode != "beigebox") {
        if (o->model.empty()) throw ValidationError("blackbox mode needs --model");
        model = load_artifact<ClassifierModel>(o->model, "model");
      }
      PipelineOptions opts;
      opts.target_fpr = o->fpr;
      opts.paranoid = o->paranoid;
      opts.jobs = g.jobs;
      std::vector<fs::path> inputs = {o->policy};
      if (model) inputs.emplace_back(o->model);
      if (!o->matrix.empty()) {
        opts.nqd = load_artifact<InterferenceMatrix>(o->matrix, "matrix").nqd;
        inputs.emplace_back(o->matrix);
      }
      const auto victims = parse_victims(o->victims);
      const Corpus corpus = o->corpus.load(g.jobs);
      const Seed256 seed = run_seed(g);
      const fs::path out(o->out);
      fs::create_directories(out);
      std::vector<std::string> outputs;
      std::vector<PipelineRun> runs;
      for (const PipelineMode mode : {PipelineMode::blackbox, PipelineMode::beigebox}) {
        if (o->mode != "both" && o->mode != to_string(mode)) continue;
        runs.push_back(run_pipeline(corpus, victims, model ? &*model : nullptr, policy, mode, seed, opts));
        const std::string stem = std::string("pipeline_") + to_string(mode);
        write_json_file(out / (stem + ".json"), runs.back());
        write_text_file(out / (stem + ".csv"), pipeline_csv(runs.back(), &policy));
        write_text_file(out / (stem + ".md"), pipeline_markdown(runs.back(), &policy));
        for (const char* ext : {".json", ".csv", ".md"}) outputs.push_back(stem + ext);
        for (const auto& s : runs.back().skipped) std::fprintf(stderr, "skipped: %s\n", s.c_str());
      }
      if (runs.size() == 2) {
        const auto cmp = compare_runs(runs[0], runs[1]);
        write_json_file(out / "comparison.json", cmp);
        write_text_file(out / "comparison.csv", comparison_csv(cmp));
        outputs.push_back("comparison.json");
        outputs.push_back("comparison.csv");
      }
      json config = seed_config(g);
      config["corpus"] = o->corpus.config();
      config["victims"] = victims;
      config["mode"] = o->mode;
      config["paranoid"] = o->paranoid;
      config["fpr"] = o->fpr;
      auto corpus_inputs = o->corpus.inputs();
      inputs.insert(inputs.end(), corpus_inputs.begin(), corpus_inputs.end());
      write_manifest(out, "pipeline", config, inputs, outputs);
    });
  }
  {
    auto* cmd = app.add_subcommand("report", "Collate the JSON artifacts of a run directory into tables and figures");
    struct Opts {
      std::string run, out;
    };
    auto o = std::make_shared<Opts>();
    cmd->add_option("--run", o->run, "Directory holding JSON artifacts")->required();
    cmd->add_option("--out", o->out, "Output directory (default: the run directory)");
    cmd->callback([o] {
      if (!fs::is_directory(o->run)) throw ValidationError("missing run directory: " + o->run);
      std::vector<fs::path> files;
      for (const auto& e : fs::directory_iterator(o->run))
        if (e.is_regular_file() && e.path().extension() == ".json" &&
            e.path().filename().string().find("manifest") == std::string::npos)
          files.push_back(e.path());
      std::sort(files.begin(), files.end());
      const fs::path out = o->out.empty() ? fs::path(o->run) : fs::path(o->out);
      std::ostringstream md;
      std::vector<fs::path> inputs;
      std::vector<std::string> outputs;
      std::optional<PolicyTable> policy;
      for (const auto& f : files) {
        const json doc = read_json_file(f);
        if (doc.value("kind", "") == "policy") policy = doc.get<PolicyTable>();
      }
      for (const auto& f : files) {
        const json doc = read_json_file(f);
        const std::string kind = doc.is_object() ? doc.value("kind", "") : "";
        const std::string name = f.filename().string();
        if (kind == "interference_matrix") {
          const auto m = doc.get<InterferenceMatrix>();
          md << "## Interference matrix (" << name << ")\n\n" << matrix_markdown(m) << "\n";
          const std::string stem = f.stem().string();
          write_text_file(out / (stem + "_tpr_nqd.svg"), tpr_nqd_svg(m));
          write_text_file(out / (stem + "_nqd_boxplot.csv"), nqd_boxplot_csv(m));
          outputs.push_back(stem + "_tpr_nqd.svg");
          outputs.push_back(stem + "_nqd_boxplot.csv");
        } else if (kind == "policy") {
          md << "## Policy (" << name << ")\n\n" << policy_markdown(*policy) << "\n";
        } else if (kind == "forgery") {
          md << "## Forgery (" << name << ")\n\n```\n" << forgery_csv(doc.get<ForgeryReport>()) << "```\n\n";
        } else if (kind == "classifier_evaluation") {
          md << "## Classifier evaluation (" << name << ")\n\n" << evaluation_markdown(doc.get<Evaluation>()) << "\n";
        } else if (kind == "pipeline_run") {
          md << "## Pipeline (" << name << ")\n\n"
             << pipeline_markdown(doc.get<PipelineRun>(), policy ? &*policy : nullptr) << "\n";
        } else if (kind == "run_comparison") {
          md << "## Blackbox vs beigebox (" << name << ")\n\n```\n"
             << comparison_csv(doc.get<RunComparison>()) << "```\n\n";
        } else {
          continue;
        }
        inputs.push_back(f);
      }
      if (inputs.empty()) throw ValidationError("no report artifacts in " + o->run);
      fs::create_directories(out);
      write_text_file(out / "report.md", md.str());
      outputs.insert(outputs.begin(), "report.md");
      write_manifest(out, "report", {{"run", o->run}}, inputs, outputs, "report.manifest.json");
    });
  }
}

}  // namespace wmarena::cli
