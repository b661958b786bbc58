#include <cstdio>

#include "cli_common.hpp"
#include "wmarena/error.hpp"

int main(int argc, char** argv) {
  using namespace wmarena;
  CLI::App app{"wmarena: watermark embed/detect, interference matrix, classifier and attack pipeline"};
  app.set_version_flag("--version", std::string(WMARENA_VERSION));
  app.require_subcommand(1);
  cli::GlobalOptions g;
  app.add_option("--seed", g.seed, "Run seed (WMARENA_SEED overrides)");
  app.add_option("--jobs", g.jobs, "Worker threads for per-image stages (default: all cores)");
  cli::register_codec_commands(app, g);
  cli::register_arena_commands(app, g);
  cli::register_classifier_commands(app, g);
  cli::register_pipeline_commands(app, g);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "error: malformed input: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
