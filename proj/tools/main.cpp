#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

int main(int argc, char** argv) {
  roughlab::cli::Options opt;
  std::string out_dir = ".";
  CLI::App app{"roughlab: rough path experiments from JSON specs"};
  app.add_option("command", opt.command, "pvar | area | integrate | lacunary | probe | constants")
      ->required()
      ->check(CLI::IsMember(roughlab::cli::kCommands));
  app.add_option("--spec", opt.spec_file, "experiment spec (JSON)")->required();
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--tol", opt.tol, "override the tolerance in the JSON file");
  app.add_option("--seed", opt.seed, "override the seed of random inputs");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  opt.out_dir = out_dir;
  return roughlab::cli::run_main(opt, std::cerr);
}
