// Regenerates the bundled opening file.
#include <iostream>

#include <CLI11.hpp>

#include "teamchess/engines/openings.hpp"
#include "teamchess/util/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate balanced opening positions"};
  teamchess::engines::OpeningRecipe recipe;
  std::string out;
  app.add_option("--count", recipe.count);
  app.add_option("--seed", recipe.seed);
  app.add_option("--min-plies", recipe.min_plies);
  app.add_option("--max-plies", recipe.max_plies);
  app.add_option("--window", recipe.candidate_window);
  app.add_option("--max-eval", recipe.max_abs_eval);
  app.add_option("--out", out, "output file (stdout if omitted)");
  CLI11_PARSE(app, argc, argv);
  const auto text = teamchess::engines::format_openings(teamchess::engines::generate_openings(recipe), recipe);
  if (out.empty()) std::cout << text;
  else teamchess::write_file_atomic(out, text);
  return 0;
}
