// Writes a synthetic study (images, grids, ratings, study.json) for demos and tests.

#include <CLI11.hpp>
#include <iostream>

#include "gaborface/errors.hpp"
#include "synthetic_study.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic facial-expression study"};
  std::string out;
  gaborface::synth::SyntheticStudySpec spec;
  app.add_option("--out", out, "Directory to create")->required();
  app.add_option("--expressers", spec.expressers, "Expresser ids")->delimiter(',');
  app.add_option("--images", spec.images_per_expresser, "Images per expresser")->check(CLI::PositiveNumber);
  app.add_option("--size", spec.size, "Image width and height in pixels")->check(CLI::Range(64, 2048));
  app.add_option("--seed", spec.seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);
  try {
    const auto images = gaborface::synth::write_synthetic_study(out, spec);
    std::cout << "wrote " << images.size() << " images to " << out << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
