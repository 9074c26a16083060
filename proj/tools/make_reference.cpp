// Regenerates the reference solution files shipped under configs/refs/ and
// the desk data files under configs/data/.
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rdciag/config.hpp"
#include "rdciag/desk.hpp"
#include "rdciag/harness.hpp"

namespace {

void write_desk_data(const std::string& dir) {
  rdciag::AugL1Spec spec = rdciag::desk_aug_l1();
  {
    std::string path = dir + "/aug_l1_A.txt";
    FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    for (int r = 0; r < spec.A.rows; ++r) {
      for (int c = 0; c < spec.A.cols; ++c)
        std::fprintf(f, "%s%.17g", c ? " " : "", spec.A.at(r, c));
      std::fprintf(f, "\n");
    }
    std::fclose(f);
  }
  {
    std::string path = dir + "/aug_l1_b.txt";
    FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    for (double v : spec.b) std::fprintf(f, "%.17g\n", v);
    std::fclose(f);
  }
  std::cout << "wrote " << dir << "/aug_l1_A.txt and aug_l1_b.txt\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compute a long dual-PG reference solution for a config"};

  std::string config_path, out_path, desk_dir;
  long iters = 1000000;
  app.add_option("config", config_path, "experiment config file");
  app.add_option("out", out_path, "output reference path");
  app.add_option("--iters", iters, "dual PG iterations");
  app.add_option("--emit-desk-data", desk_dir,
                 "write the built-in desk matrix/rhs files to this directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!desk_dir.empty()) write_desk_data(desk_dir);
    if (config_path.empty()) return 0;
    if (out_path.empty()) {
      std::cerr << "error: missing output path\n";
      return 1;
    }
    auto parsed = rdciag::parse_config_file(config_path);
    if (!parsed.ok()) {
      for (const auto& e : parsed.errors)
        std::cerr << "error: " << e.message << "\n";
      return 1;
    }
    rdciag::BuiltInstance inst = rdciag::build_instance(*parsed.config);
    rdciag::ReferenceSolution ref =
        rdciag::compute_reference(inst.problem, iters);
    double gap = rdciag::duality_gap(inst.problem, ref.x_star, ref.y_star);
    rdciag::save_reference(ref, out_path);
    std::printf("D_star = %.17g\n", ref.d_star);
    std::printf("gap = %.3e\n", gap);
    if (!(gap <= 1e-8)) {
      std::cerr << "warning: reference gap above 1e-8; increase --iters\n";
      return 1;
    }
    std::cout << "wrote " << out_path << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
