// Writes a planted valence-arousal corpus as TSV files for trying the CLI.

#include "act/synthetic.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

template <typename Fn>
void write(const std::filesystem::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  fn(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic tag corpus with planted moods"};
  act::synthetic::Options opts;
  std::string dir = "data/synthetic";
  app.add_option("--out-dir", dir, "Output directory");
  app.add_option("--terms", opts.num_terms, "Vocabulary size");
  app.add_option("--train", opts.num_train_tracks, "Training tracks");
  app.add_option("--test", opts.num_test_tracks, "Rated test tracks");
  app.add_option("--anchors", opts.num_anchors, "Reference terms");
  app.add_option("--raters", opts.num_raters, "Raters per test track");
  app.add_option("--seed", opts.seed, "Seed");
  CLI11_PARSE(app, argc, argv);

  try {
    namespace fs = std::filesystem;
    namespace syn = act::synthetic;
    fs::create_directories(dir);
    const auto bench = syn::make_benchmark(opts);
    write(fs::path(dir) / "vocabulary.tsv", [&](auto& o) { syn::write_vocabulary(o, bench.vocabulary); });
    write(fs::path(dir) / "train.tsv", [&](auto& o) { syn::write_corpus(o, bench.train); });
    write(fs::path(dir) / "test.tsv", [&](auto& o) { syn::write_corpus(o, bench.test); });
    write(fs::path(dir) / "reference.tsv", [&](auto& o) { syn::write_reference(o, bench.anchors); });
    write(fs::path(dir) / "ratings.tsv", [&](auto& o) { syn::write_ratings(o, bench.ratings); });
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
