#include "cli.hpp"

#include "act/synthetic.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t data_rows(const std::string& tsv) {
  std::size_t n = 0;
  std::istringstream in(tsv);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    ++n;
  }
  return n;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "act_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    act::synthetic::Options opts;
    opts.num_train_tracks = 600;
    opts.num_test_tracks = 60;
    opts.num_raters = 3;
    const auto b = act::synthetic::make_benchmark(opts);
    auto write = [](const fs::path& p, auto fn) {
      std::ofstream out(p);
      fn(out);
    };
    namespace syn = act::synthetic;
    write(dir_ / "vocab.tsv", [&](auto& o) { syn::write_vocabulary(o, b.vocabulary); });
    write(dir_ / "train.tsv", [&](auto& o) { syn::write_corpus(o, b.train); });
    write(dir_ / "test.tsv", [&](auto& o) { syn::write_corpus(o, b.test); });
    write(dir_ / "ref.tsv", [&](auto& o) { syn::write_reference(o, b.anchors); });
    write(dir_ / "ratings.tsv", [&](auto& o) { syn::write_ratings(o, b.ratings); });
    ASSERT_EQ(run({"build-vsm", "--vocab", p("vocab.tsv"), "--corpus", p("train.tsv"), "--min-term-prevalence",
                   "20", "--out", p("vsm.json")}),
              0);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }

  static std::string p(const std::string& name) { return (dir_ / name).string(); }

  static int run(std::vector<std::string> args) {
    std::ostringstream out;
    err_.str("");
    return act::cli::run(args, out, err_);
  }

  static inline fs::path dir_;
  static inline std::ostringstream err_;
};

}  // namespace

TEST_F(Cli, FitDissimMdsActChain) {
  ASSERT_EQ(run({"fit", "--vsm", p("vsm.json"), "--method", "svd", "--k", "6", "--out", p("svd.json")}), 0)
      << err_.str();
  ASSERT_EQ(run({"dissim", "--model", p("svd.json"), "--out", p("d.json")}), 0) << err_.str();
  ASSERT_EQ(run({"mds", "--dissim", p("d.json"), "--seed", "3", "--out", p("mds.json")}), 0) << err_.str();
  ASSERT_EQ(run({"act-fit", "--mds", p("mds.json"), "--reference", p("ref.tsv"), "--out", p("act.json")}), 0)
      << err_.str();
  ASSERT_EQ(run({"proxy", "--act", p("act.json"), "--vsm", p("vsm.json"), "--out", p("proxy.tsv")}), 0)
      << err_.str();
  EXPECT_EQ(data_rows(slurp(p("proxy.tsv"))), 3u);

  ASSERT_EQ(run({"predict", "--vsm", p("vsm.json"), "--vocab", p("vocab.tsv"), "--corpus", p("test.tsv"),
                 "--model", p("act.json"), "--terms", "happy,sad", "--out", p("pred.tsv")}),
            0)
      << err_.str();
  const auto pred = slurp(p("pred.tsv"));
  EXPECT_EQ(data_rows(pred), 60u * 5u);
  EXPECT_NE(pred.find("track_id\tscale\tvalue\n"), std::string::npos);
  EXPECT_NE(pred.find("# input model=act.json sha256:"), std::string::npos);

  ASSERT_EQ(run({"predict", "--vsm", p("vsm.json"), "--vocab", p("vocab.tsv"), "--corpus", p("test.tsv"),
                 "--method", "svd", "--model", p("svd.json"), "--proxy", p("proxy.tsv"), "--out", p("pred_svd.tsv")}),
            0)
      << err_.str();
  EXPECT_EQ(data_rows(slurp(p("pred_svd.tsv"))), 60u * 3u);

  const auto act = slurp(p("act.json"));
  EXPECT_NE(act.find("\"meta\""), std::string::npos);
  EXPECT_NE(act.find("\"fit_X2_raw\""), std::string::npos);
}

TEST_F(Cli, EvaluateEmitsOneRowPerScaleAndRank) {
  ASSERT_EQ(run({"evaluate", "--method", "act", "--k", "4,8", "--vsm", p("vsm.json"), "--vocab", p("vocab.tsv"),
                 "--corpus", p("test.tsv"), "--ratings", p("ratings.tsv"), "--reference", p("ref.tsv"), "--out",
                 p("eval.tsv")}),
            0)
      << err_.str();
  const auto tsv = slurp(p("eval.tsv"));
  EXPECT_EQ(data_rows(tsv), 6u);
  EXPECT_NE(tsv.find("scale\tmethod\tk\trho\tn\n"), std::string::npos);
  EXPECT_NE(tsv.find("# param seed=0"), std::string::npos);
}

TEST_F(Cli, BaselinesAndHopkins) {
  ASSERT_EQ(run({"act-fit", "--vsm", p("vsm.json"), "--reference", p("ref.tsv"), "--k", "8", "--out",
                 p("act8.json")}),
            0)
      << err_.str();
  ASSERT_EQ(run({"proxy", "--act", p("act8.json"), "--vsm", p("vsm.json"), "--out", p("proxy8.tsv")}), 0);
  ASSERT_EQ(run({"evaluate", "--method", "vsm", "--vsm", p("vsm.json"), "--vocab", p("vocab.tsv"), "--corpus",
                 p("test.tsv"), "--ratings", p("ratings.tsv"), "--proxy", p("proxy8.tsv"), "--out", p("ev.tsv")}),
            0)
      << err_.str();
  EXPECT_NE(slurp(p("ev.tsv")).find("\tvsm\t-\t"), std::string::npos);
  ASSERT_EQ(run({"hopkins", "--vsm", p("vsm.json"), "--k", "4,8", "--include-full", "--schedule", "2:40,3:20",
                 "--runs", "3", "--out", p("hop.tsv")}),
            0)
      << err_.str();
  const auto hop = slurp(p("hop.tsv"));
  EXPECT_EQ(data_rows(hop), 3u);
  EXPECT_NE(hop.find("k\tH_mean\tH_sd\truns\n"), std::string::npos);
}

TEST_F(Cli, UnmatchedTrackIsEmptyQuery) {
  {
    std::ofstream out(p("odd.tsv"));
    out << "track_id\tartist\ttitle\ttag\tcount\nx1\tA\tB\tpolka\t50\n";
  }
  ASSERT_EQ(run({"act-fit", "--vsm", p("vsm.json"), "--reference", p("ref.tsv"), "--k", "4", "--out",
                 p("act4.json")}),
            0);
  EXPECT_EQ(run({"predict", "--vsm", p("vsm.json"), "--vocab", p("vocab.tsv"), "--corpus", p("odd.tsv"), "--model",
                 p("act4.json"), "--out", p("odd_pred.tsv")}),
            1);
  const std::string err = err_.str();
  EXPECT_EQ(err.rfind("error: empty-query: ", 0), 0u) << err;
  EXPECT_EQ(std::count(err.begin(), err.end(), '\n'), 1);
  EXPECT_FALSE(fs::exists(p("odd_pred.tsv")));
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({"fit", "--vsm", p("vsm.json"), "--bogus", "1", "--out", p("x.json")}), 2);
  EXPECT_EQ(run({"fit", "--vsm", p("missing.json"), "--out", p("x.json")}), 2);
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({}), 2);
  // Existing output needs --overwrite.
  EXPECT_EQ(run({"build-vsm", "--vocab", p("vocab.tsv"), "--corpus", p("train.tsv"), "--out", p("vsm.json")}), 2);
  EXPECT_EQ(run({"build-vsm", "--vocab", p("vocab.tsv"), "--corpus", p("train.tsv"), "--min-term-prevalence", "20",
                 "--out", p("vsm.json"), "--overwrite"}),
            0);
}

TEST_F(Cli, DomainErrorsExitOne) {
  {
    std::ofstream out(p("broken.json"));
    out << "{\"version\": 1";
  }
  EXPECT_EQ(run({"fit", "--vsm", p("broken.json"), "--out", p("y.json")}), 1);
  EXPECT_EQ(err_.str().rfind("error: schema: ", 0), 0u);
  EXPECT_EQ(run({"fit", "--vsm", p("vsm.json"), "--k", "500", "--out", p("y.json")}), 1);
  EXPECT_EQ(err_.str().rfind("error: parameter: ", 0), 0u) << err_.str();
}

TEST_F(Cli, RepeatRunsAreByteIdentical) {
  for (const char* out : {"n1.json", "n2.json"})
    ASSERT_EQ(run({"fit", "--vsm", p("vsm.json"), "--method", "nmf", "--k", "4", "--seed", "11", "--max-iter", "30",
                   "--out", p(out)}),
              0);
  EXPECT_EQ(slurp(p("n1.json")), slurp(p("n2.json")));
}
