// Exercises the shared library the same way an external caller would:
// through dimapg.h only, no core headers.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dimapg.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("dimapg_capi_" + tag + "_" + std::to_string(++counter));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& name) const {
    return (path / name).string();
  }
  std::string str() const { return path.string(); }
};

struct ConfigHandle {
  dimapg_config* ptr = nullptr;
  ~ConfigHandle() { dimapg_config_free(ptr); }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(static_cast<bool>(in));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

constexpr const char* kTinyConfig =
    "env = coopnav\n"
    "n_agents = 2\n"
    "hidden = 8\n"
    "T = 8\n"
    "n_traj = 2\n"
    "k = 1\n"
    "iterations = 2\n"
    "seed = 11\n";

}  // namespace

TEST_CASE("capi: status names are stable") {
  CHECK(std::string(dimapg_status_name(DIMAPG_OK)) == "DIMAPG_OK");
  CHECK(std::string(dimapg_status_name(DIMAPG_ERR_CONFIG)) ==
        "DIMAPG_ERR_CONFIG");
  CHECK(std::string(dimapg_status_name(DIMAPG_ERR_FORMAT)) ==
        "DIMAPG_ERR_FORMAT");
  CHECK(std::string(dimapg_status_name(DIMAPG_ERR_DIMENSION)) ==
        "DIMAPG_ERR_DIMENSION");
  CHECK(std::string(dimapg_status_name(DIMAPG_ERR_NUMERIC)) ==
        "DIMAPG_ERR_NUMERIC");
  CHECK(std::string(dimapg_status_name(DIMAPG_ERR_IO)) == "DIMAPG_ERR_IO");
  CHECK(std::string(dimapg_status_name(DIMAPG_ERR_INTERNAL)) ==
        "DIMAPG_ERR_INTERNAL");
}

TEST_CASE("capi: parse, set, render round-trip") {
  ConfigHandle cfg;
  REQUIRE(dimapg_config_parse(kTinyConfig, &cfg.ptr) == DIMAPG_OK);
  CHECK(std::string(dimapg_last_error()).empty());

  REQUIRE(dimapg_config_set(cfg.ptr, "alpha1", "0.25") == DIMAPG_OK);

  size_t needed = 0;
  REQUIRE(dimapg_config_render(cfg.ptr, nullptr, 0, &needed) == DIMAPG_OK);
  REQUIRE(needed > 0);
  std::string text(needed + 1, '\0');
  REQUIRE(dimapg_config_render(cfg.ptr, text.data(), text.size(), &needed) ==
          DIMAPG_OK);
  text.resize(needed);
  CHECK(text.find("alpha1 = 0.25\n") != std::string::npos);
  CHECK(text.find("env = coopnav\n") != std::string::npos);

  // The rendered text parses back to an equal config (same rendering).
  ConfigHandle again;
  REQUIRE(dimapg_config_parse(text.c_str(), &again.ptr) == DIMAPG_OK);
  std::string text2(needed + 1, '\0');
  size_t needed2 = 0;
  REQUIRE(dimapg_config_render(again.ptr, text2.data(), text2.size(),
                               &needed2) == DIMAPG_OK);
  text2.resize(needed2);
  CHECK(text2 == text);

  // Truncated render still NUL-terminates and reports the full length.
  char small[8];
  size_t full = 0;
  REQUIRE(dimapg_config_render(cfg.ptr, small, sizeof(small), &full) ==
          DIMAPG_OK);
  CHECK(full == needed);
  CHECK(std::string(small) == text.substr(0, 7));
}

TEST_CASE("capi: error reporting carries messages and statuses") {
  ConfigHandle cfg;
  CHECK(dimapg_config_parse("n_traj = 3\n", &cfg.ptr) == DIMAPG_ERR_CONFIG);
  CHECK(cfg.ptr == nullptr);
  CHECK(std::string(dimapg_last_error()).find("missing env") !=
        std::string::npos);

  REQUIRE(dimapg_config_parse(kTinyConfig, &cfg.ptr) == DIMAPG_OK);
  CHECK(dimapg_config_set(cfg.ptr, "bogus", "1") == DIMAPG_ERR_CONFIG);
  CHECK(std::string(dimapg_last_error()).find("bogus") != std::string::npos);
  CHECK(dimapg_config_set(cfg.ptr, "env", "survival") == DIMAPG_ERR_CONFIG);
  CHECK(dimapg_config_set(cfg.ptr, "alpha1", "frog") == DIMAPG_ERR_CONFIG);
  // a failed set leaves the config usable
  CHECK(dimapg_config_set(cfg.ptr, "alpha1", "0.5") == DIMAPG_OK);

  CHECK(dimapg_config_parse(nullptr, &cfg.ptr) == DIMAPG_ERR_CONFIG);
  CHECK(std::string(dimapg_last_error()).find("null argument") !=
        std::string::npos);

  ConfigHandle missing;
  CHECK(dimapg_config_load("/nonexistent/path.cfg", &missing.ptr) ==
        DIMAPG_ERR_IO);
}

TEST_CASE("capi: train, eval and dump through the shared interface") {
  TempDir dir("flow");

  const std::string cfg_path = dir / "run.cfg";
  {
    std::ofstream out(cfg_path);
    out << kTinyConfig;
  }
  ConfigHandle cfg;
  REQUIRE(dimapg_config_load(cfg_path.c_str(), &cfg.ptr) == DIMAPG_OK);

  const std::string out_dir = dir / "out";
  REQUIRE(dimapg_train(cfg.ptr, out_dir.c_str(), 1) == DIMAPG_OK);
  CHECK(fs::exists(out_dir + "/metrics.csv"));
  CHECK(fs::exists(out_dir + "/checkpoint.dmpg"));

  dimapg_eval_summary summary{};
  char text[1024] = {0};
  REQUIRE(dimapg_eval((out_dir + "/checkpoint.dmpg").c_str(), nullptr,
                      "central", 3, 7, &summary, text,
                      sizeof(text)) == DIMAPG_OK);
  CHECK(summary.episodes == 3);
  CHECK(summary.mean_return < 0.0);  // coopnav pays distance penalties
  CHECK(summary.min_agent_return <= summary.mean_return);
  CHECK(std::string(text).rfind("eval[central]", 0) == 0);
  CHECK(std::string(text).find("mode,episodes,") != std::string::npos);

  CHECK(dimapg_eval((out_dir + "/checkpoint.dmpg").c_str(), nullptr, "warp",
                    1, 0, nullptr, nullptr, 0) == DIMAPG_ERR_CONFIG);

  // A corrupted checkpoint is a format error.
  const std::string broken = dir / "broken.dmpg";
  {
    std::ofstream out(broken, std::ios::binary);
    out << "not a checkpoint";
  }
  CHECK(dimapg_eval(broken.c_str(), cfg_path.c_str(), "central", 1, 0,
                    nullptr, nullptr, 0) == DIMAPG_ERR_FORMAT);

  const std::string dump_path = dir / "episode.csv";
  REQUIRE(dimapg_dump_env(cfg.ptr, 2, dump_path.c_str()) == DIMAPG_OK);
  const std::string csv = slurp(dump_path);
  CHECK(csv.rfind("step,agent,active,reward,action,obs\n", 0) == 0);

  // Same config, same bytes.
  const std::string dump2 = dir / "episode2.csv";
  REQUIRE(dimapg_dump_env(cfg.ptr, 2, dump2.c_str()) == DIMAPG_OK);
  CHECK(slurp(dump2) == csv);
}

TEST_CASE("capi: numeric blowups surface as DIMAPG_ERR_NUMERIC") {
  TempDir dir("numeric");
  ConfigHandle cfg;
  REQUIRE(dimapg_config_parse(kTinyConfig, &cfg.ptr) == DIMAPG_OK);
  // A catastrophically large inner step drives the adapted parameters to
  // overflow within a few steps.
  REQUIRE(dimapg_config_set(cfg.ptr, "alpha1", "1e300") == DIMAPG_OK);
  REQUIRE(dimapg_config_set(cfg.ptr, "k", "3") == DIMAPG_OK);
  const dimapg_status st = dimapg_train(cfg.ptr, (dir / "out").c_str(), 1);
  CHECK(st == DIMAPG_ERR_NUMERIC);
  CHECK(std::string(dimapg_last_error()).find("iteration") !=
        std::string::npos);
}
