#include "dimapg.h"

#include <cstdio>
#include <cstring>
#include <string>

#include "core/commands.hpp"
#include "core/error.hpp"

struct dimapg_config {
  dimapg::RunConfig cfg;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
dimapg_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return DIMAPG_OK;
  } catch (const dimapg::ConfigError& e) {
    g_last_error = e.what();
    return DIMAPG_ERR_CONFIG;
  } catch (const dimapg::FormatError& e) {
    g_last_error = e.what();
    return DIMAPG_ERR_FORMAT;
  } catch (const dimapg::DimensionError& e) {
    g_last_error = e.what();
    return DIMAPG_ERR_DIMENSION;
  } catch (const dimapg::NumericError& e) {
    g_last_error = e.what();
    return DIMAPG_ERR_NUMERIC;
  } catch (const dimapg::IoError& e) {
    g_last_error = e.what();
    return DIMAPG_ERR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DIMAPG_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return DIMAPG_ERR_INTERNAL;
  }
}

dimapg_status null_arg(const char* name) {
  g_last_error = std::string("null argument '") + name + "'";
  return DIMAPG_ERR_CONFIG;
}

void copy_text(const std::string& text, char* buf, size_t cap) {
  if (buf == nullptr || cap == 0) return;
  const size_t n = text.size() < cap - 1 ? text.size() : cap - 1;
  std::memcpy(buf, text.data(), n);
  buf[n] = '\0';
}

}  // namespace

extern "C" {

const char* dimapg_status_name(dimapg_status status) {
  switch (status) {
    case DIMAPG_OK:
      return "DIMAPG_OK";
    case DIMAPG_ERR_CONFIG:
      return "DIMAPG_ERR_CONFIG";
    case DIMAPG_ERR_FORMAT:
      return "DIMAPG_ERR_FORMAT";
    case DIMAPG_ERR_DIMENSION:
      return "DIMAPG_ERR_DIMENSION";
    case DIMAPG_ERR_NUMERIC:
      return "DIMAPG_ERR_NUMERIC";
    case DIMAPG_ERR_IO:
      return "DIMAPG_ERR_IO";
    case DIMAPG_ERR_INTERNAL:
      return "DIMAPG_ERR_INTERNAL";
  }
  return "DIMAPG_ERR_UNKNOWN";
}

const char* dimapg_last_error(void) { return g_last_error.c_str(); }

dimapg_status dimapg_config_parse(const char* text, dimapg_config** out) {
  if (text == nullptr) return null_arg("text");
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  return guard([&] {
    auto* handle = new dimapg_config{dimapg::parse_config(text)};
    *out = handle;
  });
}

dimapg_status dimapg_config_load(const char* path, dimapg_config** out) {
  if (path == nullptr) return null_arg("path");
  if (out == nullptr) return null_arg("out");
  *out = nullptr;
  return guard([&] {
    std::FILE* f = std::fopen(path, "rb");
    if (f == nullptr)
      throw dimapg::IoError(std::string("cannot open config '") + path + "'");
    std::string text;
    char chunk[4096];
    size_t n;
    while ((n = std::fread(chunk, 1, sizeof(chunk), f)) > 0)
      text.append(chunk, n);
    const bool bad = std::ferror(f) != 0;
    std::fclose(f);
    if (bad)
      throw dimapg::IoError(std::string("failed reading config '") + path +
                            "'");
    *out = new dimapg_config{dimapg::parse_config(text)};
  });
}

dimapg_status dimapg_config_set(dimapg_config* cfg, const char* key,
                                const char* value) {
  if (cfg == nullptr) return null_arg("cfg");
  if (key == nullptr) return null_arg("key");
  if (value == nullptr) return null_arg("value");
  return guard([&] {
    dimapg::RunConfig next = cfg->cfg;
    dimapg::apply_override(next, key, value);
    next.train.validate();
    cfg->cfg = next;  // only commit a config that still validates
  });
}

dimapg_status dimapg_config_render(const dimapg_config* cfg, char* buf,
                                   size_t cap, size_t* needed) {
  if (cfg == nullptr) return null_arg("cfg");
  return guard([&] {
    const std::string text = dimapg::render_config(cfg->cfg);
    if (needed != nullptr) *needed = text.size();
    copy_text(text, buf, cap);
  });
}

void dimapg_config_free(dimapg_config* cfg) { delete cfg; }

dimapg_status dimapg_train(const dimapg_config* cfg, const char* out_dir,
                           int runs) {
  if (cfg == nullptr) return null_arg("cfg");
  if (out_dir == nullptr) return null_arg("out_dir");
  return guard([&] { dimapg::cmd_train(cfg->cfg, out_dir, runs); });
}

dimapg_status dimapg_eval(const char* checkpoint_path, const char* config_path,
                          const char* mode, int episodes, uint64_t seed,
                          dimapg_eval_summary* summary, char* text_buf,
                          size_t text_cap) {
  if (checkpoint_path == nullptr) return null_arg("checkpoint_path");
  if (mode == nullptr) return null_arg("mode");
  return guard([&] {
    const dimapg::EvalMode m = dimapg::parse_eval_mode(mode);
    const dimapg::EvalOutput out = dimapg::cmd_eval(
        checkpoint_path, config_path == nullptr ? "" : config_path, m,
        episodes, seed);
    if (summary != nullptr) {
      summary->episodes = episodes;
      summary->mean_return = out.result.mean_return;
      summary->min_agent_return = out.result.min_agent_return;
      summary->mean_collisions = out.result.mean_collisions;
      summary->mean_food_eaten = out.result.mean_food_eaten;
      summary->mean_deaths = out.result.mean_deaths;
    }
    copy_text(out.summary + "\n" + out.csv, text_buf, text_cap);
  });
}

dimapg_status dimapg_dump_env(const dimapg_config* cfg, int steps,
                              const char* out_path) {
  if (cfg == nullptr) return null_arg("cfg");
  return guard([&] {
    const std::string csv = dimapg::cmd_dump_env(cfg->cfg, steps);
    if (out_path == nullptr) {
      std::fwrite(csv.data(), 1, csv.size(), stdout);
      std::fflush(stdout);
      return;
    }
    std::FILE* f = std::fopen(out_path, "wb");
    if (f == nullptr)
      throw dimapg::IoError(std::string("cannot open '") + out_path +
                            "' for writing");
    const size_t written = std::fwrite(csv.data(), 1, csv.size(), f);
    const bool bad = written != csv.size();
    std::fclose(f);
    if (bad)
      throw dimapg::IoError(std::string("failed writing '") + out_path + "'");
  });
}

}  // extern "C"
