/* C interface to the dimapg trainer: config handling, training runs,
 * checkpoint evaluation and environment dumps. All functions return a
 * status code; on failure dimapg_last_error() describes what went wrong. */
#ifndef DIMAPG_H
#define DIMAPG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dimapg_status {
  DIMAPG_OK = 0,
  DIMAPG_ERR_CONFIG = 1,    /* bad key, value, or option combination */
  DIMAPG_ERR_FORMAT = 2,    /* malformed checkpoint bytes */
  DIMAPG_ERR_DIMENSION = 3, /* shape mismatch between nets, envs, vectors */
  DIMAPG_ERR_NUMERIC = 4,   /* NaN/Inf reached parameters or gradients */
  DIMAPG_ERR_IO = 5,        /* unreadable/unwritable files */
  DIMAPG_ERR_INTERNAL = 6   /* anything else */
} dimapg_status;

/* Stable name for a status code, e.g. "DIMAPG_ERR_CONFIG". */
const char* dimapg_status_name(dimapg_status status);

/* Message from the most recent failing call on the calling thread. Empty
 * string after a successful call. The pointer stays valid until the next
 * dimapg_* call on the same thread. */
const char* dimapg_last_error(void);

/* An opaque, fully-resolved run configuration. */
typedef struct dimapg_config dimapg_config;

/* Parses config text (key = value lines, # comments; must name an env). */
dimapg_status dimapg_config_parse(const char* text, dimapg_config** out);

/* Reads and parses a config file. */
dimapg_status dimapg_config_load(const char* path, dimapg_config** out);

/* Overrides one key. The env itself cannot be changed after parsing. */
dimapg_status dimapg_config_set(dimapg_config* cfg, const char* key,
                                const char* value);

/* Renders the full config (all keys, parseable back). Writes at most cap
 * bytes including the terminating NUL; *needed (may be NULL) receives the
 * full text length excluding the NUL, so needed >= cap means truncation. */
dimapg_status dimapg_config_render(const dimapg_config* cfg, char* buf,
                                   size_t cap, size_t* needed);

void dimapg_config_free(dimapg_config* cfg);

/* Trains `runs` independent runs under out_dir (run r uses seed + r). One
 * run writes metrics.csv, resolved_config and checkpoints directly into
 * out_dir; several runs write into out_dir/run{r} plus a combined
 * out_dir/mean_metrics.csv. */
dimapg_status dimapg_train(const dimapg_config* cfg, const char* out_dir,
                           int runs);

typedef struct dimapg_eval_summary {
  int episodes;
  double mean_return;       /* undiscounted, averaged over agents+episodes */
  double min_agent_return;  /* per-episode worst agent, averaged */
  double mean_collisions;   /* predator-prey collisions per episode */
  double mean_food_eaten;   /* survival food cleared per episode */
  double mean_deaths;       /* survival deaths per episode */
} dimapg_eval_summary;

/* Evaluates a checkpoint over seeded episodes. mode is "central", "adapted"
 * or "finetune". config_path NULL or empty uses the resolved_config next to
 * the checkpoint. summary may be NULL. text_buf (may be NULL) receives a
 * human-readable line followed by a CSV block, truncated to text_cap. */
dimapg_status dimapg_eval(const char* checkpoint_path, const char* config_path,
                          const char* mode, int episodes, uint64_t seed,
                          dimapg_eval_summary* summary, char* text_buf,
                          size_t text_cap);

/* Plays one seeded episode with freshly initialized policies and writes the
 * per-step CSV to out_path, or to stdout when out_path is NULL. steps <= 0
 * plays the config's full horizon. */
dimapg_status dimapg_dump_env(const dimapg_config* cfg, int steps,
                              const char* out_path);

#ifdef __cplusplus
}
#endif

#endif /* DIMAPG_H */
