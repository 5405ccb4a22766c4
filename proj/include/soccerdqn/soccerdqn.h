/* SPDX-License-Identifier: Apache-2.0 */
#ifndef SOCCERDQN_H
#define SOCCERDQN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(SDQN_BUILDING_LIBRARY)
#define SDQN_API __attribute__((visibility("default")))
#else
#define SDQN_API
#endif

/* Status codes. Every fallible call returns one of these; the message of
 * the last failure on the calling thread is available from
 * sdqn_last_error(). */
typedef enum sdqn_status {
  SDQN_OK = 0,
  SDQN_ERR_CONTRACT = 1,
  SDQN_ERR_INVALID_ARGUMENT = 2,
  SDQN_ERR_IO = 3,
  SDQN_ERR_PARSE = 4,
  SDQN_ERR_BAD_MAGIC = 5,
  SDQN_ERR_VERSION_MISMATCH = 6,
  SDQN_ERR_CRC_MISMATCH = 7,
  SDQN_ERR_TRUNCATED = 8,
  SDQN_ERR_INSUFFICIENT_DATA = 9,
  SDQN_ERR_REPLAY_MISMATCH = 10,
  SDQN_ERR_INTERNAL = 99
} sdqn_status;

typedef struct sdqn_config sdqn_config;
typedef struct sdqn_policy sdqn_policy;
typedef struct sdqn_world sdqn_world;
typedef struct sdqn_eval sdqn_eval;

SDQN_API const char* sdqn_last_error(void);
SDQN_API const char* sdqn_status_name(sdqn_status status);

/* Text outputs use the same convention: at most `capacity` bytes including
 * the terminating NUL are written to `buffer` (which may be NULL when
 * capacity is 0) and the full length without NUL is stored in `*needed`. */

/* ---- Configuration ---------------------------------------------------- */

SDQN_API sdqn_status sdqn_config_default(sdqn_config** out);
SDQN_API sdqn_status sdqn_config_load(const char* path, sdqn_config** out);
SDQN_API sdqn_status sdqn_config_parse(const char* json_text, sdqn_config** out);
/* Applies a JSON merge patch, e.g. {"trainer": {"seed": 7}}, then
 * validates. On failure the config is left unchanged. */
SDQN_API sdqn_status sdqn_config_patch(sdqn_config* cfg, const char* json_patch);
SDQN_API sdqn_status sdqn_config_to_json(const sdqn_config* cfg, char* buffer, size_t capacity,
                                         size_t* needed);
/* 16 lowercase hex digits plus NUL. */
SDQN_API sdqn_status sdqn_config_digest(const sdqn_config* cfg, char out[17]);
SDQN_API void sdqn_config_free(sdqn_config* cfg);

/* ---- Policies --------------------------------------------------------- */

/* "zero", "random", "chaser" or "checkpoint:PATH". */
SDQN_API sdqn_status sdqn_policy_create(const char* spec, sdqn_policy** out);
SDQN_API sdqn_status sdqn_policy_name(const sdqn_policy* policy, char* buffer, size_t capacity,
                                      size_t* needed);
SDQN_API void sdqn_policy_free(sdqn_policy* policy);

/* ---- Simulation ------------------------------------------------------- */

enum { SDQN_TEAM_HOME = 0, SDQN_TEAM_AWAY = 1 };
enum { SDQN_ROBOTS = 10, SDQN_STATE_SIZE = 22, SDQN_ACTIONS = 256 };

/* World at kickoff for `kickoff_team`. The config is copied. */
SDQN_API sdqn_status sdqn_world_create(const sdqn_config* cfg, int kickoff_team, sdqn_world** out);
/* One frame. `wheels` holds (left, right) in m/s for the 10 robot slots
 * (Home GK, D1, D2, F1, F2, then Away in the same order). `goal_out`, when
 * not NULL, receives -1, or the team that scored. */
SDQN_API sdqn_status sdqn_world_advance(sdqn_world* world, const double wheels[20], int* goal_out);
SDQN_API sdqn_status sdqn_world_encode(const sdqn_world* world, int team, float out[22]);
SDQN_API sdqn_status sdqn_world_reward(const sdqn_world* world, int team, double* out);
/* Ball position (x, y) and frame counter. */
SDQN_API sdqn_status sdqn_world_ball(const sdqn_world* world, double out[2], int64_t* frame);
SDQN_API void sdqn_world_free(sdqn_world* world);

/* Joint action index to directions for F1, F2, D1, D2 (0 above, 1 below,
 * 2 left, 3 right) and back. */
SDQN_API sdqn_status sdqn_action_decode(int action, int dirs[4]);
SDQN_API sdqn_status sdqn_action_encode(const int dirs[4], int* action);

/* ---- Matches and evaluation ------------------------------------------ */

enum { SDQN_WIN = 0, SDQN_LOSE = 1, SDQN_TIE = 2 };

typedef struct sdqn_match_result {
  int home_goals;
  int away_goals;
  int outcome; /* from the home policy's point of view */
  int half_scores[2][2];
  uint64_t seed;
} sdqn_match_result;

/* `replay_path` may be NULL. */
SDQN_API sdqn_status sdqn_run_match(sdqn_policy* home, sdqn_policy* away, const sdqn_config* cfg,
                                    uint64_t seed, const char* replay_path,
                                    sdqn_match_result* out);

typedef struct sdqn_eval_summary {
  int played;
  int wins;
  int losses;
  int ties;
  int goals_for;
  int goals_against;
} sdqn_eval_summary;

SDQN_API sdqn_status sdqn_evaluate(const sdqn_policy* policy, const sdqn_policy* const* opponents,
                                   size_t n_opponents, int n_matches, uint64_t seed, int threads,
                                   const sdqn_config* cfg, sdqn_eval** out);
SDQN_API sdqn_status sdqn_eval_summary_get(const sdqn_eval* eval, sdqn_eval_summary* out);
SDQN_API size_t sdqn_eval_match_count(const sdqn_eval* eval);
SDQN_API sdqn_status sdqn_eval_match(const sdqn_eval* eval, size_t index, sdqn_match_result* out);
SDQN_API sdqn_status sdqn_eval_table(const sdqn_eval* eval, char* buffer, size_t capacity,
                                     size_t* needed);
SDQN_API void sdqn_eval_free(sdqn_eval* eval);

/* ---- Training --------------------------------------------------------- */

typedef struct sdqn_train_metrics {
  int64_t step;
  int64_t updates;
  double epsilon;
  int has_loss;
  double loss;
  double mean_reward;
  int goals_for;
  int goals_against;
} sdqn_train_metrics;

/* `json_line` is the record as one line of JSON without a newline. */
typedef void (*sdqn_metrics_callback)(const sdqn_train_metrics* metrics, const char* json_line,
                                      void* user);

typedef struct sdqn_train_summary {
  int64_t steps_run;
  uint64_t step;
  uint64_t updates;
  double epsilon;
  int stopped_on_plateau;
} sdqn_train_summary;

/* `checkpoint_path` and `resume_from` may be NULL; `callback` may be NULL. */
SDQN_API sdqn_status sdqn_train(const sdqn_config* cfg, const char* checkpoint_path,
                                const char* resume_from, sdqn_metrics_callback callback,
                                void* user, sdqn_train_summary* out);

/* ---- Checkpoints and replays ----------------------------------------- */

enum { SDQN_MAX_LAYERS = 16 };

typedef struct sdqn_checkpoint_info {
  uint32_t version;
  uint32_t n_dims;
  uint32_t dims[SDQN_MAX_LAYERS];
  uint64_t step;
  uint64_t updates;
  double epsilon;
  uint64_t param_count;
  uint32_t crc32;
  uint64_t file_size;
} sdqn_checkpoint_info;

SDQN_API sdqn_status sdqn_checkpoint_inspect(const char* path, sdqn_checkpoint_info* out);

typedef struct sdqn_replay_report {
  uint64_t records;
  uint64_t mismatches;
  int64_t first_mismatch_frame;
  int digest_ok;
} sdqn_replay_report;

/* Recomputes every recorded reward. Returns SDQN_ERR_REPLAY_MISMATCH (with
 * the report filled in) when any reward or the config digest disagrees. */
SDQN_API sdqn_status sdqn_replay_verify(const char* path, sdqn_replay_report* out);

#ifdef __cplusplus
}
#endif

#endif /* SOCCERDQN_H */
