/* C interface to the knockout manipulation solver suite. */
#ifndef KOMAN_KOMAN_H
#define KOMAN_KOMAN_H

#include <stddef.h>
#include <stdint.h>

#if defined(KOMAN_BUILDING)
#define KOMAN_API __attribute__((visibility("default")))
#else
#define KOMAN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum koman_status {
  KOMAN_OK = 0,
  KOMAN_ERR_SYNTAX,
  KOMAN_ERR_VALIDATION,
  KOMAN_ERR_SIZE_LIMIT,
  KOMAN_ERR_BAD_PARAMETER,
  KOMAN_ERR_UNKNOWN_WINNER,
  KOMAN_ERR_INCOMPLETE_ROUND,
  KOMAN_ERR_DOUBLE_THROW,
  KOMAN_ERR_LEVEL_MISMATCH,
  KOMAN_ERR_MISSING_ROLES,
  KOMAN_ERR_IO,
  KOMAN_ERR_FINISHED,
  KOMAN_ERR_NULL_ARGUMENT,
  KOMAN_ERR_INTERNAL
} koman_status;

typedef enum koman_mode { KOMAN_MODE_FULL = 0, KOMAN_MODE_REACHABLE = 1, KOMAN_MODE_LOWMEM = 2 } koman_mode;

typedef struct koman_instance koman_instance;
typedef struct koman_session koman_session;
typedef struct koman_service koman_service;

/* Message of the last failure on the calling thread; empty after success. */
KOMAN_API const char* koman_last_error(void);
KOMAN_API const char* koman_status_name(koman_status status);
/* Every char* returned through an out parameter is released with this. */
KOMAN_API void koman_string_free(char* s);

/* Instances. A validation failure leaves the report (JSON) in last_error. */
KOMAN_API koman_status koman_instance_parse(const char* json, koman_instance** out);
KOMAN_API koman_status koman_instance_load(const char* path, koman_instance** out);
KOMAN_API void koman_instance_free(koman_instance* inst);
KOMAN_API size_t koman_instance_player_count(const koman_instance* inst);
/* indent < 0 gives compact output */
KOMAN_API koman_status koman_instance_serialize(const koman_instance* inst, int indent, char** out);
/* JSON array of {code, detail}; empty for a valid document. Parses without validating. */
KOMAN_API koman_status koman_validate_document(const char* json, char** report);

/* Solving. Values are rational strings such as "3/8". */
/* {"t_opt","mode","entries","configurations","peak_live"} */
KOMAN_API koman_status koman_solve(const koman_instance* inst, koman_mode mode, char** result_json);
KOMAN_API koman_status koman_decide(const koman_instance* inst, int* answer);
/* {"profile": {name: "PLAY"|"THROW"}, "value"} */
KOMAN_API koman_status koman_best_response(const koman_instance* inst, char** result_json);
/* {"size", "cover": [names], "edges": [[a,b]...]} */
KOMAN_API koman_status koman_cover(const koman_instance* inst, char** result_json);
KOMAN_API koman_status koman_oracle(const koman_instance* inst, int nonadaptive, char** value);
KOMAN_API koman_status koman_monte_carlo(const koman_instance* inst, uint64_t trials, uint64_t seed, double* estimate,
                                         double* standard_error);

/* Generators; the text formats are DIMACS-like (see README). */
KOMAN_API koman_status koman_generate_qbf(const char* formula, int trim, koman_instance** out);
KOMAN_API koman_status koman_generate_sat(const char* cnf, koman_instance** out);
KOMAN_API koman_status koman_generate_mcc(const char* graph, koman_instance** out);
/* Exhaustive truth value of the source problem: kind is "qbf", "sat" or "mcc". */
KOMAN_API koman_status koman_source_answer(const char* kind, const char* text, int* answer);

/* Round-by-round advising. */
KOMAN_API koman_status koman_session_create(const koman_instance* inst, koman_session** out);
KOMAN_API void koman_session_free(koman_session* session);
KOMAN_API int koman_session_finished(const koman_session* session);
/* {"round","tree","pairings","eliminated","t_opt","finished","winner",...} */
KOMAN_API koman_status koman_session_state(koman_session* session, char** state_json);
KOMAN_API koman_status koman_session_best_response(koman_session* session, char** result_json);
/* winners: names in pairing order */
KOMAN_API koman_status koman_session_advance(koman_session* session, const char* const* winners, size_t count);

/* HTTP service. snapshot_dir may be NULL. */
KOMAN_API koman_status koman_service_create(const char* snapshot_dir, koman_service** out);
KOMAN_API void koman_service_free(koman_service* service);
/* In-process request, same routing as the HTTP server. */
KOMAN_API koman_status koman_service_handle(koman_service* service, const char* method, const char* path, const char* body,
                                            int* http_status, char** response);
/* Blocks until koman_service_stop. ready (optional) gets the bound port. */
KOMAN_API koman_status koman_service_serve(koman_service* service, const char* host, int port,
                                           void (*ready)(int port, void* user), void* user);
KOMAN_API void koman_service_stop(koman_service* service);

#ifdef __cplusplus
}
#endif

#endif
