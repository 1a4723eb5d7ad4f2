#ifndef MANIPOS_H
#define MANIPOS_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(MANIPOS_BUILDING_LIBRARY)
#define MANIPOS_API __attribute__((visibility("default")))
#else
#define MANIPOS_API
#endif

typedef enum manipos_status {
    MANIPOS_OK = 0,
    MANIPOS_E_ARGUMENT = 1,
    MANIPOS_E_PARSE = 2,
    MANIPOS_E_INVALID_ACTION = 3,
    MANIPOS_E_DUPLICATE_NAME = 4,
    MANIPOS_E_UNKNOWN_NODE = 5,
    MANIPOS_E_STALE_NODE = 6,
    MANIPOS_E_UNKNOWN_FILE = 7,
    MANIPOS_E_UNKNOWN_JOB = 8,
    MANIPOS_E_BUSY = 9,
    MANIPOS_E_FILE_VANISHED = 10,
    MANIPOS_E_NO_RESULT = 11,
    MANIPOS_E_TIMEOUT = 12,
    MANIPOS_E_CANCELLED = 13,
    MANIPOS_E_IO = 14,
    MANIPOS_E_INTERNAL = 15
} manipos_status;

typedef struct manipos_session manipos_session;
typedef struct manipos_server manipos_server;

typedef struct manipos_synth_options {
    double round_timeout_s; /* <= 0: 10 */
    double cap_s;           /* <= 0: 40 */
    int fuel;               /* <= 0: 1000 */
    const char* pcfg_path;  /* NULL: built-in table */
} manipos_synth_options;

typedef struct manipos_server_options {
    const char* host;       /* NULL: 127.0.0.1 */
    int port;               /* 0: any free port */
    int fuel;               /* <= 0: 1000 */
    double synth_timeout_s; /* <= 0: 10 */
    const char* pcfg_path;  /* NULL: built-in table */
} manipos_server_options;

/* Message of the last failed call on this thread. Never NULL. */
MANIPOS_API const char* manipos_last_error(void);
MANIPOS_API const char* manipos_status_name(manipos_status s);
MANIPOS_API const char* manipos_version(void);
/* Releases strings returned through out parameters. */
MANIPOS_API void manipos_free(char* s);

/* Reprints a program in canonical layout. */
MANIPOS_API manipos_status manipos_format(const char* text, char** out);
/* Reorders bindings, inserts missing ones and normalizes case splits. */
MANIPOS_API manipos_status manipos_normalize(const char* text, char** out);
/* Runs a program; *out_json is {"bindings":[{name,value}],"asserts":[{text,state,actual,expected}],"steps":n}. */
MANIPOS_API manipos_status manipos_run(const char* text, int fuel, char** out_json);
/* Fills holes so every assertion passes; fills are marked pending. opts may be NULL. */
MANIPOS_API manipos_status manipos_synthesize(const char* text, const manipos_synth_options* opts, char** out);

/* One file under edit. fuel <= 0 selects the default. */
MANIPOS_API manipos_status manipos_session_open(const char* path, int fuel, manipos_session** out);
/* Applies one JSON action; *out_json is {"text","token"}. */
MANIPOS_API manipos_status manipos_session_action(manipos_session* s, const char* action_json, char** out_json);
MANIPOS_API manipos_status manipos_session_document(manipos_session* s, char** out_json);
MANIPOS_API void manipos_session_close(manipos_session* s);

/* Binds and serves the files of `dir` on a background thread. opts may be NULL. */
MANIPOS_API manipos_status manipos_server_start(const char* dir, const manipos_server_options* opts,
                                                manipos_server** out);
MANIPOS_API int manipos_server_port(const manipos_server* s);
/* Stops serving and releases the server. */
MANIPOS_API void manipos_server_stop(manipos_server* s);

#ifdef __cplusplus
}
#endif

#endif
