/* C interface to the tydp termination checker.
 *
 * Every string handed out by the library is heap-allocated and must be
 * released with tydp_string_free. Output pointers are set to NULL when a
 * call produces no such output.
 */
#ifndef TYDP_TYDP_H
#define TYDP_TYDP_H

#include <stddef.h>

#if defined(_WIN32)
#define TYDP_API __declspec(dllexport)
#elif defined(__GNUC__)
#define TYDP_API __attribute__((visibility("default")))
#else
#define TYDP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct tydp_system tydp_system;

typedef enum tydp_status {
    TYDP_OK = 0,
    TYDP_UNKNOWN = 1,        /* criterion inconclusive */
    TYDP_INVALID = 2,        /* signature or rule validation failed */
    TYDP_PARSE_ERROR = 3,
    TYDP_FUEL_EXHAUSTED = 4, /* reduction budget spent or cycle found */
    TYDP_IO_ERROR = 5,
    TYDP_BAD_ARGUMENT = 6,
    TYDP_INTERNAL_ERROR = 7
} tydp_status;

typedef struct tydp_check_options {
    size_t fuel;   /* 0 selects the default of 10000 */
    int timing;    /* include phase timings */
    int oracle;    /* run every symbol on ground trees */
} tydp_check_options;

TYDP_API const char* tydp_version(void);
TYDP_API const char* tydp_status_name(tydp_status status);

/* Parses and validates `text`. On TYDP_OK, TYDP_INVALID and TYDP_PARSE_ERROR
 * a handle is returned so that diagnostics can be read. */
TYDP_API tydp_status tydp_load(const char* text, size_t length, tydp_system** out);
TYDP_API tydp_status tydp_load_file(const char* path, tydp_system** out);
TYDP_API void tydp_system_free(tydp_system* sys);

TYDP_API tydp_status tydp_diagnostics_text(const tydp_system* sys, char** text);

/* TYDP_OK when terminating. Either output may be NULL. */
TYDP_API tydp_status tydp_check(const tydp_system* sys, const tydp_check_options* options, char** text,
                                char** json);

TYDP_API tydp_status tydp_graph_dot(const tydp_system* sys, char** dot);

TYDP_API tydp_status tydp_typecheck(const tydp_system* sys, char** text, char** json);

/* Normalizes an erased term. `all` selects every normal form in the text
 * output. Returns TYDP_FUEL_EXHAUSTED when no complete answer was found. */
TYDP_API tydp_status tydp_reduce(const tydp_system* sys, const char* term, size_t fuel, int all, char** text,
                                 char** json);

TYDP_API void tydp_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif
