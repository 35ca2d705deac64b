#ifndef QFACTOR_H
#define QFACTOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  QF_STATUS_OK = 0,
  QF_STATUS_PARSE = 1,
  QF_STATUS_AXIOM = 2,
  QF_STATUS_DISCONNECTED = 3,
  QF_STATUS_NOT_NORMAL = 4,
  QF_STATUS_NO_FACTORIZATION = 5,
  QF_STATUS_PRECONDITION = 6,
  QF_STATUS_INTERNAL = 7,
  QF_STATUS_NULL_POINTER = 8,
} QfStatus;

/**
 * A quandle homomorphism, holding copies of its source and target.
 */
typedef struct QfHom QfHom;

/**
 * A validated quandle.
 */
typedef struct QfQuandle QfQuandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failed call on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *qf_last_error(void);

/**
 * Builds a quandle from a row-major `n × n` table with `table[x*n + y] = x ▷ y`.
 *
 * # Safety
 * `table` must point to `n * n` readable values and `out` must be writable.
 */
QfStatus qf_quandle_from_table(size_t n, const size_t *table, QfQuandle **out);

/**
 * Parses a quandle from the JSON file format.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` must be writable.
 */
QfStatus qf_quandle_from_json(const char *json, QfQuandle **out);

/**
 * Writes the quandle in the JSON file format. Release with [`qf_string_free`].
 *
 * # Safety
 * `q` must be a live handle and `out` must be writable.
 */
QfStatus qf_quandle_to_json(const QfQuandle *q, char **out);

/**
 * # Safety
 * `s` must come from this library, or be null.
 */
void qf_string_free(char *s);

/**
 * # Safety
 * `q` must come from this library, or be null.
 */
void qf_quandle_free(QfQuandle *q);

/**
 * Number of elements; 0 for a null handle.
 *
 * # Safety
 * `q` must be a live handle or null.
 */
size_t qf_quandle_size(const QfQuandle *q);

/**
 * `x ▷ y`, or `SIZE_MAX` when a point is out of range.
 *
 * # Safety
 * `q` must be a live handle or null.
 */
size_t qf_quandle_op(const QfQuandle *q, size_t x, size_t y);

/**
 * # Safety
 * `q` must be a live handle or null.
 */
bool qf_quandle_is_connected(const QfQuandle *q);

/**
 * Order of the inner automorphism group.
 *
 * # Safety
 * `q` must be a live handle and `out` must be writable.
 */
QfStatus qf_quandle_inn_order(const QfQuandle *q, size_t *out);

/**
 * Checks that `map` (of length `len`) is a homomorphism `source → target`.
 * The handle keeps its own copies of both quandles.
 *
 * # Safety
 * `source` and `target` must be live handles, `map` must point to `len`
 * readable values and `out` must be writable.
 */
QfStatus qf_hom_new(const QfQuandle *source,
                    const QfQuandle *target,
                    const size_t *map,
                    size_t len,
                    QfHom **out);

/**
 * # Safety
 * `h` must come from this library, or be null.
 */
void qf_hom_free(QfHom *h);

/**
 * Decides whether the surjection `g` factors as `φ ∘ h` for surjections
 * `g, h` out of the same connected quandle.
 *
 * On `QF_STATUS_OK`, `phi` (of capacity `phi_len`, at least the size of
 * the target of `h`) receives the images of φ. On
 * `QF_STATUS_NO_FACTORIZATION`, [`qf_last_error`] names the failed
 * condition and its witness.
 *
 * # Safety
 * `g` and `h` must be live handles and `phi` must point to `phi_len`
 * writable values.
 */
QfStatus qf_factor(const QfHom *g, const QfHom *h, size_t *phi, size_t phi_len);

/**
 * Number of connected quandles of order `n` up to isomorphism, `n ≤ 8`.
 *
 * # Safety
 * `out` must be writable.
 */
QfStatus qf_connected_count(size_t n, size_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QFACTOR_H */
