#ifndef ADMG_H
#define ADMG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum AdmgStatus {
  ADMG_STATUS_OK = 0,
  ADMG_STATUS_NULL_POINTER = 1,
  ADMG_STATUS_INVALID_UTF8 = 2,
  // Malformed `.admg` text or JSON. Structural problems found while
  // reading `.admg` text (self-loops, duplicate or opposing edges) also land
  // here, so the message can name the line.
  ADMG_STATUS_PARSE = 3,
  // A directed cycle, or a JSON graph that is not an ADMG.
  ADMG_STATUS_INVALID_GRAPH = 4,
  ADMG_STATUS_UNKNOWN_LABEL = 5,
  ADMG_STATUS_NOT_ANCESTRAL = 6,
  // The graph is too large for the requested computation.
  ADMG_STATUS_BOUND_EXCEEDED = 7,
  // Parameters missing, malformed, or not matching the graph's heads.
  ADMG_STATUS_INVALID_PARAMS = 8,
  // Output buffer has the wrong length.
  ADMG_STATUS_BUFFER_SIZE = 9,
  // Anything else, including X, Y, Z that are not disjoint.
  ADMG_STATUS_OTHER = 10,
  // A bug: the library panicked. The handle is still safe to free.
  ADMG_STATUS_PANIC = 11,
} AdmgStatus;

// Opaque graph handle.
typedef struct AdmgGraph AdmgGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses the `.admg` text format. On success `*out` owns a new graph.
//
// # Safety
// `source` must be a nul-terminated string and `out` a valid pointer.
enum AdmgStatus admg_graph_parse(const char *source, struct AdmgGraph **out);

// Parses the JSON graph format (`{"nodes": [...], "directed": [...], "bidirected": [...]}`).
//
// # Safety
// As [`admg_graph_parse`].
enum AdmgStatus admg_graph_parse_json(const char *source, struct AdmgGraph **out);

// Frees a graph. Null is ignored.
//
// # Safety
// `g` must be null or a handle from this library, freed at most once.
void admg_graph_free(struct AdmgGraph *g);

// Number of vertices; 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t admg_graph_vertex_count(const struct AdmgGraph *g);

// Writes the graph back out in `.admg` text form.
//
// # Safety
// `g` must be a live handle and `out` a valid pointer.
enum AdmgStatus admg_graph_to_text(const struct AdmgGraph *g, char **out);

// Sets `*out` to whether `x` and `y` are m-separated given `given`.
//
// # Safety
// `g` must be a live handle, the sets nul-terminated strings, `out` valid.
enum AdmgStatus admg_is_m_separated(const struct AdmgGraph *g,
                                    const char *x,
                                    const char *y,
                                    const char *given,
                                    bool *out);

// Sets `*out` to the number of binary parameters, `Σ_H 2^|tail(H)|`.
//
// # Safety
// `g` must be a live handle and `out` valid.
enum AdmgStatus admg_param_dimension(const struct AdmgGraph *g, uint64_t *out);

// Renders the factorization of an ancestral set, e.g.
// `p(x1,x2,x3) = p(x1) p(x2,x3|x1)`. A null or empty `set` means all vertices.
//
// # Safety
// `g` must be a live handle, `set` null or nul-terminated, `out` valid.
// Free the result with [`admg_string_free`].
enum AdmgStatus admg_factorize(const struct AdmgGraph *g, const char *set, char **out);

// Every head with its tail, one `p(head|tail)` per line.
//
// # Safety
// `g` must be a live handle and `out` valid. Free the result with
// [`admg_string_free`].
enum AdmgStatus admg_heads(const struct AdmgGraph *g, char **out);

// Reconstructs the joint distribution from parameter JSON into `out`, which
// must hold exactly `2^n` doubles. Entry `i` is the probability of the
// assignment whose bit `v` is the value of vertex `v`. Invalid (non-probability)
// parameter points are reconstructed as-is; check the entries.
//
// # Safety
// `g` must be a live handle, `params_json` nul-terminated, and `out` point to
// `len` writable doubles.
enum AdmgStatus admg_moebius_joint(const struct AdmgGraph *g,
                                   const char *params_json,
                                   double *out,
                                   size_t len);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library, freed at most once.
void admg_string_free(char *s);

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call into the library on the same thread.
const char *admg_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ADMG_H */
