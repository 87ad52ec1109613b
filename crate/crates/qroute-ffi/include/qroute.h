/* C interface for the qroute qubit routing library. */

#pragma once

/* Generated with cbindgen:0.26.0 */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status code of every fallible FFI call.
typedef enum QrStatus {
  QrStatus_Ok = 0,
  QrStatus_InvalidArgument = 1,
  QrStatus_ParseError = 2,
  QrStatus_Infeasible = 3,
  QrStatus_LimitExpired = 4,
  QrStatus_InternalError = 5,
} QrStatus;

typedef struct QrCircuit QrCircuit;

typedef struct QrGraph QrGraph;

typedef struct QrRouted QrRouted;

typedef struct QrSwapSequence QrSwapSequence;

// Routing options; zero-initialize for the defaults.
typedef struct QrRouteOptions {
  // Solve each transition exactly instead of by approximation.
  bool exact_swaps;
  // Enumerate only tokens participating in gates; freeze the rest.
  bool active_only;
  // Per-transition hop limit; negative means unlimited.
  int64_t distance_limit;
  // Allocation solve time limit in milliseconds; 0 means unlimited.
  uint64_t time_limit_ms;
  // Cut generation budget in milliseconds.
  uint64_t cut_budget_ms;
} QrRouteOptions;

// Gate and depth accounting of a routed circuit.
typedef struct QrMetrics {
  uint64_t swaps_added;
  uint64_t two_qubit_gates_in;
  uint64_t two_qubit_gates_out;
  uint64_t two_qubit_gates_out_3cx;
  uint64_t depth_in;
  uint64_t depth_out;
  double gate_increase;
  double gate_increase_3cx;
  double depth_increase;
  bool optimal;
} QrMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Last error message of this thread; empty until an error occurs.
// The pointer stays valid until the next failing call on this thread.
const char *qr_last_error_message(void);

const char *qr_version(void);

// Frees a string returned by this library.
//
// # Safety
// `s` must come from this library and not be freed twice.
void qr_string_free(char *s);

// Parses the line-oriented hardware graph format.
//
// # Safety
// `text` must be a NUL-terminated string, `out` a valid pointer.
enum QrStatus qr_graph_from_text(const char *text, struct QrGraph **out);

// Builds a named preset such as `line:8`, `ring:8`, `ladder:8`,
// `grid:3x4`.
//
// # Safety
// `spec` must be a NUL-terminated string, `out` a valid pointer.
enum QrStatus qr_graph_preset(const char *spec, struct QrGraph **out);

// # Safety
// `graph` must be a live handle from this library.
size_t qr_graph_num_vertices(const struct QrGraph *graph);

// # Safety
// `graph` must be a live handle from this library.
size_t qr_graph_num_edges(const struct QrGraph *graph);

// # Safety
// `graph` must come from this library and not be freed twice.
void qr_graph_free(struct QrGraph *graph);

// Parses the circuit text format.
//
// # Safety
// `text` must be a NUL-terminated string, `out` a valid pointer.
enum QrStatus qr_circuit_from_text(const char *text, struct QrCircuit **out);

// # Safety
// `circuit` must be a live handle from this library.
size_t qr_circuit_num_tokens(const struct QrCircuit *circuit);

// # Safety
// `circuit` must be a live handle from this library.
size_t qr_circuit_num_gates(const struct QrCircuit *circuit);

// # Safety
// `circuit` must come from this library and not be freed twice.
void qr_circuit_free(struct QrCircuit *circuit);

// Routes a circuit onto a hardware graph.
//
// # Safety
// `graph` and `circuit` must be live handles; `options` may be null for
// defaults; `out` must be a valid pointer.
enum QrStatus qr_route(const struct QrGraph *graph,
                       const struct QrCircuit *circuit,
                       const struct QrRouteOptions *options,
                       struct QrRouted **out);

// # Safety
// `routed` must be a live handle, `out` a valid pointer.
enum QrStatus qr_routed_metrics(const struct QrRouted *routed, struct QrMetrics *out);

// Renders the routed circuit text; free with [`qr_string_free`].
//
// # Safety
// `routed` must be a live handle.
char *qr_routed_to_text(const struct QrRouted *routed);

// # Safety
// `routed` must come from this library and not be freed twice.
void qr_routed_free(struct QrRouted *routed);

// Solves one token swapping instance given as two token-to-vertex
// tables of length `len` (which must equal the vertex count).
//
// # Safety
// `start` and `target` must point to `len` readable elements; `graph`
// must be a live handle and `out` a valid pointer.
enum QrStatus qr_swap_solve(const struct QrGraph *graph,
                            const uint32_t *start,
                            const uint32_t *target,
                            size_t len,
                            bool exact,
                            struct QrSwapSequence **out);

// # Safety
// `seq` must be a live handle from this library.
size_t qr_swap_sequence_len(const struct QrSwapSequence *seq);

// # Safety
// `seq` must be a live handle from this library.
size_t qr_swap_sequence_depth(const struct QrSwapSequence *seq);

// # Safety
// `seq` must be a live handle from this library.
bool qr_swap_sequence_optimal(const struct QrSwapSequence *seq);

// Reads swap `idx` into `u` and `v`.
//
// # Safety
// `seq` must be a live handle; `u` and `v` must be valid pointers.
enum QrStatus qr_swap_sequence_get(const struct QrSwapSequence *seq,
                                   size_t idx,
                                   uint32_t *u,
                                   uint32_t *v);

// # Safety
// `seq` must come from this library and not be freed twice.
void qr_swap_sequence_free(struct QrSwapSequence *seq);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus
