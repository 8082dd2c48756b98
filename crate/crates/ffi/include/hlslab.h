#ifndef HLSLAB_H
#define HLSLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HlsOverflow {
  HLS_OVERFLOW_SAT = 0,
  HLS_OVERFLOW_WRAP = 1,
} HlsOverflow;

typedef enum HlsQuant {
  HLS_QUANT_RND = 0,
  HLS_QUANT_RND_ZERO = 1,
  HLS_QUANT_TRN = 2,
} HlsQuant;

typedef enum HlsStatus {
  HLS_STATUS_OK = 0,
  HLS_STATUS_NULL_POINTER = 1,
  HLS_STATUS_INVALID_ARGUMENT = 2,
  HLS_STATUS_PARSE = 3,
  HLS_STATUS_OVERFLOW = 4,
  HLS_STATUS_INTERNAL = 5,
} HlsStatus;

// Opaque decoder handle.
typedef struct HlsDecoder HlsDecoder;

// Decoder construction options.
typedef struct HlsDecoderOptions {
  // Coefficient word width, both filters; 0 keeps the default (10).
  uint32_t coef_width;
  // Round coefficient updates instead of truncating them.
  bool round_updates;
  // Centered decision regions instead of the truncating slicer.
  bool rounding_slicer;
} HlsDecoderOptions;

// Result of one decoder step. Values are raw mantissas: `y` in
// `(FFE_W + 1, 1)`, `e` in `(FFE_W, 0)`, `sv0` in `(5, 1)`.
typedef struct HlsStep {
  uint8_t symbol;
  int64_t y_re;
  int64_t y_im;
  int64_t e_re;
  int64_t e_im;
  int64_t sv0_re;
  int64_t sv0_im;
} HlsStep;

typedef struct HlsReport {
  uint64_t latency_cycles;
  double latency_ns;
  double symbol_rate_mbaud;
  double data_rate_mbps;
  double area;
} HlsReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread; empty after a
// success. Valid until the next call on the same thread.
const char *hlslab_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void hlslab_string_free(char *s);

// Quantizes `num / den` into `(width, int_bits, signed)` and writes the
// raw mantissa.
//
// # Safety
// `out_raw` must be valid for writes.
enum HlsStatus hlslab_fx_convert(int64_t num,
                                 int64_t den,
                                 uint32_t width,
                                 uint32_t int_bits,
                                 bool is_signed,
                                 enum HlsQuant quant,
                                 enum HlsOverflow overflow,
                                 int64_t *out_raw);

// Creates a decoder with zeroed state. `options` may be null for the
// defaults.
//
// # Safety
// `options` must be null or valid for reads; `out` valid for writes.
enum HlsStatus hlslab_decoder_new(const struct HlsDecoderOptions *options, struct HlsDecoder **out);

// Destroys a decoder. Null is ignored.
//
// # Safety
// `dec` must come from [`hlslab_decoder_new`] and not be freed twice.
void hlslab_decoder_free(struct HlsDecoder *dec);

// Zeroes the decoder state.
//
// # Safety
// `dec` must be a live handle.
enum HlsStatus hlslab_decoder_reset(struct HlsDecoder *dec);

// One decoder invocation. `x` holds the two new input samples as raw
// mantissas in `(X_W, 0)`: `{re0, im0, re1, im1}`, where sample 0 is
// `x_in[0]`. `train` is the true symbol (0..63) or -1 for a
// decision-directed step.
//
// # Safety
// `dec` must be a live handle, `x` valid for four reads, `out` valid for
// writes.
enum HlsStatus hlslab_decoder_step(struct HlsDecoder *dec,
                                   const int64_t *x,
                                   int32_t train,
                                   struct HlsStep *out);

// Text dump of the decoder state; free with [`hlslab_string_free`].
//
// # Safety
// `dec` must be a live handle, `out` valid for writes.
enum HlsStatus hlslab_decoder_snapshot(const struct HlsDecoder *dec, char **out);

// Evaluates one architecture against a design, both given as file text.
// `clock_ns` is a decimal or `p/q` string, or null to use the design's
// own clock.
//
// # Safety
// String arguments must be null-terminated; `out` valid for writes.
enum HlsStatus hlslab_explore(const char *design_text,
                              const char *arch_text,
                              const char *clock_ns,
                              struct HlsReport *out);

// Infers the root width of an expression in the widths S-expression
// syntax.
//
// # Safety
// `expr` must be null-terminated; the out pointers valid for writes.
enum HlsStatus hlslab_infer_width(const char *expr, uint32_t *out_width, bool *out_signed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HLSLAB_H */
