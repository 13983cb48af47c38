#ifndef ESSCHER2_CAPI_H
#define ESSCHER2_CAPI_H

/* C interface to the second-order Esscher pricing library.  Every function
 * returns 0 (ES2_OK) on success or a nonzero error code; the message for the
 * most recent failure on the calling thread is available from
 * es2_last_error().  Handles are opaque and must be released with the
 * matching destroy function. */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define ES2_OK 0
#define ES2_ERR_INVALID_MODEL 1
#define ES2_ERR_DOMAIN 2
#define ES2_ERR_SOLVER 3
#define ES2_ERR_QUADRATURE 4
#define ES2_ERR_TRUNCATION_OVERFLOW 5
#define ES2_ERR_IO 6
#define ES2_ERR_BAD_CONFIG 7
#define ES2_ERR_INTERNAL 99

typedef struct es2_model es2_model;
typedef struct es2_measure es2_measure;

/* Message for the last error raised on this thread; never NULL. */
const char* es2_last_error(void);

/* Model from {"family": "gbm|cjd|ljd|kou|vg", "params": [...]} with the
 * parameters in constructor order.  NULL on failure. */
es2_model* es2_model_create(const char* json_spec);
void es2_model_destroy(es2_model* model);

/* Family name of the model ("gbm", "cjd", ...). */
const char* es2_model_family(const es2_model* model);

/* Solve the second-order Esscher measure at (r, psi).  measure_class is
 * "exp" or "lin".  NULL on failure (uncertifiable residual, bad class). */
es2_measure* es2_measure_solve(const es2_model* model, double r, double psi,
                               const char* measure_class);
void es2_measure_destroy(es2_measure* measure);
int es2_measure_eta(const es2_measure* measure, double* out);
int es2_measure_intensity(const es2_measure* measure, double* out);
/* Martingale residual of (model, measure) at rate r. */
int es2_measure_residual(const es2_model* model, const es2_measure* measure,
                         double r, double* out);

/* European call under the measure, Poisson-Black-Scholes series (CJD only). */
int es2_price_series(const es2_model* model, const es2_measure* measure,
                     double spot, double r, double expiry, double strike,
                     double* out);

/* European call by Carr-Madan FFT; works for every family, any psi the
 * family's characteristic function supports (psi = 0 selects first order). */
int es2_price_fft(const es2_model* model, double r, double psi,
                  const char* measure_class, double spot, double expiry,
                  double strike, double* out);

/* Black-Scholes implied volatility of a call price. */
int es2_implied_vol(double price, double spot, double r, double expiry,
                    double strike, double* out);

/* Run one full command (fit / price / interval / hedge / calibrate /
 * charfn-check) from a JSON config; artifacts are written under the config's
 * out_dir.  On success writes a JSON array of the file paths produced into
 * out_files (NUL-terminated, truncated to out_cap). */
int es2_dispatch(const char* config_json, char* out_files, size_t out_cap);

#ifdef __cplusplus
}
#endif

#endif /* ESSCHER2_CAPI_H */
