/* C API for the nodal pipeline: opaque handles, integer status codes, and a
 * batch command runner.  All functions return NODAL_OK (0) on success; on
 * failure they return one of the error codes below and leave a description
 * in nodal_last_error() (thread-local).  Handles are created through the
 * *_create functions and must be released with the matching *_destroy. */
#ifndef NODAL_CAPI_H
#define NODAL_CAPI_H

#ifdef __cplusplus
extern "C" {
#endif

#define NODAL_OK 0
#define NODAL_ERR_CONFIG 2   /* bad input, config or precondition */
#define NODAL_ERR_NUMERIC 3  /* solver / continuation / quadrature failure */
#define NODAL_ERR_ASSERT 4   /* invariant asserted by a command failed */

/* Boundary condition selectors. */
#define NODAL_BC_NEUMANN 0
#define NODAL_BC_DIRICHLET 1

typedef struct nodal_curve nodal_curve;  /* analytic closed plane curve */
typedef struct nodal_pairs nodal_pairs;  /* solved eigenpair batch */

/* Library version string, e.g. "0.1.0". */
const char* nodal_version(void);

/* Description of the most recent failure on this thread ("" if none). */
const char* nodal_last_error(void);

/* Curve from a JSON spec: {"kind":"disc"} | {"kind":"ellipse","a":..,"b":..}
 * | {"kind":"stadium","half":..,"radius":..} | {"kind":"circle","r0":..,
 * "cx":..,"cy":..}. */
int nodal_curve_create(const char* spec_json, nodal_curve** out);
void nodal_curve_destroy(nodal_curve* c);
int nodal_curve_length(const nodal_curve* c, double* out);

/* Eigenpairs in the window [k_lo, k_hi] on the given domain. */
int nodal_solve_window(const nodal_curve* domain, double k_lo, double k_hi,
                       int bc, int nq, nodal_pairs** out);
/* Disc eigenpairs for explicit (m, n) Bessel mode indices. */
int nodal_disc_modes(const int* m, const int* n, int count, int bc, int nq,
                     nodal_pairs** out);
void nodal_pairs_destroy(nodal_pairs* p);
int nodal_pairs_size(const nodal_pairs* p, int* out);
int nodal_pairs_lambda(const nodal_pairs* p, int i, double* out);
int nodal_pairs_h(const nodal_pairs* p, int i, double* out);

/* Holomorphic continuation u^C(re_t + i im_t) of the restriction of pair i
 * to the interior curve H. */
int nodal_pair_continue(const nodal_pairs* p, int i, const nodal_curve* H,
                        double re_t, double im_t, double* out_re,
                        double* out_im);

/* Weight S(t) for the pair (H, domain boundary) at t = re_t + i im_t. */
int nodal_weight(const nodal_curve* H, const nodal_curve* bdry, double re_t,
                 double im_t, double* out);

/* Run one batch subcommand (solve | count | qer | growth | weight | decay)
 * on a JSON config, writing artifacts under out_dir.  Returns the command's
 * exit code (0/2/3/4); the human-readable result message is copied into
 * msg_buf (truncated to msg_len, always NUL-terminated when msg_len > 0). */
int nodal_run_command(const char* cmd, const char* config_json,
                      const char* out_dir, int long_running, char* msg_buf,
                      int msg_len);

#ifdef __cplusplus
}
#endif

#endif /* NODAL_CAPI_H */
