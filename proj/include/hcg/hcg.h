/* C interface to the homotopy conditional-gradient solver library.
 *
 * All functions return hcg_status; HCG_OK (0) on success. On failure a
 * thread-local message is available via hcg_last_error(). Handles are
 * opaque and must be released with the matching _free function. */

#ifndef HCG_H
#define HCG_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  HCG_OK = 0,
  HCG_ERR_INVALID_ARGUMENT = 1,
  HCG_ERR_IO = 2,
  HCG_ERR_RUNTIME = 3
} hcg_status;

typedef struct hcg_instance hcg_instance;
typedef struct hcg_result hcg_result;

typedef enum { HCG_SOLVER_CG = 0, HCG_SOLVER_LCG = 1, HCG_SOLVER_ICG = 2 } hcg_solver;

typedef struct {
  int solver;          /* hcg_solver */
  double epsilon;      /* target accuracy, > 0 */
  double sigma;        /* schedule ratio in (0,1), default 0.9 */
  double eta0_mult;    /* eta0 = eta0_mult * Omega_g, default 2 */
  double delta;        /* ILMO multiplicative certificate, (0,1], default 1 */
  double theta0;       /* ILMO additive schedule start; < 0 means eta0 */
  uint64_t seed;       /* oracle seed, default 0 */
  long max_iterations; /* total inner-iteration cap */
  double max_seconds;  /* wall-clock cap, default 3600 */
  int lanczos_iters;   /* ILMO max Lanczos iterations per call */
  int trace_timing;    /* 1: wall-clock elapsed_s in trace records */
} hcg_solve_options;

void hcg_solve_options_init(hcg_solve_options* opts);

const char* hcg_last_error(void);

hcg_status hcg_instance_builtin(const char* name, hcg_instance** out);
hcg_status hcg_instance_from_file(const char* path, hcg_instance** out);
hcg_status hcg_instance_from_gset(const char* path, hcg_instance** out);
hcg_status hcg_instance_gen_mixing(int n, int m, uint64_t seed, int normalize,
                                   hcg_instance** out);
hcg_status hcg_instance_save(const hcg_instance* inst, const char* path);
void hcg_instance_free(hcg_instance* inst);

hcg_status hcg_instance_info(const hcg_instance* inst, double* nu, int* block_dim,
                             int* has_opt_ref, double* opt_ref);

/* Runs the homotopy loop; writes a line-delimited trace to trace_path and a
 * summary record to summary_path when non-NULL. */
hcg_status hcg_solve(const hcg_instance* inst, const hcg_solve_options* opts,
                     const char* trace_path, const char* summary_path,
                     hcg_result** out);

double hcg_result_objective(const hcg_result* r);
double hcg_result_certificate(const hcg_result* r);
double hcg_result_feasibility_margin(const hcg_result* r);
long hcg_result_rounds(const hcg_result* r);
long hcg_result_total_iterations(const hcg_result* r);
int hcg_result_converged(const hcg_result* r);
void hcg_result_free(hcg_result* r);

/* Reads a solution file ({"matrix": [[...], ...]}), applies the instance's
 * repair procedure, writes the repaired solution and a report. */
hcg_status hcg_repair(const hcg_instance* inst, const char* solution_path,
                      const char* out_solution_path, const char* out_report_path);

#ifdef __cplusplus
}
#endif

#endif /* HCG_H */
