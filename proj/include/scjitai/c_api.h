/* Plain C surface of StepCountEnv for foreign-function bindings.
 *
 * Only 64-bit floats and 64-bit integers cross the boundary. Every call
 * returns a status code; on failure scj_last_error() describes the problem
 * (thread-local, valid until the next failing call on the same thread). */
#ifndef SCJITAI_C_API_H_
#define SCJITAI_C_API_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum scj_status {
  SCJ_OK = 0,
  SCJ_DOMAIN_ERROR = 1,
  SCJ_CONFIG_ERROR = 2,
  SCJ_USAGE_ERROR = 3,
  SCJ_INTERNAL_ERROR = 4
};

/* Number of doubles written into an info buffer:
 * C, X, P, L, H, D, S, t, delta_h, epsilon_h, delta_d, epsilon_d. */
#define SCJ_INFO_SIZE 12

typedef struct scj_params {
  double sigma;
  double delta_h;
  double epsilon_h;
  double delta_d;
  double epsilon_d;
  double rho1;
  double rho2;
  double m_s;
  double D_threshold;
  int64_t horizon;
  int64_t n_version; /* 0 deterministic, 1 uniform, 2 beta */
  double sigma_s;
  double a_hd;
  double a_de;
  double kappa_h;
  double kappa_d;
  double kappa_delta_h;
  double kappa_epsilon_h;
  double kappa_delta_d;
  double kappa_epsilon_d;
} scj_params;

typedef struct scj_env scj_env;

void scj_default_params(scj_params* out);

/* obs_names: comma-separated variable names, e.g. "C,H,D". */
int64_t scj_env_create(const scj_params* params, const char* obs_names, uint64_t seed, scj_env** out);
void scj_env_destroy(scj_env* env);

int64_t scj_env_obs_size(const scj_env* env);

/* obs must hold scj_env_obs_size() doubles, info SCJ_INFO_SIZE (info may be NULL). */
int64_t scj_env_reset(scj_env* env, int64_t has_seed, uint64_t seed, double* obs, double* info);
int64_t scj_env_step(scj_env* env, int64_t action, double* obs, double* reward,
                     int64_t* terminated, int64_t* truncated, double* info);

/* var is one of 'C', 'P', 'L', 'H', 'D', 'S'. */
int64_t scj_env_get(const scj_env* env, char var, double* out);

/* Environments created and not yet destroyed, process-wide. */
int64_t scj_live_handles(void);

const char* scj_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* SCJITAI_C_API_H_ */
