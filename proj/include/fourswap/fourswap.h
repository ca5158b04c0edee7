// Copyright 2026 The Fourswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef FOURSWAP_FOURSWAP_H_
#define FOURSWAP_FOURSWAP_H_

#include <stddef.h>

#if defined(FOURSWAP_BUILDING_LIBRARY)
#define FSW_API __attribute__((visibility("default")))
#else
#define FSW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every fallible call returns one; details go to
   fsw_last_error() of the calling thread. */
enum {
  FSW_OK = 0,
  FSW_ERR_INVALID_ARGUMENT = 1,
  FSW_ERR_CONFIG = 2,
  FSW_ERR_DOMAIN = 3,
  FSW_ERR_NUMERIC = 4,
  FSW_ERR_IO = 5,
  FSW_ERR_INTERNAL = 6
};

typedef struct fsw_config fsw_config;
typedef struct fsw_result fsw_result;
typedef struct fsw_source fsw_source;

FSW_API const char* fsw_version(void);
FSW_API const char* fsw_last_error(void);
FSW_API const char* fsw_status_name(int status);

/* Configuration. */
FSW_API int fsw_config_new(fsw_config** out);
FSW_API int fsw_config_load(const char* path, fsw_config** out);
FSW_API int fsw_config_parse(const char* text, fsw_config** out);
FSW_API int fsw_config_set(fsw_config* cfg, const char* key, const char* value);
FSW_API int fsw_config_validate(const fsw_config* cfg);
/* SHA-256 hex digest of the canonical configuration; buf needs 65 bytes. */
FSW_API int fsw_config_hash(const fsw_config* cfg, char* buf, size_t len);
FSW_API void fsw_config_free(fsw_config* cfg);

FSW_API size_t fsw_config_key_count(void);
FSW_API const char* fsw_config_key_name(size_t i);
FSW_API const char* fsw_config_key_default(size_t i);
FSW_API const char* fsw_config_key_doc(size_t i);

/* Commands. */
FSW_API size_t fsw_command_count(void);
FSW_API const char* fsw_command_name(size_t i);
FSW_API const char* fsw_command_doc(size_t i);
FSW_API int fsw_run(const fsw_config* cfg, const char* command, int emit_fit,
                    fsw_result** out);
FSW_API const char* fsw_result_summary(const fsw_result* r);
FSW_API size_t fsw_result_file_count(const fsw_result* r);
FSW_API const char* fsw_result_file(const fsw_result* r, size_t i);
FSW_API void fsw_result_free(fsw_result* r);

/* Direct computations on the source described by a configuration. */
FSW_API int fsw_source_new(const fsw_config* cfg, fsw_source** out);
FSW_API int fsw_source_schmidt_number(const fsw_source* s, double* k);
/* Herald probability density at idler detunings (rad/ps). */
FSW_API int fsw_source_herald_probability(const fsw_source* s, double omega_j,
                                          double omega_k, double tau_i,
                                          double* p);
/* P_jk at n signal delays. */
FSW_API int fsw_source_fringes(const fsw_source* s, double omega_j,
                               double omega_k, double tau_i,
                               const double* tau_s, size_t n, double* out);
FSW_API void fsw_source_free(fsw_source* s);

/* Spectral resolution T / D in nm of "cfbg" or "spool". */
FSW_API int fsw_tofs_resolution(const char* preset, double* nm);

#ifdef __cplusplus
}
#endif

#endif /* FOURSWAP_FOURSWAP_H_ */
