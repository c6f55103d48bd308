#ifndef LG_ORBIFOLD_H
#define LG_ORBIFOLD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LgoStatus {
  LGO_STATUS_OK = 0,
  LGO_STATUS_NULL_POINTER = 1,
  LGO_STATUS_INVALID_UTF8 = 2,
  LGO_STATUS_INVALID_INPUT = 3,
  LGO_STATUS_MATH_ERROR = 4,
  LGO_STATUS_BUFFER_TOO_SMALL = 5,
  LGO_STATUS_PANIC = 6,
} LgoStatus;

typedef struct LgoMatrixFactorization LgoMatrixFactorization;

/*
 A weighted homogeneous polynomial with its weight system.
 */
typedef struct LgoPolynomial LgoPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message of the most recent failure on this thread, or NULL. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *lgo_last_error(void);

/*
 # Safety
 `s` must be NULL or a string returned by this library and not yet freed.
 */
void lgo_string_free(char *s);

/*
 Parse W, e.g. "x^3*y + y^2". The weight system is computed eagerly but
 a polynomial without one is still accepted.

 # Safety
 `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum LgoStatus lgo_polynomial_parse(const char *text, struct LgoPolynomial **out);

/*
 # Safety
 `p` must be NULL or a handle from `lgo_polynomial_parse` not yet freed.
 */
void lgo_polynomial_free(struct LgoPolynomial *p);

/*
 # Safety
 `p` must be a live polynomial handle.
 */
uintptr_t lgo_polynomial_nvars(const struct LgoPolynomial *p);

/*
 Reduced weights into `w[0..len]` and the degree into `h`.

 # Safety
 `p` must be a live handle, `w` must point to `len` writable `u64`s and
 `h` to one.
 */
enum LgoStatus lgo_weights(const struct LgoPolynomial *p, uint64_t *w, uintptr_t len, uint64_t *h);

/*
 |G_W| as a decimal string.

 # Safety
 `p` must be a live handle and `out` a valid pointer.
 */
enum LgoStatus lgo_symmetry_order(const struct LgoPolynomial *p, char **out);

/*
 The Berglund-Hübsch transpose W^T as text.

 # Safety
 `p` must be a live handle and `out` a valid pointer.
 */
enum LgoStatus lgo_transpose(const struct LgoPolynomial *p, char **out);

/*
 μ_RS of the principal orbit as "p/q".

 # Safety
 `p` must be a live handle and `out` a valid pointer.
 */
enum LgoStatus lgo_principal_mu(const struct LgoPolynomial *p, char **out);

/*
 Number of admissible cuts for F ⊆ {1..n}, with F given as `len` 1-based indices.

 # Safety
 `f` must point to `len` readable `usize`s (or be NULL with `len == 0`),
 and `out` must be valid.
 */
enum LgoStatus lgo_cut_count(uintptr_t n, const uintptr_t *f, uintptr_t len, uintptr_t *out);

/*
 Run the A∞ verifier and return its report as JSON. `deg_gamma` is a
 rational like "0" or "7/3"; `gamma_parity` is used only when it is
 not an integer.

 # Safety
 `eps` must point to `len` readable `usize`s (or be NULL with `len == 0`),
 `deg_gamma` must be a NUL-terminated string and `out` valid.
 */
enum LgoStatus lgo_verify_ainfty(uintptr_t n,
                                 const uintptr_t *eps,
                                 uintptr_t len,
                                 const char *deg_gamma,
                                 uint8_t gamma_parity,
                                 bool *passes,
                                 char **out);

/*
 Parse a factorization from JSON `{"potential": .., "A": [[..]], "B": [[..]]}`.

 # Safety
 `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LgoStatus lgo_mf_from_json(const char *json, struct LgoMatrixFactorization **out);

/*
 # Safety
 `m` must be NULL or a handle from `lgo_mf_from_json` not yet freed.
 */
void lgo_mf_free(struct LgoMatrixFactorization *m);

/*
 # Safety
 `m` must be a live handle.
 */
uintptr_t lgo_mf_rank(const struct LgoMatrixFactorization *m);

/*
 Whether A·B = B·A = W·Id.

 # Safety
 `m` must be a live handle and `valid` a valid pointer.
 */
enum LgoStatus lgo_mf_check(const struct LgoMatrixFactorization *m, bool *valid);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LG_ORBIFOLD_H */
