/* keyless C API: opaque handles, status codes, caller-owned buffers. */

#ifndef KEYLESS_H
#define KEYLESS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KlStatus {
  KL_STATUS_OK = 0,
  KL_STATUS_IMAGE_IO = 3,
  KL_STATUS_IMAGE_FORMAT = 4,
  KL_STATUS_IMAGE_VALUE = 5,
  KL_STATUS_IO = 6,
  KL_STATUS_INVALID_CREDENTIAL = 10,
  KL_STATUS_NONCE_FORMAT = 11,
  KL_STATUS_NO_SAVED_NONCE = 12,
  KL_STATUS_ENTROPY = 13,
  KL_STATUS_EMPTY_PLAINTEXT = 20,
  KL_STATUS_MESSAGE_TOO_LONG = 21,
  KL_STATUS_NIBBLE_RANGE = 22,
  KL_STATUS_SIZE_MISMATCH = 23,
  KL_STATUS_PERMUTATION = 24,
  KL_STATUS_SELECTOR_BUDGET_EXCEEDED = 25,
  KL_STATUS_CORRUPT_CIPHER = 30,
  KL_STATUS_MALFORMED_CIPHER = 31,
  KL_STATUS_WRONG_PROTOCOL = 40,
  KL_STATUS_UNSUPPORTED_VERSION = 41,
  KL_STATUS_MALFORMED_FRAME = 42,
  KL_STATUS_CORRUPT_FRAME = 43,
  KL_STATUS_TRANSPORT = 50,
  KL_STATUS_NULL_ARGUMENT = 60,
  KL_STATUS_BUFFER_TOO_SMALL = 61,
  KL_STATUS_INVALID_ARGUMENT = 62,
} KlStatus;

/**
 * Opaque device ID and password pair.
 */
typedef struct KlCredentials KlCredentials;

/**
 * Opaque memristor image.
 */
typedef struct KlImage KlImage;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Static, NUL-terminated name for a status code; "Unknown" for values that
 * are not a `KlStatus`.
 */
const char *kl_status_name(int32_t status);

const char *kl_version(void);

/**
 * Longest plaintext accepted by [`kl_encrypt`].
 */
size_t kl_max_plaintext(void);

/**
 * Frame size in bytes for a plaintext of `plaintext_len` bytes, or 0 when
 * that length cannot be encrypted.
 */
size_t kl_frame_len(size_t plaintext_len);

/**
 * Deterministic image from a 64-bit seed. Release with [`kl_image_free`].
 */
struct KlImage *kl_image_generate(uint64_t seed64);

/**
 * Load an image file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable pointer.
 */
enum KlStatus kl_image_load(const char *path, struct KlImage **out);

/**
 * Write an image file.
 *
 * # Safety
 * `img` must be a live handle and `path` a NUL-terminated string.
 */
enum KlStatus kl_image_save(const struct KlImage *img, const char *path);

/**
 * Read the resistance at `(address, current)`.
 *
 * # Safety
 * `img` must be a live handle and `out` writable.
 */
enum KlStatus kl_image_cell(const struct KlImage *img,
                            uint8_t address,
                            uint8_t current,
                            double *out);

/**
 * # Safety
 * `img` must be null or a handle not yet freed.
 */
void kl_image_free(struct KlImage *img);

/**
 * Normalize raw ID and password bytes into a credentials handle.
 *
 * # Safety
 * `id`/`pw` must point to `id_len`/`pw_len` readable bytes, `out` writable.
 */
enum KlStatus kl_credentials_new(const uint8_t *id,
                                 size_t id_len,
                                 const uint8_t *pw,
                                 size_t pw_len,
                                 struct KlCredentials **out);

/**
 * # Safety
 * `cred` must be null or a handle not yet freed.
 */
void kl_credentials_free(struct KlCredentials *cred);

/**
 * Encrypt `plaintext` into a wire frame.
 *
 * `rn` points to 16 nonce bytes, or is null to draw a fresh nonce from the
 * operating system. `frame_out` must hold `kl_frame_len(plaintext_len)`
 * bytes; the written size is stored in `frame_len_out`.
 *
 * # Safety
 * All non-null pointers must be valid for the stated sizes.
 */
enum KlStatus kl_encrypt(const struct KlCredentials *cred,
                         const struct KlImage *img,
                         const uint8_t *plaintext,
                         size_t plaintext_len,
                         const uint8_t *rn,
                         uint8_t *frame_out,
                         size_t frame_cap,
                         size_t *frame_len_out);

/**
 * Decrypt a wire frame. `plain_out` should hold `kl_max_plaintext()` bytes;
 * the recovered length is stored in `plain_len_out`.
 *
 * # Safety
 * All pointers must be valid for the stated sizes.
 */
enum KlStatus kl_decrypt(const struct KlCredentials *cred,
                         const struct KlImage *img,
                         const uint8_t *frame,
                         size_t frame_len,
                         uint8_t *plain_out,
                         size_t plain_cap,
                         size_t *plain_len_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KEYLESS_H */
