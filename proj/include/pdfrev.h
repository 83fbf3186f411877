/* pdfrev — PDF revision forensics library, public C interface.
 *
 * All functions return a pdfrev_status; on failure pdfrev_last_error()
 * holds a message for the calling thread. Buffers returned through
 * pdfrev_buf must be released with pdfrev_buf_free.
 */
#ifndef PDFREV_H
#define PDFREV_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PDFREV_API __declspec(dllexport)
#else
#define PDFREV_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct pdfrev_doc pdfrev_doc;

typedef struct pdfrev_buf {
    uint8_t* data;
    size_t len;
} pdfrev_buf;

/* Mirrors the CLI exit-code contract. */
typedef enum pdfrev_status {
    PDFREV_OK = 0,
    PDFREV_ERR_PARSE = 1,   /* malformed input, bad arguments, failed preconditions */
    PDFREV_ERR_UNSUPPORTED = 2, /* encrypted documents, unsupported rewrite targets */
    PDFREV_ERR_IO = 3,      /* file system failures */
} pdfrev_status;

PDFREV_API const char* pdfrev_version(void);

/* Thread-local message describing the most recent failure. */
PDFREV_API const char* pdfrev_last_error(void);

PDFREV_API void pdfrev_buf_free(pdfrev_buf* buf);

/* max_file_size of 0 selects the 1 GiB default. */
PDFREV_API pdfrev_status pdfrev_open_file(const char* path, uint64_t max_file_size,
                                          pdfrev_doc** out);
PDFREV_API pdfrev_status pdfrev_open_bytes(const uint8_t* data, size_t len,
                                           uint64_t max_file_size, pdfrev_doc** out);
PDFREV_API void pdfrev_close(pdfrev_doc* doc);

PDFREV_API size_t pdfrev_revision_count(const pdfrev_doc* doc);

/* JSON reports (UTF-8, schema_version 1). rev = -1 selects all revisions. */
PDFREV_API pdfrev_status pdfrev_report_info(const pdfrev_doc* doc, pdfrev_buf* out_json);
PDFREV_API pdfrev_status pdfrev_report_text(const pdfrev_doc* doc, int64_t rev,
                                            pdfrev_buf* out_json);
PDFREV_API pdfrev_status pdfrev_report_diff(const pdfrev_doc* doc, size_t from_rev,
                                            size_t to_rev, pdfrev_buf* out_json);
PDFREV_API pdfrev_status pdfrev_report_shadows(const pdfrev_doc* doc, pdfrev_buf* out_json);
PDFREV_API pdfrev_status pdfrev_report_scan(const pdfrev_doc* doc, pdfrev_buf* out_json);
PDFREV_API pdfrev_status pdfrev_report_images(const pdfrev_doc* doc, int64_t rev,
                                              pdfrev_buf* out_json);

#define PDFREV_RECOVER_TRUNCATE 0
#define PDFREV_RECOVER_REWRITE 1

PDFREV_API pdfrev_status pdfrev_recover(const pdfrev_doc* doc, size_t rev, int method,
                                        pdfrev_buf* out_pdf, pdfrev_buf* out_json);

/* Image payloads for revision rev (-1 = final). */
PDFREV_API pdfrev_status pdfrev_image_count(const pdfrev_doc* doc, int64_t rev, size_t* out);
/* out_meta_json: {"format","ext","width","height","page","object",...} */
PDFREV_API pdfrev_status pdfrev_image_get(const pdfrev_doc* doc, int64_t rev, size_t index,
                                          pdfrev_buf* out_data, pdfrev_buf* out_meta_json);

#define PDFREV_HIDE_SUPERSEDED 1
#define PDFREV_HIDE_SLACK 2

/* at = -1 selects the default insertion point (technique 2 only).
 * The locator string "technique:offset:length[:obj]" is written to
 * locator_out (locator_cap bytes including the terminator). */
PDFREV_API pdfrev_status pdfrev_hide(const pdfrev_doc* doc, const uint8_t* payload,
                                     size_t payload_len, int technique, int64_t at,
                                     pdfrev_buf* out_pdf, char* locator_out,
                                     size_t locator_cap, pdfrev_buf* out_json);

PDFREV_API pdfrev_status pdfrev_extract_hidden(const pdfrev_doc* doc, const char* locator,
                                               pdfrev_buf* out_payload);

/* Builds a deterministic test PDF from a JSON description; see README for
 * the accepted fields. Returns the file plus a JSON manifest. */
PDFREV_API pdfrev_status pdfrev_fixture_build(const char* spec_json, size_t spec_len,
                                              pdfrev_buf* out_pdf,
                                              pdfrev_buf* out_manifest_json);

#ifdef __cplusplus
}
#endif

#endif /* PDFREV_H */
