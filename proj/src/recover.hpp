#ifndef PDFREV_RECOVER_HPP
#define PDFREV_RECOVER_HPP

#include "revisions.hpp"

namespace pdfrev {

enum class RecoveryMethod { Truncate, OffsetRewrite };

// Drops every block after revision `rev`; byte-exact for append-only files.
Bytes recover_by_truncation(const Document& doc, size_t rev);

// Keeps the file size and redirects the final resolution view's xref entries
// to revision `rev`'s targets, in place.
Bytes recover_by_offset_rewrite(const Document& doc, size_t rev,
                                std::vector<std::string>* anomalies = nullptr);

} // namespace pdfrev

#endif
