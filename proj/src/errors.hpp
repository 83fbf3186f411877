#ifndef PDFREV_ERRORS_HPP
#define PDFREV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pdfrev {

enum class ErrorCode {
    MalformedToken,
    IdMismatch,
    StreamLengthUnresolvable,
    NoStartxref,
    NotAnXref,
    TruncatedTable,
    UnsupportedXrefStreamField,
    PrevCycle,
    EncryptedDocument,
    FreeObject,
    UnknownObject,
    OffsetMismatch,
    CorruptStream,
    UnknownFilter,
    BrokenPageTree,
    MalformedContent,
    MalformedCMap,
    NotAppendOnly,
    EntryNotRewritable,
    NotAppendOnlyTarget,
    NoSafeInsertionPoint,
    LocatorOutOfRange,
    BadEditScript,
    UnsupportedImageFormat,
    FileTooLarge,
    IoError,
    BadArgument,
};

const char* error_code_name(ErrorCode code);

class PdfError : public std::runtime_error {
public:
    PdfError(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace pdfrev

#endif
