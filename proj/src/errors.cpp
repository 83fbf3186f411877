#include "errors.hpp"

namespace pdfrev {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedToken: return "MalformedToken";
        case ErrorCode::IdMismatch: return "IdMismatch";
        case ErrorCode::StreamLengthUnresolvable: return "StreamLengthUnresolvable";
        case ErrorCode::NoStartxref: return "NoStartxref";
        case ErrorCode::NotAnXref: return "NotAnXref";
        case ErrorCode::TruncatedTable: return "TruncatedTable";
        case ErrorCode::UnsupportedXrefStreamField: return "UnsupportedXrefStreamField";
        case ErrorCode::PrevCycle: return "PrevCycle";
        case ErrorCode::EncryptedDocument: return "EncryptedDocument";
        case ErrorCode::FreeObject: return "FreeObject";
        case ErrorCode::UnknownObject: return "UnknownObject";
        case ErrorCode::OffsetMismatch: return "OffsetMismatch";
        case ErrorCode::CorruptStream: return "CorruptStream";
        case ErrorCode::UnknownFilter: return "UnknownFilter";
        case ErrorCode::BrokenPageTree: return "BrokenPageTree";
        case ErrorCode::MalformedContent: return "MalformedContent";
        case ErrorCode::MalformedCMap: return "MalformedCMap";
        case ErrorCode::NotAppendOnly: return "NotAppendOnly";
        case ErrorCode::EntryNotRewritable: return "EntryNotRewritable";
        case ErrorCode::NotAppendOnlyTarget: return "NotAppendOnlyTarget";
        case ErrorCode::NoSafeInsertionPoint: return "NoSafeInsertionPoint";
        case ErrorCode::LocatorOutOfRange: return "LocatorOutOfRange";
        case ErrorCode::BadEditScript: return "BadEditScript";
        case ErrorCode::UnsupportedImageFormat: return "UnsupportedImageFormat";
        case ErrorCode::FileTooLarge: return "FileTooLarge";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::BadArgument: return "BadArgument";
    }
    return "Unknown";
}

} // namespace pdfrev
