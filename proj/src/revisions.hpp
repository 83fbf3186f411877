#ifndef PDFREV_REVISIONS_HPP
#define PDFREV_REVISIONS_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bytes.hpp"
#include "cos.hpp"

namespace pdfrev {

struct XrefEntry {
    uint32_t object_number = 0;
    uint64_t offset = 0; // byte offset when in_use; next-free head when free
    uint32_t generation = 0;
    bool in_use = false;

    // type-2 entries from cross-reference streams: object lives in an object stream
    bool compressed = false;
    uint32_t container = 0;
    uint32_t index_in_container = 0;

    // physical position of the classic-table entry line (20 bytes); length 0 otherwise
    ByteSpan entry_span{};
};

struct XrefSubsection {
    uint32_t first_object_number = 0;
    std::vector<XrefEntry> entries;
};

struct XrefSection {
    std::vector<XrefSubsection> subsections;
    ByteSpan span{};       // `xref` keyword through last entry (or the xref stream object)
    bool is_stream = false;
};

struct Trailer {
    CosDict dict;
    uint64_t startxref_value = 0;
    ByteSpan span{};      // `trailer` keyword through dict end; xref object span for streams
    ByteSpan prev_span{}; // span of the /Prev integer token, when present (classic only)
};

struct Revision {
    size_t index = 0; // 0 = original
    XrefSection xref;
    Trailer trailer;
    ByteSpan block_span{};
    uint64_t cumulative_end = 0;      // file length as of this revision
    ByteSpan startxref_value_span{};  // integer token after this block's `startxref`
    ByteSpan startxref_block_span{};  // `startxref` keyword through the value
    ByteSpan eof_span{};              // `%%EOF` marker including its EOL
    uint64_t xref_offset = 0;
};

struct Document {
    Bytes bytes;
    std::string header_version;
    std::vector<Revision> revisions; // oldest first; empty only for carved documents
    std::vector<std::string> anomalies;

    // resolution view per revision: object number -> winning entry
    std::vector<std::map<uint32_t, XrefEntry>> views;

    FileImage image() const { return FileImage(bytes.data(), bytes.size()); }
    size_t revision_count() const { return revisions.size(); }
};

struct Resolved {
    CosValue value;
    ByteSpan span;
    ObjectId id;
};

uint64_t parse_startxref(FileImage bytes);

std::pair<XrefSection, Trailer> parse_xref_at(FileImage bytes, uint64_t offset,
                                              std::vector<std::string>* warnings = nullptr);

struct BuildOptions {
    uint64_t max_file_size = 1ull << 30;
    bool audit = true; // verify every reachable in-use entry points at a matching header
};

Document build_revision_chain(Bytes bytes, const BuildOptions& opts = {});

// Structure-only document for files without a usable startxref chain.
Document carve_document(Bytes bytes);

const std::map<uint32_t, XrefEntry>& resolution_view(const Document& doc, size_t rev);

Resolved resolve(const Document& doc, size_t rev, ObjectId id);

Resolver make_resolver(const Document& doc, size_t rev);

// Present keys among Title/Author/Subject/Creator/Producer/CreationDate/ModDate as UTF-8.
std::map<std::string, std::string> extract_info(const Document& doc, size_t rev);

} // namespace pdfrev

#endif
