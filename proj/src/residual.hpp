#ifndef PDFREV_RESIDUAL_HPP
#define PDFREV_RESIDUAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "revisions.hpp"

namespace pdfrev {

enum class ShadowKind { ContentStream, Page, Resource, Catalog, Other };

struct ShadowObject {
    uint32_t object_number = 0;
    size_t superseded_revision = 0;
    size_t superseding_revision = 0;
    ByteSpan old_span{};
    ByteSpan new_span{}; // zero-length when the object was freed
    ShadowKind kind = ShadowKind::Other;
};

std::vector<ShadowObject> shadow_objects(const Document& doc);

enum class SpanKind {
    Header,
    ObjectBody,
    XrefTable,
    Trailer,
    StartxrefBlock,
    EofMarker,
    Whitespace,
    Unaccounted,
};

const char* span_kind_name(SpanKind kind);

struct SpanClass {
    ByteSpan span{};
    SpanKind kind = SpanKind::Unaccounted;
    std::optional<ObjectId> owner_object;
    std::optional<size_t> owner_revision;
};

struct CoverageMap {
    std::vector<SpanClass> spans; // disjoint, sorted, union = [0, file length)
    uint64_t unaccounted_bytes = 0;
};

struct CoverageOptions {
    // whitespace runs longer than this are hiding-channel candidates
    uint64_t max_whitespace_run = 16;
};

CoverageMap coverage_map(const Document& doc, const CoverageOptions& opts = {});

struct RevisionDiff {
    size_t from_rev = 0;
    size_t to_rev = 0;
    std::vector<size_t> pages_changed;
    std::map<size_t, std::string> text_before;
    std::map<size_t, std::string> text_after;
    std::vector<ObjectId> objects_added;
    std::vector<ObjectId> objects_superseded;
    std::vector<ObjectId> objects_freed;
};

RevisionDiff diff_revisions(const Document& doc, size_t i, size_t j);

} // namespace pdfrev

#endif
