#include "residual.hpp"

#include <algorithm>
#include <set>

#include "extract.hpp"
#include "pagetree.hpp"

namespace pdfrev {

namespace {

bool same_target(const XrefEntry& a, const XrefEntry& b) {
    return a.in_use == b.in_use && a.offset == b.offset && a.generation == b.generation &&
           a.compressed == b.compressed && a.container == b.container &&
           a.index_in_container == b.index_in_container;
}

// Physical span of the object an entry points at; zero-length when unreadable.
ByteSpan span_of_entry(const Document& doc, const XrefEntry& e) {
    if (!e.in_use) return {};
    FileImage img = doc.image();
    try {
        if (e.compressed) {
            // the carrier is the container stream
            for (const auto& view : doc.views) {
                auto it = view.find(e.container);
                if (it != view.end() && it->second.in_use && !it->second.compressed) {
                    ParseOptions opts;
                    opts.carve = true;
                    return parse_indirect_object(img, it->second.offset, opts).span;
                }
            }
            return {};
        }
        ParseOptions opts;
        opts.carve = true;
        return parse_indirect_object(img, e.offset, opts).span;
    } catch (const PdfError&) {
        return {};
    }
}

ShadowKind kind_of_entry(const Document& doc, const XrefEntry& e) {
    if (!e.in_use) return ShadowKind::Other;
    try {
        CosValue v;
        if (e.compressed) return ShadowKind::Other;
        ParseOptions opts;
        opts.carve = true;
        v = parse_indirect_object(doc.image(), e.offset, opts).value;
        const CosValue* type = v.dict_get("Type");
        if (type && type->is_name()) {
            const std::string& t = type->as_name();
            if (t == "Page") return ShadowKind::Page;
            if (t == "Catalog") return ShadowKind::Catalog;
            if (t == "Font" || t == "XObject" || t == "ExtGState" || t == "Pattern")
                return ShadowKind::Resource;
        }
        if (v.is_stream()) return ShadowKind::ContentStream;
    } catch (const PdfError&) {
    }
    return ShadowKind::Other;
}

} // namespace

std::vector<ShadowObject> shadow_objects(const Document& doc) {
    // per object number: definition events in revision order
    std::map<uint32_t, std::vector<std::pair<size_t, const XrefEntry*>>> events;
    for (const Revision& rev : doc.revisions)
        for (const auto& sub : rev.xref.subsections)
            for (const XrefEntry& e : sub.entries)
                events[e.object_number].push_back({rev.index, &e});

    std::vector<ShadowObject> out;
    for (const auto& [num, defs] : events) {
        if (num == 0) continue;
        for (size_t k = 0; k + 1 < defs.size(); ++k) {
            const XrefEntry& old_e = *defs[k].second;
            const XrefEntry& new_e = *defs[k + 1].second;
            if (!old_e.in_use) continue;
            if (same_target(old_e, new_e)) continue;
            ShadowObject shadow;
            shadow.object_number = num;
            shadow.superseded_revision = defs[k].first;
            shadow.superseding_revision = defs[k + 1].first;
            shadow.old_span = span_of_entry(doc, old_e);
            shadow.new_span = span_of_entry(doc, new_e);
            shadow.kind = kind_of_entry(doc, old_e);
            out.push_back(shadow);
        }
    }
    return out;
}

const char* span_kind_name(SpanKind kind) {
    switch (kind) {
        case SpanKind::Header: return "header";
        case SpanKind::ObjectBody: return "object";
        case SpanKind::XrefTable: return "xref";
        case SpanKind::Trailer: return "trailer";
        case SpanKind::StartxrefBlock: return "startxref";
        case SpanKind::EofMarker: return "eof";
        case SpanKind::Whitespace: return "whitespace";
        case SpanKind::Unaccounted: return "unaccounted";
    }
    return "unaccounted";
}

CoverageMap coverage_map(const Document& doc, const CoverageOptions& opts) {
    FileImage img = doc.image();
    std::vector<SpanClass> classified;

    if (img.size() >= 5 && img[0] == '%') {
        uint64_t end = 0;
        while (end < img.size() && img[end] != '\n' && img[end] != '\r') ++end;
        if (end < img.size() && img[end] == '\r') ++end;
        if (end < img.size() && img[end] == '\n') ++end;
        classified.push_back({ByteSpan{0, end}, SpanKind::Header, {}, {}});
    }

    std::set<uint64_t> object_offsets;
    for (const Revision& rev : doc.revisions) {
        classified.push_back({rev.xref.span,
                              rev.xref.is_stream ? SpanKind::XrefTable : SpanKind::XrefTable,
                              {}, rev.index});
        if (!rev.xref.is_stream && rev.trailer.span.length > 0)
            classified.push_back({rev.trailer.span, SpanKind::Trailer, {}, rev.index});
        if (rev.startxref_block_span.length > 0)
            classified.push_back(
                {rev.startxref_block_span, SpanKind::StartxrefBlock, {}, rev.index});
        if (rev.eof_span.length > 0)
            classified.push_back({rev.eof_span, SpanKind::EofMarker, {}, rev.index});

        for (const auto& sub : rev.xref.subsections) {
            for (const XrefEntry& e : sub.entries) {
                if (!e.in_use || e.compressed || e.object_number == 0) continue;
                if (!object_offsets.insert(e.offset).second) continue;
                try {
                    ParseOptions popts;
                    popts.carve = true;
                    IndirectObject obj = parse_indirect_object(img, e.offset, popts);
                    classified.push_back({obj.span, SpanKind::ObjectBody, obj.id, rev.index});
                } catch (const PdfError&) {
                }
            }
        }
    }

    if (doc.revisions.empty()) {
        // carving-only coverage
        for (const ScanHit& hit : scan_all_objects(img).objects)
            classified.push_back({hit.span, SpanKind::ObjectBody, hit.id, {}});
    }

    std::sort(classified.begin(), classified.end(),
              [](const SpanClass& a, const SpanClass& b) {
                  return a.span.start != b.span.start ? a.span.start < b.span.start
                                                      : a.span.length > b.span.length;
              });

    CoverageMap map;
    uint64_t pos = 0;
    auto add_gap = [&](uint64_t from, uint64_t to) {
        if (to <= from) return;
        uint64_t len = to - from;
        bool all_ws = true;
        for (uint64_t p = from; p < to; ++p)
            if (!is_pdf_whitespace(img[p])) {
                all_ws = false;
                break;
            }
        if (all_ws) {
            SpanKind kind = len <= opts.max_whitespace_run ? SpanKind::Whitespace
                                                           : SpanKind::Unaccounted;
            map.spans.push_back({ByteSpan{from, len}, kind, {}, {}});
            if (kind == SpanKind::Unaccounted) map.unaccounted_bytes += len;
            return;
        }
        // split leading/trailing short whitespace runs off an unaccounted gap
        uint64_t lead = 0;
        while (lead < len && is_pdf_whitespace(img[from + lead])) ++lead;
        if (lead > opts.max_whitespace_run) lead = 0;
        uint64_t tail = 0;
        while (tail < len - lead && is_pdf_whitespace(img[to - 1 - tail])) ++tail;
        if (tail > opts.max_whitespace_run) tail = 0;
        if (lead > 0)
            map.spans.push_back({ByteSpan{from, lead}, SpanKind::Whitespace, {}, {}});
        uint64_t mid = len - lead - tail;
        map.spans.push_back({ByteSpan{from + lead, mid}, SpanKind::Unaccounted, {}, {}});
        map.unaccounted_bytes += mid;
        if (tail > 0)
            map.spans.push_back({ByteSpan{to - tail, tail}, SpanKind::Whitespace, {}, {}});
    };

    for (const SpanClass& sc : classified) {
        uint64_t start = sc.span.start;
        uint64_t end = std::min<uint64_t>(sc.span.end(), img.size());
        if (start >= img.size() || end <= pos) continue;
        if (start > pos) add_gap(pos, start);
        uint64_t clipped = std::max(start, pos);
        if (end > clipped) {
            SpanClass clipped_sc = sc;
            clipped_sc.span = ByteSpan{clipped, end - clipped};
            map.spans.push_back(clipped_sc);
            pos = end;
        }
    }
    if (pos < img.size()) add_gap(pos, img.size());
    return map;
}

RevisionDiff diff_revisions(const Document& doc, size_t i, size_t j) {
    if (!(i < j && j < doc.revision_count()))
        throw PdfError(ErrorCode::BadArgument,
                       "diff requires from < to < revision count (got " + std::to_string(i) +
                           ", " + std::to_string(j) + ")");
    RevisionDiff diff;
    diff.from_rev = i;
    diff.to_rev = j;

    std::vector<PageRef> before = pages(doc, i);
    std::vector<PageRef> after = pages(doc, j);
    size_t max_pages = std::max(before.size(), after.size());
    std::set<size_t> changed;
    for (size_t p = 0; p < max_pages; ++p) {
        if (p >= before.size() || p >= after.size()) {
            changed.insert(p);
            continue;
        }
        Bytes a, b;
        try {
            a = content_program(doc, i, before[p]);
        } catch (const PdfError&) {
        }
        try {
            b = content_program(doc, j, after[p]);
        } catch (const PdfError&) {
        }
        if (a != b) changed.insert(p);
    }

    if (!changed.empty()) {
        std::vector<PageText> tb = extract_text(doc, i);
        std::vector<PageText> ta = extract_text(doc, j);
        for (size_t p : changed) {
            diff.pages_changed.push_back(p);
            if (p < tb.size()) diff.text_before[p] = tb[p].joined;
            if (p < ta.size()) diff.text_after[p] = ta[p].joined;
        }
    }

    // object-level sets from the xref sections of revisions i+1 .. j
    std::set<uint32_t> added, superseded, freed;
    for (size_t r = i + 1; r <= j; ++r) {
        const auto& prev_view = resolution_view(doc, r - 1);
        for (const auto& sub : doc.revisions[r].xref.subsections) {
            for (const XrefEntry& e : sub.entries) {
                if (e.object_number == 0) continue;
                auto pit = prev_view.find(e.object_number);
                bool existed = pit != prev_view.end() && pit->second.in_use;
                if (!e.in_use) {
                    if (existed) freed.insert(e.object_number);
                } else if (!existed) {
                    added.insert(e.object_number);
                } else if (!same_target(pit->second, e)) {
                    superseded.insert(e.object_number);
                }
            }
        }
    }
    for (uint32_t n : added) diff.objects_added.push_back({n, 0});
    for (uint32_t n : superseded) diff.objects_superseded.push_back({n, 0});
    for (uint32_t n : freed) diff.objects_freed.push_back({n, 0});
    return diff;
}

} // namespace pdfrev
