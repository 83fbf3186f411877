#include "stego.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>

#include "filters.hpp"
#include "pdfwrite.hpp"
#include "residual.hpp"

namespace pdfrev {

namespace {

uint32_t next_object_number(const Document& doc) {
    size_t last = doc.revision_count() - 1;
    uint32_t next = 0;
    const CosDict& trailer = doc.revisions[last].trailer.dict;
    if (auto it = trailer.find("Size"); it != trailer.end() && it->second.is_integer())
        next = static_cast<uint32_t>(it->second.as_integer());
    for (const auto& [num, e] : resolution_view(doc, last)) next = std::max(next, num + 1);
    return next;
}

CosDict update_trailer(const Document& doc, uint64_t size) {
    size_t last = doc.revision_count() - 1;
    const CosDict& old = doc.revisions[last].trailer.dict;
    CosDict t;
    if (auto it = old.find("Root"); it != old.end()) t["Root"] = it->second;
    if (auto it = old.find("Info"); it != old.end()) t["Info"] = it->second;
    t["Prev"] = CosValue::integer(static_cast<int64_t>(doc.revisions[last].xref_offset));
    t["Size"] = CosValue::integer(static_cast<int64_t>(size));
    return t;
}

// Appends one update defining `num` with the given stream; returns the new file.
Bytes append_stream_update(const Bytes& base, uint32_t num, CosDict dict, const Bytes& encoded,
                           ByteSpan* object_span) {
    Document doc = build_revision_chain(Bytes(base));
    bool stream_form = doc.revisions.back().xref.is_stream;
    uint32_t next = std::max(next_object_number(doc), num + 1);

    Emitter em(Bytes(base), doc.revision_count());
    if (em.size() > 0 && base.back() != '\n') em.raw("\n");
    std::vector<ObjectRecord> records;
    em.stream_object(num, std::move(dict), encoded, {}, "carrier", records);
    if (object_span) *object_span = records.back().span;

    XrefPlan entries;
    entries[num] = {em.offsets().at(num), true};
    uint64_t xref_off;
    if (stream_form) {
        uint32_t xref_num = next++;
        xref_off = emit_xref_stream(em, xref_num, entries, update_trailer(doc, next), records);
    } else {
        xref_off = emit_classic_xref(em, entries, update_trailer(doc, next));
    }
    emit_file_end(em, xref_off);
    return em.take();
}

unsigned digits_of(uint64_t v) {
    unsigned n = 1;
    while (v >= 10) {
        v /= 10;
        ++n;
    }
    return n;
}

std::string zero_padded(uint64_t v, unsigned width) {
    std::string s = std::to_string(v);
    if (s.size() < width) s.insert(0, width - s.size(), '0');
    return s;
}

// A decimal byte-offset token in the file whose value must track the insertion shift.
struct OffsetSite {
    ByteSpan span{};
    uint64_t value = 0;
    bool fixed_width = false; // 10-digit xref entry field
    uint64_t growth = 0;      // extra digits the rewritten token needs
};

uint64_t parse_decimal(FileImage img, ByteSpan span) {
    uint64_t v = 0;
    for (uint64_t p = span.start; p < span.end() && p < img.size(); ++p) {
        if (img[p] < '0' || img[p] > '9')
            throw PdfError(ErrorCode::NoSafeInsertionPoint, "offset token is not numeric");
        v = v * 10 + (img[p] - '0');
    }
    return v;
}

} // namespace

std::string format_locator(const PayloadLocator& loc) {
    std::string s = std::to_string(static_cast<int>(loc.technique)) + ":" +
                    std::to_string(loc.span.start) + ":" + std::to_string(loc.span.length);
    if (loc.object_id) s += ":" + std::to_string(loc.object_id->number);
    return s;
}

PayloadLocator parse_locator(const std::string& text) {
    unsigned long long tech = 0, off = 0, len = 0, obj = 0;
    int fields = std::sscanf(text.c_str(), "%llu:%llu:%llu:%llu", &tech, &off, &len, &obj);
    if (fields < 3 || (tech != 1 && tech != 2))
        throw PdfError(ErrorCode::BadArgument, "locator must be technique:offset:length[:obj]");
    PayloadLocator loc;
    loc.technique = static_cast<HideTechnique>(tech);
    loc.span = {off, len};
    if (fields == 4) loc.object_id = ObjectId{static_cast<uint32_t>(obj), 0};
    return loc;
}

HideResult hide_superseded(const Bytes& input, const Bytes& payload) {
    Document doc = build_revision_chain(Bytes(input));
    uint32_t num = next_object_number(doc);

    // update A: the carrier, disguised as a compressed metadata stream
    CosDict carrier;
    carrier["Type"] = CosValue::name("Metadata");
    carrier["Subtype"] = CosValue::name("XML");
    carrier["Filter"] = CosValue::name("FlateDecode");
    ByteSpan carrier_span{};
    Bytes with_carrier =
        append_stream_update(input, num, std::move(carrier), flate_encode(payload), &carrier_span);

    // update B: a benign empty stream supersedes the carrier's xref entry
    CosDict benign;
    benign["Type"] = CosValue::name("Metadata");
    benign["Subtype"] = CosValue::name("XML");
    Bytes out = append_stream_update(with_carrier, num, std::move(benign), {}, nullptr);

    // normalize the span to the parser's view of the object so detection can match it
    ParseOptions opts;
    opts.carve = true;
    carrier_span =
        parse_indirect_object(FileImage(out.data(), out.size()), carrier_span.start, opts).span;

    HideResult result;
    result.locator.technique = HideTechnique::SupersededStream;
    result.locator.span = carrier_span;
    result.locator.object_id = ObjectId{num, 0};
    result.bytes = std::move(out);
    return result;
}

HideResult hide_in_slack(const Bytes& input, const Bytes& payload, std::optional<uint64_t> at) {
    if (payload.empty()) {
        HideResult result;
        result.bytes = input;
        result.locator.technique = HideTechnique::SlackInjection;
        result.locator.span = {at.value_or(0), 0};
        return result;
    }

    Document doc = build_revision_chain(Bytes(input));
    FileImage img = doc.image();
    for (const Revision& rev : doc.revisions)
        if (rev.xref.is_stream)
            throw PdfError(ErrorCode::NoSafeInsertionPoint,
                           "cross-reference streams carry binary offsets; only classic tables "
                           "can be rewritten in place");
    if (doc.revision_count() < 2)
        throw PdfError(ErrorCode::NoSafeInsertionPoint,
                       "a single-revision file has no non-final block to hide in");

    uint64_t final_block = doc.revisions.back().block_span.start;

    // Safe insertion points start an object body (reached by byte offset, so a
    // foreign byte on its left cannot confuse the lexer) and have whitespace
    // behind them so the previous structure's closing keyword stays bounded.
    // Keyword-led structures (xref, trailer, startxref) must keep their left
    // delimiter and are never safe to splice against.
    std::vector<uint64_t> safe;
    for (const SpanClass& sc : coverage_map(doc).spans)
        if (sc.kind == SpanKind::ObjectBody && sc.span.start > 0 &&
            sc.span.start < final_block && is_pdf_whitespace(img[sc.span.start - 1]))
            safe.push_back(sc.span.start);

    uint64_t insert_at;
    if (at) {
        insert_at = *at;
        if (insert_at == 0 || insert_at >= final_block)
            throw PdfError(ErrorCode::NoSafeInsertionPoint,
                           "insertion point must lie inside a non-final block");
        if (std::find(safe.begin(), safe.end(), insert_at) == safe.end())
            throw PdfError(ErrorCode::NoSafeInsertionPoint,
                           "insertion point splits a file structure");
    } else {
        if (safe.empty())
            throw PdfError(ErrorCode::NoSafeInsertionPoint,
                           "no object boundary available in a non-final block");
        // prefer the slack right after the last superseded object in the oldest block
        uint64_t after_shadows = 0;
        for (const ShadowObject& s : shadow_objects(doc))
            if (s.superseded_revision == 0 && s.old_span.length > 0)
                after_shadows = std::max(after_shadows, s.old_span.end());
        insert_at = safe.front();
        for (uint64_t p : safe)
            if (p >= after_shadows) {
                insert_at = p;
                break;
            }
    }

    // every byte-offset token in the file: xref entry fields, /Prev values, startxref values
    std::vector<OffsetSite> sites;
    for (const Revision& rev : doc.revisions) {
        for (const auto& sub : rev.xref.subsections) {
            for (const XrefEntry& e : sub.entries) {
                if (!e.in_use || e.compressed) continue;
                if (e.entry_span.length < 18)
                    throw PdfError(ErrorCode::NoSafeInsertionPoint,
                                   "nonstandard xref entry cannot be rewritten");
                sites.push_back({ByteSpan{e.entry_span.start, 10}, e.offset, true, 0});
            }
        }
        if (rev.trailer.prev_span.length > 0)
            sites.push_back({rev.trailer.prev_span,
                             parse_decimal(img, rev.trailer.prev_span), false, 0});
        if (rev.startxref_value_span.length > 0)
            sites.push_back({rev.startxref_value_span,
                             parse_decimal(img, rev.startxref_value_span), false, 0});
    }
    std::sort(sites.begin(), sites.end(),
              [](const OffsetSite& a, const OffsetSite& b) { return a.span.start < b.span.start; });
    for (const OffsetSite& s : sites)
        if (insert_at > s.span.start && insert_at < s.span.end())
            throw PdfError(ErrorCode::NoSafeInsertionPoint,
                           "insertion point splits an offset token");

    const uint64_t len = payload.size();
    auto new_pos = [&](uint64_t p) {
        uint64_t np = p + (p >= insert_at ? len : 0);
        for (const OffsetSite& s : sites) {
            if (s.span.start >= p) break;
            np += s.growth;
        }
        return np;
    };

    // token widths can grow, which shifts later offsets again: iterate to a fixed point
    for (int pass = 0; pass < 16; ++pass) {
        bool changed = false;
        for (OffsetSite& s : sites) {
            uint64_t nv = new_pos(s.value);
            uint64_t growth;
            if (s.fixed_width) {
                if (digits_of(nv) > 10)
                    throw PdfError(ErrorCode::FileTooLarge, "rewritten offset exceeds 10 digits");
                growth = 0;
            } else {
                unsigned need = digits_of(nv);
                growth = need > s.span.length ? need - s.span.length : 0;
            }
            if (growth != s.growth) {
                s.growth = growth;
                changed = true;
            }
        }
        if (!changed) break;
        if (pass == 15)
            throw PdfError(ErrorCode::NoSafeInsertionPoint, "offset fix-up did not converge");
    }

    Bytes out;
    out.reserve(input.size() + len + 32);
    uint64_t pos = 0;
    uint64_t out_insert = 0;
    bool inserted = false;
    auto copy_to = [&](uint64_t end) {
        if (!inserted && insert_at >= pos && insert_at <= end) {
            out.insert(out.end(), input.begin() + pos, input.begin() + insert_at);
            out_insert = out.size();
            out.insert(out.end(), payload.begin(), payload.end());
            out.insert(out.end(), input.begin() + insert_at, input.begin() + end);
            inserted = true;
        } else {
            out.insert(out.end(), input.begin() + pos, input.begin() + end);
        }
        pos = end;
    };
    for (const OffsetSite& s : sites) {
        copy_to(s.span.start);
        uint64_t nv = new_pos(s.value);
        unsigned width = static_cast<unsigned>(s.span.length + s.growth);
        std::string token = zero_padded(nv, width);
        out.insert(out.end(), token.begin(), token.end());
        pos = s.span.end();
    }
    copy_to(input.size());

    // the spliced file must still parse into the same revision chain
    Document check = build_revision_chain(Bytes(out));
    if (check.revision_count() != doc.revision_count())
        throw PdfError(ErrorCode::NoSafeInsertionPoint,
                       "offset fix-up produced an inconsistent revision chain");

    HideResult result;
    result.bytes = std::move(out);
    result.locator.technique = HideTechnique::SlackInjection;
    result.locator.span = {out_insert, len};
    return result;
}

Bytes extract_payload(const Bytes& input, const PayloadLocator& locator) {
    if (locator.span.end() > input.size())
        throw PdfError(ErrorCode::LocatorOutOfRange,
                       "locator spans past the end of the file (" +
                           std::to_string(locator.span.end()) + " > " +
                           std::to_string(input.size()) + ")");
    if (locator.technique == HideTechnique::SlackInjection)
        return Bytes(input.begin() + locator.span.start, input.begin() + locator.span.end());

    FileImage img(input.data(), input.size());
    ParseOptions opts;
    opts.carve = true;
    IndirectObject obj = parse_indirect_object(img, locator.span.start, opts);
    if (!obj.value.is_stream())
        throw PdfError(ErrorCode::LocatorOutOfRange, "locator does not address a stream object");
    DecodedStream decoded = decode_stream(obj.value.as_stream(), img, Resolver());
    return decoded.data;
}

double shannon_entropy(FileImage bytes) {
    if (bytes.empty()) return 0.0;
    std::array<uint64_t, 256> counts{};
    for (uint8_t b : bytes) ++counts[b];
    double h = 0.0;
    double n = static_cast<double>(bytes.size());
    for (uint64_t c : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

std::vector<HiddenCandidate> detect_hidden(const Document& doc) {
    FileImage img = doc.image();
    std::vector<HiddenCandidate> out;

    for (const SpanClass& sc : coverage_map(doc).spans) {
        if (sc.kind != SpanKind::Unaccounted || sc.span.length < 16) continue;
        HiddenCandidate c;
        c.kind = HiddenKind::UnaccountedSpan;
        c.span = sc.span;
        c.entropy = shannon_entropy(img.subspan(sc.span.start, sc.span.length));
        c.note = "bytes not claimed by any file structure";
        out.push_back(c);
    }
    if (doc.revisions.empty()) return out;

    // object numbers reachable from some revision's trailer graph
    std::set<uint32_t> referenced;
    for (size_t r = 0; r < doc.revision_count(); ++r) {
        std::vector<ObjectId> stack;
        std::set<uint32_t> seen;
        std::function<void(const CosValue&)> scan_refs = [&](const CosValue& v) {
            if (v.is_reference()) {
                stack.push_back(v.as_reference());
            } else if (v.is_array()) {
                for (const CosValue& e : v.as_array()) scan_refs(e);
            } else if (v.is_dict()) {
                for (const auto& [k, e] : v.as_dict()) scan_refs(e);
            } else if (v.is_stream()) {
                for (const auto& [k, e] : v.as_stream().dict) scan_refs(e);
            }
        };
        scan_refs(CosValue::dict(doc.revisions[r].trailer.dict));
        while (!stack.empty()) {
            ObjectId id = stack.back();
            stack.pop_back();
            if (!seen.insert(id.number).second) continue;
            referenced.insert(id.number);
            try {
                scan_refs(resolve(doc, r, id).value);
            } catch (const PdfError&) {
            }
        }
    }

    // stream objects present in the tables but referenced by no revision's graph
    std::set<uint32_t> numbers;
    std::set<uint64_t> entry_offsets;
    for (const Revision& rev : doc.revisions)
        for (const auto& sub : rev.xref.subsections)
            for (const XrefEntry& e : sub.entries) {
                if (e.object_number != 0) numbers.insert(e.object_number);
                if (e.in_use && !e.compressed) entry_offsets.insert(e.offset);
            }
    for (uint32_t num : numbers) {
        if (referenced.count(num)) continue;
        // earliest winning definition is the one the payload lives in
        uint64_t first_off = UINT64_MAX;
        for (const auto& view : doc.views) {
            auto it = view.find(num);
            if (it != view.end() && it->second.in_use && !it->second.compressed)
                first_off = std::min(first_off, it->second.offset);
        }
        if (first_off == UINT64_MAX) continue;
        try {
            ParseOptions opts;
            opts.carve = true;
            IndirectObject obj = parse_indirect_object(img, first_off, opts);
            if (!obj.value.is_stream()) continue;
            const CosValue* type = obj.value.dict_get("Type");
            if (type && type->is_name() &&
                (type->as_name() == "XRef" || type->as_name() == "ObjStm"))
                continue; // structural streams are never referenced from the graph
            HiddenCandidate c;
            c.kind = HiddenKind::UnreferencedStream;
            c.span = obj.span;
            c.object_id = obj.id;
            c.entropy = shannon_entropy(img.subspan(obj.span.start, obj.span.length));
            c.note = "stream object unreachable from every revision's document graph";
            out.push_back(c);
        } catch (const PdfError&) {
        }
    }

    // carved objects no table accounts for
    for (const ScanHit& hit : scan_all_objects(img).objects) {
        if (entry_offsets.count(hit.span.start)) continue;
        HiddenCandidate c;
        c.kind = HiddenKind::OrphanObject;
        c.span = hit.span;
        c.object_id = hit.id;
        c.entropy = shannon_entropy(img.subspan(hit.span.start, hit.span.length));
        c.note = "object body absent from every cross-reference table";
        out.push_back(c);
    }

    std::sort(out.begin(), out.end(), [](const HiddenCandidate& a, const HiddenCandidate& b) {
        return a.span.start != b.span.start ? a.span.start < b.span.start : a.kind < b.kind;
    });
    return out;
}

} // namespace pdfrev
