#include "recover.hpp"

#include <cstdio>
#include <cstring>

#include "serialize.hpp"

namespace pdfrev {

namespace {

std::string entry_text(uint64_t offset, uint32_t gen, bool in_use) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%010llu %05u %c", static_cast<unsigned long long>(offset),
                  gen, in_use ? 'n' : 'f');
    return buf;
}

} // namespace

Bytes recover_by_truncation(const Document& doc, size_t rev) {
    if (rev >= doc.revision_count())
        throw PdfError(ErrorCode::BadArgument, "revision index out of range");
    for (size_t r = 0; r <= rev; ++r) {
        if (doc.revisions[r].block_span.length == 0)
            throw PdfError(ErrorCode::NotAppendOnly,
                           "revision " + std::to_string(r) +
                               " has no byte block of its own; file is not append-only");
    }
    uint64_t end = doc.revisions[rev].cumulative_end;
    return Bytes(doc.bytes.begin(), doc.bytes.begin() + end);
}

Bytes recover_by_offset_rewrite(const Document& doc, size_t rev,
                                std::vector<std::string>* anomalies) {
    if (rev >= doc.revision_count())
        throw PdfError(ErrorCode::BadArgument, "revision index out of range");
    Bytes out = doc.bytes;
    size_t last = doc.revision_count() - 1;
    if (rev == last) return out;

    const auto& final_view = resolution_view(doc, last);
    const auto& target_view = resolution_view(doc, rev);

    auto not_rewritable = [](const std::string& msg) -> void {
        throw PdfError(ErrorCode::EntryNotRewritable, msg);
    };

    for (const auto& [num, fe] : final_view) {
        auto tit = target_view.find(num);
        bool mark_free = tit == target_view.end();
        const XrefEntry* te = mark_free ? nullptr : &tit->second;
        if (te && te->in_use == fe.in_use && te->offset == fe.offset &&
            te->generation == fe.generation && te->compressed == fe.compressed)
            continue; // resolution unchanged between the two revisions

        if (fe.entry_span.length == 0)
            not_rewritable("object " + std::to_string(num) +
                           "'s winning entry lives in a cross-reference stream; use truncation");
        if (fe.entry_span.length != 18)
            not_rewritable("object " + std::to_string(num) +
                           "'s xref entry is not in the fixed 20-byte format");
        if (te && te->compressed)
            not_rewritable("object " + std::to_string(num) +
                           " is stored in an object stream in the target revision");

        std::string text = mark_free ? entry_text(0, 65535, false)
                                     : entry_text(te->offset, te->generation, te->in_use);
        std::memcpy(out.data() + fe.entry_span.start, text.data(), 18);
    }

    // trailer /Root redirect when the catalog reference itself changed
    const CosDict& ft = doc.revisions[last].trailer.dict;
    const CosDict& tt = doc.revisions[rev].trailer.dict;
    auto fr = ft.find("Root");
    auto tr = tt.find("Root");
    if (fr != ft.end() && tr != tt.end() && fr->second.is_reference() &&
        tr->second.is_reference() && !(fr->second == tr->second)) {
        ByteSpan tspan = doc.revisions[last].trailer.span;
        bool done = false;
        FileImage img(out.data(), out.size());
        for (uint64_t p = tspan.start; p + 5 <= tspan.end(); ++p) {
            if (out[p] == '/' && std::memcmp(out.data() + p + 1, "Root", 4) == 0 &&
                (p + 5 >= out.size() || !is_regular_char(out[p + 5]))) {
                LexResult old_ref = lex_value(img, p + 5);
                std::string text = serialize_value(tr->second);
                if (text.size() <= old_ref.span.length) {
                    text.resize(old_ref.span.length, ' ');
                    std::memcpy(out.data() + old_ref.span.start, text.data(), text.size());
                    done = true;
                }
                break;
            }
        }
        if (!done && anomalies)
            anomalies->push_back("trailer /Root changed between revisions but could not be "
                                 "rewritten in place");
    }
    return out;
}

} // namespace pdfrev
