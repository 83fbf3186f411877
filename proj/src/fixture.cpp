#include "fixture.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <set>

#include "filters.hpp"
#include "pagetree.hpp"
#include "pdfwrite.hpp"
#include "revisions.hpp"
#include "serialize.hpp"
#include "textcodec.hpp"

namespace pdfrev {

namespace {

constexpr const char* kBaseDate = "D:20200101120000Z";

[[noreturn]] void bad_script(const std::string& msg) {
    throw PdfError(ErrorCode::BadEditScript, msg);
}

std::string mod_date_for(size_t revision_index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "D:202001011200%02zuZ", revision_index % 60);
    return buf;
}

struct UnicodeFont {
    std::map<uint32_t, uint32_t> codes; // code point -> code
    std::vector<uint32_t> ordered;      // code -> code point, 1-based
};

UnicodeFont assign_unicode_codes(const PageSpec& page) {
    UnicodeFont font;
    for (const FixtureText& t : page.texts) {
        if (t.font != FixtureFont::IdentityUnicode) continue;
        for (uint32_t cp : utf8_to_codepoints(t.text)) {
            if (font.codes.emplace(cp, font.ordered.size() + 1).second)
                font.ordered.push_back(cp);
        }
    }
    return font;
}

std::string hex_code(uint32_t v, int digits) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%0*X", digits, v);
    return buf;
}

std::string utf16be_hex(uint32_t cp) {
    if (cp >= 0x10000) {
        uint32_t v = cp - 0x10000;
        return hex_code(0xD800 + (v >> 10), 4) + hex_code(0xDC00 + (v & 0x3FF), 4);
    }
    return hex_code(cp, 4);
}

Bytes build_tounicode_cmap(const UnicodeFont& font) {
    std::string s;
    s += "/CIDInit /ProcSet findresource begin\n12 dict begin\nbegincmap\n";
    s += "/CIDSystemInfo << /Registry (Fixture) /Ordering (Identity) /Supplement 0 >> def\n";
    s += "/CMapName /Fixture-Identity def\n/CMapType 2 def\n";
    s += "1 begincodespacerange\n<0000> <FFFF>\nendcodespacerange\n";
    s += std::to_string(font.ordered.size()) + " beginbfchar\n";
    for (size_t i = 0; i < font.ordered.size(); ++i)
        s += "<" + hex_code(static_cast<uint32_t>(i + 1), 4) + "> <" +
             utf16be_hex(font.ordered[i]) + ">\n";
    s += "endbfchar\nendcmap\nCMapName currentdict /CMap defineresource pop\nend\nend\n";
    return to_bytes(s);
}

Bytes winansi_encode(const std::string& utf8) {
    Bytes out;
    for (uint32_t cp : utf8_to_codepoints(utf8)) {
        uint8_t b = unicode_to_winansi(cp);
        out.push_back(b ? b : '?');
    }
    return out;
}

Bytes build_content_program(const PageSpec& page, const UnicodeFont& ufont) {
    std::string s;
    int y = 720;
    for (const FixtureText& t : page.texts) {
        if (t.font == FixtureFont::Latin) {
            s += "BT /F1 12 Tf 72 " + std::to_string(y) + " Td " +
                 escape_literal_string(winansi_encode(t.text)) + " Tj ET\n";
        } else {
            std::string hex;
            for (uint32_t cp : utf8_to_codepoints(t.text))
                hex += hex_code(ufont.codes.at(cp), 4);
            s += "BT /FU1 12 Tf 72 " + std::to_string(y) + " Td <" + hex + "> Tj ET\n";
        }
        y -= 40;
    }
    for (size_t j = 0; j < page.images.size(); ++j) {
        int iy = y - 120 * static_cast<int>(j + 1);
        s += "q 72 0 0 72 72 " + std::to_string(iy) + " cm /Im" + std::to_string(j) + " Do Q\n";
    }
    if (!s.empty()) s.pop_back();
    return to_bytes(s);
}

struct PageObjects {
    uint32_t page_num = 0;
    uint32_t content_num = 0;
};

// Emits a page's content, font, and image objects plus the page object itself.
PageObjects emit_page(Emitter& em, const PageSpec& page, uint32_t page_num, uint32_t content_num,
                      uint32_t& next_num, size_t page_idx, CosValue parent_ref,
                      const CosValue* media_box, bool compress,
                      std::vector<ObjectRecord>& records) {
    std::string tag = std::to_string(page_idx);
    bool has_latin = std::any_of(page.texts.begin(), page.texts.end(),
                                 [](const FixtureText& t) { return t.font == FixtureFont::Latin; });
    bool has_unicode = std::any_of(page.texts.begin(), page.texts.end(), [](const FixtureText& t) {
        return t.font == FixtureFont::IdentityUnicode;
    });

    UnicodeFont ufont = assign_unicode_codes(page);
    Bytes program = build_content_program(page, ufont);
    {
        CosDict dict;
        Bytes encoded = program;
        if (compress) {
            encoded = flate_encode(program);
            dict["Filter"] = CosValue::name("FlateDecode");
        }
        em.stream_object(content_num, std::move(dict), encoded, program, "content:" + tag,
                         records);
    }

    CosDict fonts;
    if (has_latin) {
        uint32_t lf = next_num++;
        CosDict d;
        d["Type"] = CosValue::name("Font");
        d["Subtype"] = CosValue::name("Type1");
        d["BaseFont"] = CosValue::name("Helvetica");
        d["Encoding"] = CosValue::name("WinAnsiEncoding");
        em.dict_object(lf, d, "font-latin:" + tag, records);
        fonts["F1"] = CosValue::reference({lf, 0});
    }
    if (has_unicode) {
        uint32_t uf = next_num++;
        uint32_t df = next_num++;
        uint32_t tu = next_num++;
        Bytes cmap = build_tounicode_cmap(ufont);
        CosDict cd;
        if (compress) {
            cd["Filter"] = CosValue::name("FlateDecode");
            em.stream_object(tu, std::move(cd), flate_encode(cmap), cmap, "tounicode:" + tag,
                             records);
        } else {
            em.stream_object(tu, std::move(cd), cmap, cmap, "tounicode:" + tag, records);
        }
        CosDict dd;
        dd["Type"] = CosValue::name("Font");
        dd["Subtype"] = CosValue::name("CIDFontType2");
        dd["BaseFont"] = CosValue::name("FixtureUnicode");
        CosDict csi;
        csi["Registry"] = CosValue::string(to_bytes("Adobe"));
        csi["Ordering"] = CosValue::string(to_bytes("Identity"));
        csi["Supplement"] = CosValue::integer(0);
        dd["CIDSystemInfo"] = CosValue::dict(csi);
        dd["CIDToGIDMap"] = CosValue::name("Identity");
        em.dict_object(df, dd, "font-descendant:" + tag, records);
        CosDict ud;
        ud["Type"] = CosValue::name("Font");
        ud["Subtype"] = CosValue::name("Type0");
        ud["BaseFont"] = CosValue::name("FixtureUnicode");
        ud["Encoding"] = CosValue::name("Identity-H");
        ud["DescendantFonts"] = CosValue::array({CosValue::reference({df, 0})});
        ud["ToUnicode"] = CosValue::reference({tu, 0});
        em.dict_object(uf, ud, "font-unicode:" + tag, records);
        fonts["FU1"] = CosValue::reference({uf, 0});
    }

    CosDict xobjects;
    for (size_t j = 0; j < page.images.size(); ++j) {
        const FixtureImage& im = page.images[j];
        uint32_t num = next_num++;
        CosDict d;
        d["Type"] = CosValue::name("XObject");
        d["Subtype"] = CosValue::name("Image");
        d["Width"] = CosValue::integer(im.width);
        d["Height"] = CosValue::integer(im.height);
        d["BitsPerComponent"] = CosValue::integer(8);
        d["ColorSpace"] = CosValue::name("DeviceRGB");
        Bytes encoded;
        if (im.format == FixtureImageFormat::Jpeg) {
            d["Filter"] = CosValue::name("DCTDecode");
            encoded = im.payload;
        } else if (im.format == FixtureImageFormat::RawPixmap) {
            if (im.payload.size() !=
                static_cast<size_t>(im.width) * static_cast<size_t>(im.height) * 3)
                throw PdfError(ErrorCode::UnsupportedImageFormat,
                               "raw pixmap payload size does not match width*height*3");
            d["Filter"] = CosValue::name("FlateDecode");
            encoded = flate_encode(im.payload);
        } else {
            throw PdfError(ErrorCode::UnsupportedImageFormat, "unsupported image format");
        }
        em.stream_object(num, std::move(d), encoded, im.payload,
                         "image:" + tag + "." + std::to_string(j), records);
        xobjects["Im" + std::to_string(j)] = CosValue::reference({num, 0});
    }

    CosDict resources;
    if (!fonts.empty()) resources["Font"] = CosValue::dict(fonts);
    if (!xobjects.empty()) resources["XObject"] = CosValue::dict(xobjects);

    CosDict pd;
    pd["Type"] = CosValue::name("Page");
    pd["Parent"] = parent_ref;
    pd["MediaBox"] = media_box ? *media_box
                               : CosValue::array({CosValue::integer(0), CosValue::integer(0),
                                                  CosValue::integer(612), CosValue::integer(792)});
    pd["Resources"] = CosValue::dict(resources);
    pd["Contents"] = CosValue::reference({content_num, 0});
    em.dict_object(page_num, pd, "page:" + tag, records);

    return {page_num, content_num};
}

CosDict info_dict_from(const std::map<std::string, std::string>& info) {
    CosDict d;
    for (const auto& [k, v] : info) d[k] = CosValue::string(to_bytes(v));
    return d;
}

} // namespace

std::string expected_text(const PageSpec& page) {
    std::string out;
    for (const FixtureText& t : page.texts) {
        if (!out.empty()) out += '\n';
        if (t.font == FixtureFont::Latin) {
            // round-trip through WinAnsi: unmappable characters become '?'
            for (uint32_t cp : utf8_to_codepoints(t.text)) {
                uint8_t b = unicode_to_winansi(cp);
                append_utf8(out, b ? winansi_to_unicode(b) : '?');
            }
        } else {
            out += t.text;
        }
    }
    return out;
}

FixtureFile write_pdf(const std::vector<PageSpec>& pages, const WriteOptions& opts) {
    FixtureFile file;
    Manifest& manifest = file.manifest;
    manifest.pages = pages;
    manifest.revision_count = 1;
    manifest.info = {{"Title", "Fixture Document"},
                     {"Producer", "pdfrev fixture writer"},
                     {"CreationDate", kBaseDate},
                     {"ModDate", kBaseDate}};
    for (const auto& [k, v] : opts.info) manifest.info[k] = v;

    Emitter em(to_bytes("%PDF-1.7\n"), 0);

    uint32_t next_num = 4; // 1 catalog, 2 pages, 3 info
    std::vector<uint32_t> page_nums, content_nums;
    for (size_t i = 0; i < pages.size(); ++i) {
        page_nums.push_back(next_num++);
        content_nums.push_back(next_num++);
    }

    CosDict catalog;
    catalog["Type"] = CosValue::name("Catalog");
    catalog["Pages"] = CosValue::reference({2, 0});
    em.dict_object(1, catalog, "catalog", manifest.objects);

    CosArray kids;
    for (uint32_t pn : page_nums) kids.push_back(CosValue::reference({pn, 0}));
    CosDict pages_dict;
    pages_dict["Type"] = CosValue::name("Pages");
    pages_dict["Kids"] = CosValue::array(kids);
    pages_dict["Count"] = CosValue::integer(static_cast<int64_t>(pages.size()));
    em.dict_object(2, pages_dict, "pages", manifest.objects);

    em.dict_object(3, info_dict_from(manifest.info), "info", manifest.objects);

    for (size_t i = 0; i < pages.size(); ++i)
        emit_page(em, pages[i], page_nums[i], content_nums[i], next_num, i,
                  CosValue::reference({2, 0}), nullptr, opts.compress_content, manifest.objects);

    std::map<uint32_t, std::pair<uint64_t, bool>> entries;
    entries[0] = {0, false};
    for (const auto& [num, off] : em.offsets()) entries[num] = {off, true};

    CosDict trailer;
    trailer["Root"] = CosValue::reference({1, 0});
    trailer["Info"] = CosValue::reference({3, 0});

    uint64_t xref_off;
    if (opts.xref_stream) {
        uint32_t xref_num = next_num++;
        trailer["Size"] = CosValue::integer(xref_num + 1);
        xref_off = emit_xref_stream(em, xref_num, entries, trailer, manifest.objects);
    } else {
        trailer["Size"] = CosValue::integer(next_num);
        xref_off = emit_classic_xref(em, entries, trailer);
    }
    emit_file_end(em, xref_off);

    manifest.startxref = xref_off;
    file.bytes = em.take();
    return file;
}

FixtureFile incremental_save(const FixtureFile& prev, const EditScript& edits,
                             const WriteOptions& opts) {
    Document doc = build_revision_chain(prev.bytes);
    size_t last = doc.revision_count() - 1;
    std::vector<PageRef> page_refs = pages(doc, last);

    for (const auto& [idx, spec] : edits.page_edits)
        if (idx >= page_refs.size())
            bad_script("page edit index " + std::to_string(idx) + " out of range");

    FixtureFile out;
    out.manifest = prev.manifest;
    Manifest& manifest = out.manifest;
    size_t new_rev = manifest.revision_count;
    manifest.revision_count = new_rev + 1;

    const Trailer& old_trailer = doc.revisions[last].trailer;
    uint32_t next_num = 0;
    if (auto it = old_trailer.dict.find("Size");
        it != old_trailer.dict.end() && it->second.is_integer())
        next_num = static_cast<uint32_t>(it->second.as_integer());
    for (const auto& [num, e] : resolution_view(doc, last))
        next_num = std::max(next_num, num + 1);

    Emitter em(prev.bytes, new_rev);
    if (em.size() > 0 && prev.bytes.back() != '\n') em.raw("\n");

    bool touched = !edits.page_edits.empty() || !edits.pages_appended.empty() ||
                   !edits.info_updates.empty();

    // edited pages: content object number reused, page object rewritten in place of its number
    for (const auto& [idx, spec] : edits.page_edits) {
        const PageRef& ref = page_refs[idx];
        Resolved old_page = resolve(doc, last, ref.page_object);
        uint32_t content_num =
            ref.contents.empty() ? next_num++ : ref.contents[0].number;
        const CosValue* parent = old_page.value.dict_get("Parent");
        const CosValue* media = old_page.value.dict_get("MediaBox");
        emit_page(em, spec, ref.page_object.number, content_num, next_num, idx,
                  parent ? *parent : CosValue::reference({2, 0}), media, opts.compress_content,
                  manifest.objects);
        manifest.pages[idx] = spec;
    }

    // appended pages: new numbers; the /Pages node is rewritten with the longer /Kids
    if (!edits.pages_appended.empty()) {
        CosValue root = doc.revisions[last].trailer.dict.at("Root");
        if (root.is_reference()) root = resolve(doc, last, root.as_reference()).value;
        const CosValue* pages_ref = root.dict_get("Pages");
        if (!pages_ref || !pages_ref->is_reference())
            bad_script("catalog /Pages is not an indirect reference");
        ObjectId pages_id = pages_ref->as_reference();
        Resolved pages_obj = resolve(doc, last, pages_id);
        if (!pages_obj.value.is_dict()) bad_script("/Pages is not a dictionary");
        CosDict pages_dict = pages_obj.value.as_dict();
        CosArray kids;
        if (auto kit = pages_dict.find("Kids"); kit != pages_dict.end() && kit->second.is_array())
            kids = kit->second.as_array();

        size_t base_idx = page_refs.size();
        for (size_t i = 0; i < edits.pages_appended.size(); ++i) {
            uint32_t pn = next_num++;
            uint32_t cn = next_num++;
            emit_page(em, edits.pages_appended[i], pn, cn, next_num, base_idx + i,
                      CosValue::reference(pages_id), nullptr, opts.compress_content,
                      manifest.objects);
            kids.push_back(CosValue::reference({pn, 0}));
            manifest.pages.push_back(edits.pages_appended[i]);
        }
        pages_dict["Kids"] = CosValue::array(kids);
        pages_dict["Count"] = CosValue::integer(static_cast<int64_t>(kids.size()));
        em.dict_object(pages_id.number, pages_dict, "pages", manifest.objects);
    }

    // info: rewritten on every non-empty update so revisions carry distinct ModDate values
    CosValue info_ref = CosValue::null();
    if (auto it = old_trailer.dict.find("Info"); it != old_trailer.dict.end())
        info_ref = it->second;
    if (touched) {
        for (const auto& [k, v] : edits.info_updates) manifest.info[k] = v;
        manifest.info["ModDate"] = mod_date_for(new_rev);
        uint32_t info_num =
            info_ref.is_reference() ? info_ref.as_reference().number : next_num++;
        em.dict_object(info_num, info_dict_from(manifest.info), "info", manifest.objects);
        info_ref = CosValue::reference({info_num, 0});
    }

    std::map<uint32_t, std::pair<uint64_t, bool>> entries;
    for (const auto& [num, off] : em.offsets()) entries[num] = {off, true};
    if (entries.empty()) entries[0] = {0, false}; // trailer-only update

    CosDict trailer;
    trailer["Root"] = old_trailer.dict.at("Root");
    if (!info_ref.is_null()) trailer["Info"] = info_ref;
    trailer["Prev"] = CosValue::integer(static_cast<int64_t>(doc.revisions[last].xref_offset));

    uint64_t xref_off;
    if (opts.xref_stream) {
        uint32_t xref_num = next_num++;
        trailer["Size"] = CosValue::integer(xref_num + 1);
        xref_off = emit_xref_stream(em, xref_num, entries, trailer, manifest.objects);
    } else {
        trailer["Size"] = CosValue::integer(next_num);
        xref_off = emit_classic_xref(em, entries, trailer);
    }
    emit_file_end(em, xref_off);

    manifest.startxref = xref_off;
    out.bytes = em.take();
    return out;
}

Bytes full_save(const Bytes& input) {
    Document doc = build_revision_chain(Bytes(input));
    size_t last = doc.revision_count() - 1;
    FileImage img = doc.image();

    Emitter em(to_bytes("%PDF-1.7\n"), 0);
    std::vector<ObjectRecord> records;
    std::map<uint32_t, std::pair<uint64_t, bool>> entries;
    entries[0] = {0, false};
    uint32_t max_num = 0;

    for (const auto& [num, entry] : resolution_view(doc, last)) {
        if (!entry.in_use || num == 0) continue;
        try {
            Resolved r = resolve(doc, last, ObjectId{num, entry.generation});
            const CosValue* type = r.value.dict_get("Type");
            if (type && type->is_name() &&
                (type->as_name() == "XRef" || type->as_name() == "ObjStm"))
                continue; // superseded by the table written below
            uint64_t start = em.size();
            if (entry.compressed) {
                em.raw(std::to_string(num) + " 0 obj\n" + serialize_value(r.value) + "\nendobj\n");
            } else {
                Bytes copy(img.begin() + r.span.start, img.begin() + r.span.end());
                em.raw(copy);
                em.raw("\n");
            }
            entries[num] = {start, true};
            max_num = std::max(max_num, num);
        } catch (const PdfError&) {
            // unreadable object: dropped from the rewritten file
        }
    }

    CosDict trailer;
    const CosDict& old = doc.revisions[last].trailer.dict;
    if (auto it = old.find("Root"); it != old.end()) trailer["Root"] = it->second;
    if (auto it = old.find("Info"); it != old.end()) trailer["Info"] = it->second;
    trailer["Size"] = CosValue::integer(max_num + 1);
    uint64_t xref_off = emit_classic_xref(em, entries, trailer);
    emit_file_end(em, xref_off);
    return em.take();
}

Bytes tiny_jpeg() {
    static const uint8_t jpeg[] = {
        0xFF, 0xD8, 0xFF, 0xE0, 0x00, 0x10, 0x4A, 0x46, 0x49, 0x46, 0x00, 0x01, 0x01, 0x00,
        0x00, 0x01, 0x00, 0x01, 0x00, 0x00, 0xFF, 0xDB, 0x00, 0x43, 0x00, 0x08, 0x06, 0x06,
        0x07, 0x06, 0x05, 0x08, 0x07, 0x07, 0x07, 0x09, 0x09, 0x08, 0x0A, 0x0C, 0x14, 0x0D,
        0x0C, 0x0B, 0x0B, 0x0C, 0x19, 0x12, 0x13, 0x0F, 0x14, 0x1D, 0x1A, 0x1F, 0x1E, 0x1D,
        0x1A, 0x1C, 0x1C, 0x20, 0x24, 0x2E, 0x27, 0x20, 0x22, 0x2C, 0x23, 0x1C, 0x1C, 0x28,
        0x37, 0x29, 0x2C, 0x30, 0x31, 0x34, 0x34, 0x34, 0x1F, 0x27, 0x39, 0x3D, 0x38, 0x32,
        0x3C, 0x2E, 0x33, 0x34, 0x32, 0xFF, 0xC0, 0x00, 0x0B, 0x08, 0x00, 0x01, 0x00, 0x01,
        0x01, 0x01, 0x11, 0x00, 0xFF, 0xC4, 0x00, 0x14, 0x00, 0x01, 0x00, 0x00, 0x00, 0x00,
        0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x08, 0xFF, 0xC4,
        0x00, 0x14, 0x10, 0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
        0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0xFF, 0xDA, 0x00, 0x08, 0x01, 0x01, 0x00, 0x00,
        0x3F, 0x00, 0x7F, 0x00, 0xFF, 0xD9,
    };
    return Bytes(jpeg, jpeg + sizeof(jpeg));
}

} // namespace pdfrev
