#include "extract.hpp"

#include <cmath>
#include <cstring>

#include "filters.hpp"
#include "textcodec.hpp"

namespace pdfrev {

namespace {

bool is_word_start(uint8_t c) {
    return is_regular_char(c) && !(c >= '0' && c <= '9') && c != '+' && c != '-' && c != '.';
}

// Reads a bare operator word (regular chars, including ' and ").
std::string read_word(FileImage img, uint64_t& pos) {
    uint64_t start = pos;
    while (pos < img.size() && is_regular_char(img[pos])) ++pos;
    return std::string(reinterpret_cast<const char*>(img.data()) + start, pos - start);
}

// Skips an inline image: dict entries already consumed up to ID; finds EI.
uint64_t skip_inline_image(FileImage img, uint64_t pos) {
    // binary payload starts after one whitespace byte following ID
    if (pos < img.size() && is_pdf_whitespace(img[pos])) ++pos;
    for (uint64_t p = pos; p + 2 <= img.size(); ++p) {
        if (img[p] == 'E' && img[p + 1] == 'I' && (p == pos || is_pdf_whitespace(img[p - 1])) &&
            (p + 2 >= img.size() || !is_regular_char(img[p + 2])))
            return p + 2;
    }
    return img.size();
}

} // namespace

std::vector<ContentOp> tokenize_content(const Bytes& program) {
    FileImage img(program.data(), program.size());
    std::vector<ContentOp> ops;
    CosArray operands;
    uint64_t pos = 0;
    while (true) {
        pos = skip_space_and_comments(img, pos);
        if (pos >= img.size()) break;
        uint8_t c = img[pos];
        if (is_word_start(c)) {
            std::string word = read_word(img, pos);
            if (word == "true") {
                operands.push_back(CosValue::boolean(true));
            } else if (word == "false") {
                operands.push_back(CosValue::boolean(false));
            } else if (word == "null") {
                operands.push_back(CosValue::null());
            } else if (word == "BI") {
                // inline image: consume key/value pairs, then binary data through EI
                while (true) {
                    pos = skip_space_and_comments(img, pos);
                    if (pos >= img.size()) break;
                    if (keyword_at(img, pos, "ID")) {
                        pos = skip_inline_image(img, pos + 2);
                        break;
                    }
                    try {
                        LexResult v = lex_value(img, pos);
                        pos = v.span.end();
                    } catch (const PdfError&) {
                        ++pos;
                    }
                }
                ops.push_back({{}, "BI"});
                operands.clear();
            } else if (!word.empty()) {
                ops.push_back({std::move(operands), std::move(word)});
                operands = {};
            } else {
                ++pos;
            }
        } else {
            try {
                LexResult v = lex_value(img, pos);
                operands.push_back(std::move(v.value));
                pos = v.span.end();
            } catch (const PdfError&) {
                // resume at the next plausible token
                operands.clear();
                while (pos < img.size() && !is_pdf_whitespace(img[pos])) ++pos;
            }
        }
    }
    return ops;
}

std::map<uint32_t, std::string> parse_to_unicode(const Bytes& cmap,
                                                 std::vector<std::string>* warnings) {
    std::map<uint32_t, std::string> map;
    FileImage img(cmap.data(), cmap.size());
    uint64_t pos = 0;
    CosArray operands;
    enum class Section { None, BfChar, BfRange } section = Section::None;

    auto code_of = [](const CosString& s) -> uint32_t {
        uint32_t v = 0;
        for (size_t i = 0; i < s.data.size() && i < 4; ++i) v = (v << 8) | s.data[i];
        return v;
    };
    auto text_of = [](const CosString& s) { return utf16be_to_utf8(s.data); };
    auto code_points_of = [](const CosString& s) {
        // UTF-16BE destination decoded into code points for bfrange increments
        std::vector<uint32_t> cps;
        size_t i = 0;
        while (i + 1 < s.data.size()) {
            uint32_t u = (uint32_t(s.data[i]) << 8) | s.data[i + 1];
            i += 2;
            if (u >= 0xD800 && u <= 0xDBFF && i + 1 < s.data.size()) {
                uint32_t lo = (uint32_t(s.data[i]) << 8) | s.data[i + 1];
                if (lo >= 0xDC00 && lo <= 0xDFFF) {
                    i += 2;
                    cps.push_back(0x10000 + ((u - 0xD800) << 10) + (lo - 0xDC00));
                    continue;
                }
            }
            cps.push_back(u);
        }
        return cps;
    };

    auto flush_bfchar = [&]() {
        for (size_t i = 0; i + 1 < operands.size(); i += 2) {
            if (!operands[i].is_string() || !operands[i + 1].is_string()) continue;
            map[code_of(operands[i].as_string())] = text_of(operands[i + 1].as_string());
        }
    };
    auto flush_bfrange = [&]() {
        for (size_t i = 0; i + 2 < operands.size(); i += 3) {
            if (!operands[i].is_string() || !operands[i + 1].is_string()) continue;
            uint32_t lo = code_of(operands[i].as_string());
            uint32_t hi = code_of(operands[i + 1].as_string());
            if (hi < lo || hi - lo > 65535) continue;
            const CosValue& dst = operands[i + 2];
            if (dst.is_string()) {
                std::vector<uint32_t> cps = code_points_of(dst.as_string());
                if (cps.empty()) continue;
                for (uint32_t c = lo; c <= hi; ++c) {
                    std::string text;
                    for (size_t k = 0; k + 1 < cps.size(); ++k) append_utf8(text, cps[k]);
                    append_utf8(text, cps.back() + (c - lo));
                    map[c] = std::move(text);
                    if (c == UINT32_MAX) break;
                }
            } else if (dst.is_array()) {
                const CosArray& arr = dst.as_array();
                for (uint32_t c = lo; c <= hi && c - lo < arr.size(); ++c) {
                    if (arr[c - lo].is_string()) map[c] = text_of(arr[c - lo].as_string());
                }
            }
        }
    };

    while (true) {
        pos = skip_space_and_comments(img, pos);
        if (pos >= img.size()) break;
        if (is_word_start(img[pos])) {
            std::string word = read_word(img, pos);
            if (word == "beginbfchar") {
                section = Section::BfChar;
                operands.clear();
            } else if (word == "beginbfrange") {
                section = Section::BfRange;
                operands.clear();
            } else if (word == "endbfchar") {
                if (section == Section::BfChar) flush_bfchar();
                section = Section::None;
                operands.clear();
            } else if (word == "endbfrange") {
                if (section == Section::BfRange) flush_bfrange();
                section = Section::None;
                operands.clear();
            } else {
                operands.clear();
            }
        } else {
            try {
                LexResult v = lex_value(img, pos);
                if (section != Section::None) operands.push_back(std::move(v.value));
                pos = v.span.end();
            } catch (const PdfError&) {
                if (warnings) warnings->push_back("malformed CMap token; partial map returned");
                ++pos;
                section = Section::None;
            }
        }
    }
    return map;
}

namespace {

std::map<std::string, FontMap> build_font_maps(const Document& doc, size_t rev,
                                               const CosValue& resources,
                                               std::vector<std::string>* warnings) {
    std::map<std::string, FontMap> fonts;
    const CosValue* font_dict_v = resources.dict_get("Font");
    if (!font_dict_v) return fonts;
    CosValue font_dict = *font_dict_v;
    if (font_dict.is_reference()) font_dict = resolve(doc, rev, font_dict.as_reference()).value;
    if (!font_dict.is_dict()) return fonts;

    for (const auto& [name, fv] : font_dict.as_dict()) {
        FontMap fm;
        fm.resource_name = name;
        try {
            CosValue font = fv;
            if (font.is_reference()) font = resolve(doc, rev, font.as_reference()).value;
            if (!font.is_dict()) continue;
            const CosValue* subtype = font.dict_get("Subtype");
            const CosValue* encoding = font.dict_get("Encoding");
            if (subtype && subtype->is_name() && subtype->as_name() == "Type0") {
                fm.base_encoding = BaseEncoding::IdentityTwoByte;
            } else if (encoding && encoding->is_name()) {
                if (encoding->as_name() == "WinAnsiEncoding") fm.base_encoding = BaseEncoding::WinAnsi;
                else if (encoding->as_name() == "MacRomanEncoding")
                    fm.base_encoding = BaseEncoding::MacRoman;
            }
            if (const CosValue* tu = font.dict_get("ToUnicode")) {
                CosValue tuv = *tu;
                if (tuv.is_reference()) tuv = resolve(doc, rev, tuv.as_reference()).value;
                if (tuv.is_stream()) {
                    DecodedStream data =
                        decode_stream(tuv.as_stream(), doc.image(), make_resolver(doc, rev));
                    fm.to_unicode = parse_to_unicode(data.data, warnings);
                }
            }
        } catch (const PdfError& e) {
            if (warnings) warnings->push_back("font " + name + ": " + e.what());
        }
        fonts[name] = std::move(fm);
    }
    return fonts;
}

std::string decode_with_font(const Bytes& raw, const FontMap* font,
                             std::vector<std::string>* warnings) {
    std::string out;
    bool two_byte = font && font->base_encoding == BaseEncoding::IdentityTwoByte;
    const std::map<uint32_t, std::string>* tu =
        font && font->to_unicode ? &*font->to_unicode : nullptr;

    if (two_byte) {
        for (size_t i = 0; i + 1 < raw.size(); i += 2) {
            uint32_t code = (uint32_t(raw[i]) << 8) | raw[i + 1];
            if (tu) {
                auto it = tu->find(code);
                if (it != tu->end()) {
                    out += it->second;
                    continue;
                }
            }
            append_utf8(out, 0xFFFD);
            if (warnings)
                warnings->push_back("two-byte code " + std::to_string(code) +
                                    " has no ToUnicode mapping");
        }
        return out;
    }

    for (uint8_t b : raw) {
        if (tu) {
            auto it = tu->find(b);
            if (it != tu->end()) {
                out += it->second;
                continue;
            }
        }
        if (font && font->base_encoding == BaseEncoding::MacRoman)
            append_utf8(out, macroman_to_unicode(b));
        else
            append_utf8(out, winansi_to_unicode(b));
    }
    return out;
}

} // namespace

std::vector<PageText> extract_text(const Document& doc, size_t rev, const ExtractOptions& opts) {
    std::vector<PageText> out;
    std::vector<PageRef> page_refs = pages(doc, rev);
    for (const PageRef& page : page_refs) {
        PageText pt;
        pt.page_index = page.page_index;
        try {
            Bytes program = content_program(doc, rev, page);
            std::map<std::string, FontMap> fonts =
                build_font_maps(doc, rev, page.resources, &pt.warnings);

            const FontMap* current = nullptr;
            bool pending_break = false;
            std::optional<double> last_tm_y;
            std::vector<bool> break_before;

            auto show = [&](std::string text) {
                break_before.push_back(pending_break && !pt.runs.empty());
                pending_break = false;
                TextRun run;
                run.text = std::move(text);
                run.page_index = page.page_index;
                run.order = pt.runs.size();
                pt.runs.push_back(std::move(run));
            };

            for (const ContentOp& op : tokenize_content(program)) {
                const CosArray& a = op.operands;
                if (op.op == "Tf") {
                    if (a.size() >= 1 && a[0].is_name()) {
                        auto it = fonts.find(a[0].as_name());
                        current = it != fonts.end() ? &it->second : nullptr;
                    }
                } else if (op.op == "Td" || op.op == "TD") {
                    if (a.size() >= 2 && a[1].is_number() && a[1].as_real() != 0.0)
                        pending_break = true;
                } else if (op.op == "T*") {
                    pending_break = true;
                } else if (op.op == "Tm") {
                    if (a.size() >= 6 && a[5].is_number()) {
                        double y = a[5].as_real();
                        if (last_tm_y && *last_tm_y != y) pending_break = true;
                        last_tm_y = y;
                    }
                } else if (op.op == "ET") {
                    pending_break = true;
                } else if (op.op == "Tj") {
                    if (!a.empty() && a.back().is_string())
                        show(decode_with_font(a.back().as_string().data, current, &pt.warnings));
                } else if (op.op == "'") {
                    pending_break = true;
                    if (!a.empty() && a.back().is_string())
                        show(decode_with_font(a.back().as_string().data, current, &pt.warnings));
                } else if (op.op == "\"") {
                    pending_break = true;
                    if (a.size() >= 3 && a[2].is_string())
                        show(decode_with_font(a[2].as_string().data, current, &pt.warnings));
                } else if (op.op == "TJ") {
                    if (!a.empty() && a.back().is_array()) {
                        std::string text;
                        for (const CosValue& e : a.back().as_array()) {
                            if (e.is_string())
                                text += decode_with_font(e.as_string().data, current, &pt.warnings);
                            else if (e.is_number() &&
                                     std::abs(e.as_real()) > opts.kerning_space_threshold)
                                text += ' ';
                        }
                        show(std::move(text));
                    }
                }
            }

            for (size_t i = 0; i < pt.runs.size(); ++i) {
                if (i < break_before.size() && break_before[i]) pt.joined += '\n';
                pt.joined += pt.runs[i].text;
            }
        } catch (const PdfError& e) {
            pt.warnings.push_back(e.what());
        }
        out.push_back(std::move(pt));
    }
    return out;
}

std::vector<ExtractedImage> extract_images(const Document& doc, size_t rev,
                                           std::vector<std::string>* warnings) {
    std::vector<ExtractedImage> out;
    for (const PageRef& page : pages(doc, rev)) {
        const CosValue* xobjects_v = page.resources.dict_get("XObject");
        if (!xobjects_v) continue;
        CosValue xobjects = *xobjects_v;
        try {
            if (xobjects.is_reference())
                xobjects = resolve(doc, rev, xobjects.as_reference()).value;
        } catch (const PdfError& e) {
            if (warnings) warnings->push_back(e.what());
            continue;
        }
        if (!xobjects.is_dict()) continue;

        for (const auto& [name, xv] : xobjects.as_dict()) {
            try {
                ObjectId oid{};
                CosValue x = xv;
                if (x.is_reference()) {
                    oid = x.as_reference();
                    x = resolve(doc, rev, oid).value;
                }
                if (!x.is_stream()) continue;
                const CosValue* subtype = x.dict_get("Subtype");
                if (!subtype || !subtype->is_name() || subtype->as_name() != "Image") continue;

                ExtractedImage img;
                img.page_index = page.page_index;
                img.object_id = oid;
                auto get_int = [&](const char* key) -> int {
                    const CosValue* v = x.dict_get(key);
                    if (!v) return 0;
                    CosValue r = *v;
                    if (r.is_reference()) r = resolve(doc, rev, r.as_reference()).value;
                    return r.is_integer() ? static_cast<int>(r.as_integer()) : 0;
                };
                img.width = get_int("Width");
                img.height = get_int("Height");
                img.bits_per_component = get_int("BitsPerComponent");
                if (const CosValue* cs = x.dict_get("ColorSpace")) {
                    CosValue c = *cs;
                    if (c.is_reference()) c = resolve(doc, rev, c.as_reference()).value;
                    if (c.is_name()) img.color_space = c.as_name();
                }

                DecodedStream data =
                    decode_stream(x.as_stream(), doc.image(), make_resolver(doc, rev));
                if (data.terminal && data.terminal->name == FilterName::DCTDecode)
                    img.format = ImageFormat::JPEG;
                else if (data.terminal && data.terminal->name == FilterName::JPXDecode)
                    img.format = ImageFormat::JPEG2000;
                else
                    img.format = ImageFormat::RawPixmap;
                img.payload = std::move(data.data);
                out.push_back(std::move(img));
            } catch (const PdfError& e) {
                if (warnings)
                    warnings->push_back("page " + std::to_string(page.page_index) + " image " +
                                        name + ": " + e.what());
            }
        }
    }
    return out;
}

} // namespace pdfrev
