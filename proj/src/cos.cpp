#include "cos.hpp"

#include <cctype>
#include <charconv>
#include <cstring>

namespace pdfrev {

namespace {

class Lexer {
public:
    Lexer(FileImage bytes, uint64_t pos) : bytes_(bytes), pos_(pos) {}

    uint64_t pos() const { return pos_; }
    void seek(uint64_t p) { pos_ = p; }
    bool eof() const { return pos_ >= bytes_.size(); }
    uint8_t peek() const { return bytes_[pos_]; }
    uint8_t take() { return bytes_[pos_++]; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw PdfError(ErrorCode::MalformedToken, msg + " at offset " + std::to_string(pos_));
    }

    void skip_space() {
        while (!eof()) {
            uint8_t c = peek();
            if (is_pdf_whitespace(c)) {
                ++pos_;
            } else if (c == '%') {
                while (!eof() && peek() != '\n' && peek() != '\r') ++pos_;
            } else {
                break;
            }
        }
    }

    bool at_keyword(std::string_view kw) const { return keyword_at(bytes_, pos_, kw); }

    bool try_keyword(std::string_view kw) {
        if (!at_keyword(kw)) return false;
        pos_ += kw.size();
        return true;
    }

    CosValue lex(int depth = 0) {
        if (depth > 256) fail("nesting too deep");
        skip_space();
        if (eof()) fail("unexpected end of input");
        uint8_t c = peek();
        switch (c) {
            case '/': return lex_name();
            case '(': return lex_literal_string();
            case '<':
                if (pos_ + 1 < bytes_.size() && bytes_[pos_ + 1] == '<') return lex_dict(depth);
                return lex_hex_string();
            case '[': return lex_array(depth);
            default: break;
        }
        if (try_keyword("true")) return CosValue::boolean(true);
        if (try_keyword("false")) return CosValue::boolean(false);
        if (try_keyword("null")) return CosValue::null();
        if (c == '+' || c == '-' || c == '.' || (c >= '0' && c <= '9')) return lex_number();
        fail("unexpected byte");
    }

private:
    CosValue lex_name() {
        ++pos_; // '/'
        std::string name;
        while (!eof() && is_regular_char(peek())) {
            uint8_t ch = take();
            if (ch == '#' && pos_ + 1 < bytes_.size() && std::isxdigit(bytes_[pos_]) &&
                std::isxdigit(bytes_[pos_ + 1])) {
                auto hex = [](uint8_t h) -> int {
                    if (h >= '0' && h <= '9') return h - '0';
                    return (std::tolower(h) - 'a') + 10;
                };
                ch = static_cast<uint8_t>(hex(take()) * 16);
                ch = static_cast<uint8_t>(ch + hex(take()));
            }
            name.push_back(static_cast<char>(ch));
        }
        return CosValue::name(std::move(name));
    }

    CosValue lex_literal_string() {
        ++pos_; // '('
        Bytes out;
        int nesting = 1;
        while (true) {
            if (eof()) fail("unterminated literal string");
            uint8_t ch = take();
            if (ch == '\\') {
                if (eof()) fail("unterminated escape");
                uint8_t e = take();
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    case 't': out.push_back('\t'); break;
                    case 'b': out.push_back('\b'); break;
                    case 'f': out.push_back('\f'); break;
                    case '(': out.push_back('('); break;
                    case ')': out.push_back(')'); break;
                    case '\\': out.push_back('\\'); break;
                    case '\r':
                        if (!eof() && peek() == '\n') ++pos_;
                        break; // line continuation
                    case '\n': break;
                    default:
                        if (e >= '0' && e <= '7') {
                            int v = e - '0';
                            for (int i = 0; i < 2 && !eof() && peek() >= '0' && peek() <= '7'; ++i)
                                v = v * 8 + (take() - '0');
                            out.push_back(static_cast<uint8_t>(v & 0xFF));
                        } else {
                            out.push_back(e); // unknown escape: keep the byte
                        }
                }
            } else if (ch == '(') {
                ++nesting;
                out.push_back(ch);
            } else if (ch == ')') {
                if (--nesting == 0) break;
                out.push_back(ch);
            } else {
                out.push_back(ch);
            }
        }
        return CosValue::string(std::move(out), false);
    }

    CosValue lex_hex_string() {
        ++pos_; // '<'
        Bytes out;
        int hi = -1;
        while (true) {
            if (eof()) fail("unterminated hex string");
            uint8_t ch = take();
            if (ch == '>') break;
            if (is_pdf_whitespace(ch)) continue;
            int v;
            if (ch >= '0' && ch <= '9') v = ch - '0';
            else if (ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
            else if (ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
            else fail("bad hex digit");
            if (hi < 0) {
                hi = v;
            } else {
                out.push_back(static_cast<uint8_t>(hi * 16 + v));
                hi = -1;
            }
        }
        if (hi >= 0) out.push_back(static_cast<uint8_t>(hi * 16)); // odd digit padded with 0
        return CosValue::string(std::move(out), true);
    }

    CosValue lex_number() {
        uint64_t start = pos_;
        if (peek() == '+' || peek() == '-') ++pos_;
        bool real = false;
        while (!eof() && ((peek() >= '0' && peek() <= '9') || peek() == '.')) {
            if (peek() == '.') real = true;
            ++pos_;
        }
        if (pos_ == start || (pos_ == start + 1 && !std::isdigit(bytes_[start]) && !real))
            fail("bad number");
        std::string text(reinterpret_cast<const char*>(bytes_.data()) + start, pos_ - start);
        if (real) {
            try {
                return CosValue::real(std::stod(text));
            } catch (const std::exception&) {
                fail("bad real number");
            }
        }
        int64_t n = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
        if (ec != std::errc() || ptr != text.data() + text.size()) fail("bad integer");
        // Integer followed by another integer and a bare `R` forms a reference.
        if (n >= 0) {
            uint64_t save = pos_;
            skip_space();
            uint64_t gen_start = pos_;
            while (!eof() && peek() >= '0' && peek() <= '9') ++pos_;
            if (pos_ > gen_start) {
                std::string gen_text(reinterpret_cast<const char*>(bytes_.data()) + gen_start,
                                     pos_ - gen_start);
                skip_space();
                if (try_keyword("R")) {
                    uint32_t gen = static_cast<uint32_t>(std::stoul(gen_text));
                    return CosValue::reference(ObjectId{static_cast<uint32_t>(n), gen});
                }
            }
            pos_ = save;
        }
        return CosValue::integer(n);
    }

    CosValue lex_array(int depth) {
        ++pos_; // '['
        CosArray items;
        while (true) {
            skip_space();
            if (eof()) fail("unterminated array");
            if (peek() == ']') {
                ++pos_;
                break;
            }
            items.push_back(lex(depth + 1));
        }
        return CosValue::array(std::move(items));
    }

    CosValue lex_dict(int depth) {
        pos_ += 2; // '<<'
        CosDict dict;
        while (true) {
            skip_space();
            if (eof()) fail("unterminated dictionary");
            if (peek() == '>') {
                if (pos_ + 1 >= bytes_.size() || bytes_[pos_ + 1] != '>')
                    fail("stray '>' in dictionary");
                pos_ += 2;
                break;
            }
            if (peek() != '/') fail("dictionary key must be a name");
            CosValue key = lex_name();
            CosValue value = lex(depth + 1);
            dict[key.as_name()] = std::move(value);
        }
        return CosValue::dict(std::move(dict));
    }

    FileImage bytes_;
    uint64_t pos_;
};

// Finds `endstream` scanning forward from `from`; returns payload length or nullopt.
std::optional<uint64_t> scan_for_endstream(FileImage bytes, uint64_t from) {
    static const char kw[] = "endstream";
    for (uint64_t p = from; p + 9 <= bytes.size(); ++p) {
        if (bytes[p] == 'e' && std::memcmp(bytes.data() + p, kw, 9) == 0 &&
            keyword_at(bytes, p, "endstream")) {
            uint64_t end = p;
            // exclude one trailing EOL that belongs to the keyword, not the payload
            if (end > from && bytes[end - 1] == '\n') --end;
            if (end > from && bytes[end - 1] == '\r') --end;
            return end - from;
        }
    }
    return std::nullopt;
}

} // namespace

bool keyword_at(FileImage bytes, uint64_t offset, std::string_view kw) {
    if (offset + kw.size() > bytes.size()) return false;
    if (std::memcmp(bytes.data() + offset, kw.data(), kw.size()) != 0) return false;
    uint64_t after = offset + kw.size();
    if (after < bytes.size() && is_regular_char(bytes[after])) return false;
    // keyword must start at a token boundary
    if (offset > 0 && is_regular_char(bytes[offset - 1])) return false;
    return true;
}

uint64_t skip_space_and_comments(FileImage bytes, uint64_t offset) {
    Lexer lx(bytes, offset);
    lx.skip_space();
    return lx.pos();
}

LexResult lex_value(FileImage bytes, uint64_t offset) {
    if (offset > bytes.size())
        throw PdfError(ErrorCode::MalformedToken, "offset beyond end of file");
    Lexer lx(bytes, offset);
    lx.skip_space();
    uint64_t start = lx.pos();
    CosValue v = lx.lex();
    return {std::move(v), ByteSpan{start, lx.pos() - start}};
}

IndirectObject parse_indirect_object(FileImage bytes, uint64_t offset, const ParseOptions& opts) {
    Lexer lx(bytes, offset);
    lx.skip_space();
    uint64_t start = lx.pos();

    auto id_fail = [&](const char* msg) -> void {
        throw PdfError(ErrorCode::IdMismatch,
                       std::string(msg) + " at offset " + std::to_string(start));
    };

    CosValue num = lx.lex();
    if (!num.is_integer() || num.as_integer() < 0) id_fail("object number is not an integer");
    CosValue gen = lx.lex();
    if (!gen.is_integer() || gen.as_integer() < 0 || gen.as_integer() > 65535)
        id_fail("generation is not a small integer");
    lx.skip_space();
    if (!lx.try_keyword("obj")) id_fail("missing obj keyword");

    ObjectId id{static_cast<uint32_t>(num.as_integer()), static_cast<uint32_t>(gen.as_integer())};
    CosValue value = lx.lex();

    lx.skip_space();
    if (value.is_dict() && lx.try_keyword("stream")) {
        // EOL after `stream`: CR, LF, or CRLF all accepted
        if (!lx.eof() && lx.peek() == '\r') lx.take();
        if (!lx.eof() && lx.peek() == '\n') lx.take();
        uint64_t data_start = lx.pos();

        std::optional<int64_t> declared;
        if (const CosValue* len = value.dict_get("Length")) {
            if (len->is_integer()) {
                declared = len->as_integer();
            } else if (len->is_reference()) {
                if (opts.resolver && *opts.resolver) {
                    CosValue resolved = (*opts.resolver)(len->as_reference());
                    if (resolved.is_integer()) declared = resolved.as_integer();
                } else if (!opts.carve) {
                    throw PdfError(ErrorCode::StreamLengthUnresolvable,
                                   "stream /Length is an indirect reference");
                }
            }
        }

        uint64_t raw_len = 0;
        bool have_len = false;
        if (declared && *declared >= 0 &&
            data_start + static_cast<uint64_t>(*declared) <= bytes.size()) {
            uint64_t cand_end = data_start + static_cast<uint64_t>(*declared);
            uint64_t after = skip_space_and_comments(bytes, cand_end);
            if (keyword_at(bytes, after, "endstream")) {
                raw_len = static_cast<uint64_t>(*declared);
                have_len = true;
            }
        }
        if (!have_len) {
            // declared length missing or wrong: trust the scanned endstream position
            auto scanned = scan_for_endstream(bytes, data_start);
            if (!scanned)
                throw PdfError(ErrorCode::MalformedToken, "missing endstream keyword");
            raw_len = *scanned;
            if (opts.warnings)
                opts.warnings->push_back("object " + std::to_string(id.number) +
                                         ": /Length disagrees with endstream position; using scanned length " +
                                         std::to_string(raw_len));
        }

        lx.seek(data_start + raw_len);
        lx.skip_space();
        if (!lx.try_keyword("endstream"))
            throw PdfError(ErrorCode::MalformedToken, "missing endstream keyword");
        value = CosValue::stream(CosStream{value.as_dict(), ByteSpan{data_start, raw_len}});
        lx.skip_space();
    }

    if (!lx.try_keyword("endobj")) {
        lx.skip_space();
        if (!lx.try_keyword("endobj"))
            throw PdfError(ErrorCode::MalformedToken,
                           "missing endobj for object " + std::to_string(id.number));
    }
    return {id, std::move(value), ByteSpan{start, lx.pos() - start}};
}

ScanResult scan_all_objects(FileImage bytes) {
    ScanResult result;
    uint64_t pos = 0;
    const uint64_t n = bytes.size();
    while (pos + 3 <= n) {
        // find the next "obj" keyword
        uint64_t kw = pos;
        bool found = false;
        for (; kw + 3 <= n; ++kw) {
            if (bytes[kw] == 'o' && bytes[kw + 1] == 'b' && bytes[kw + 2] == 'j' &&
                keyword_at(bytes, kw, "obj")) {
                found = true;
                break;
            }
        }
        if (!found) break;

        // walk back over: ws, generation digits, ws, number digits
        uint64_t p = kw;
        auto back_ws = [&]() {
            while (p > 0 && is_pdf_whitespace(bytes[p - 1])) --p;
        };
        auto back_digits = [&]() {
            uint64_t q = p;
            while (q > 0 && bytes[q - 1] >= '0' && bytes[q - 1] <= '9') --q;
            bool any = q != p;
            p = q;
            return any;
        };
        back_ws();
        uint64_t save = p;
        bool ok = back_digits();
        back_ws();
        ok = ok && back_digits() && p != save;
        ok = ok && (p == 0 || !is_regular_char(bytes[p - 1]));

        if (ok && p >= pos) {
            try {
                ParseOptions opts;
                opts.carve = true;
                IndirectObject obj = parse_indirect_object(bytes, p, opts);
                result.objects.push_back({obj.id, obj.span});
                pos = obj.span.end();
                continue;
            } catch (const PdfError&) {
                ++result.skipped;
            }
        } else {
            ++result.skipped;
        }
        pos = kw + 3;
    }
    return result;
}

} // namespace pdfrev
