#ifndef PDFREV_BYTES_HPP
#define PDFREV_BYTES_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace pdfrev {

using Bytes = std::vector<uint8_t>;

// Half-open byte range [start, start+length) into a file image.
struct ByteSpan {
    uint64_t start = 0;
    uint64_t length = 0;

    uint64_t end() const { return start + length; }
    bool contains(uint64_t pos) const { return pos >= start && pos < end(); }
    bool operator==(const ByteSpan&) const = default;
};

inline bool is_pdf_whitespace(uint8_t c) {
    return c == 0x00 || c == 0x09 || c == 0x0A || c == 0x0C || c == 0x0D || c == 0x20;
}

inline bool is_pdf_delimiter(uint8_t c) {
    return c == '(' || c == ')' || c == '<' || c == '>' || c == '[' || c == ']' ||
           c == '{' || c == '}' || c == '/' || c == '%';
}

inline bool is_regular_char(uint8_t c) {
    return !is_pdf_whitespace(c) && !is_pdf_delimiter(c);
}

inline Bytes to_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

inline std::string to_string(const Bytes& b) { return std::string(b.begin(), b.end()); }

} // namespace pdfrev

#endif
