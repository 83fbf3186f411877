#ifndef PDFREV_TEXTCODEC_HPP
#define PDFREV_TEXTCODEC_HPP

#include <string>

#include "bytes.hpp"

namespace pdfrev {

// Appends a Unicode code point as UTF-8.
void append_utf8(std::string& out, uint32_t cp);

// WinAnsi (cp1252-style) single byte to Unicode code point.
uint32_t winansi_to_unicode(uint8_t byte);
uint32_t macroman_to_unicode(uint8_t byte);

// UTF-16BE bytes to UTF-8, surrogate pairs combined; lone surrogates become U+FFFD.
std::string utf16be_to_utf8(const Bytes& data, size_t from = 0);

// Document-level PDF text string: UTF-16BE when BOM FE FF present, WinAnsi otherwise.
std::string decode_pdf_text_string(const Bytes& data);

// Lenient UTF-8 decode; invalid sequences become U+FFFD.
std::vector<uint32_t> utf8_to_codepoints(const std::string& text);

// Unicode code point to WinAnsi byte; 0 when unmappable.
uint8_t unicode_to_winansi(uint32_t cp);

} // namespace pdfrev

#endif
