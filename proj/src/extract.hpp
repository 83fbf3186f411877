#ifndef PDFREV_EXTRACT_HPP
#define PDFREV_EXTRACT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pagetree.hpp"
#include "revisions.hpp"

namespace pdfrev {

struct ContentOp {
    CosArray operands;
    std::string op;
};

// Postfix content-stream operator list; inline images collapse to a bare BI op.
std::vector<ContentOp> tokenize_content(const Bytes& program);

enum class BaseEncoding { Standard, WinAnsi, MacRoman, IdentityTwoByte };

struct FontMap {
    std::string resource_name;
    BaseEncoding base_encoding = BaseEncoding::Standard;
    std::optional<std::map<uint32_t, std::string>> to_unicode; // code -> UTF-8
};

std::map<uint32_t, std::string> parse_to_unicode(const Bytes& cmap, std::vector<std::string>* warnings = nullptr);

struct TextRun {
    std::string text; // UTF-8
    size_t page_index = 0;
    size_t order = 0;
};

struct PageText {
    size_t page_index = 0;
    std::vector<TextRun> runs;
    std::string joined;
    std::vector<std::string> warnings;
};

struct ExtractOptions {
    // TJ kerning elements beyond this many text-space units become a space
    double kerning_space_threshold = 200.0;
};

std::vector<PageText> extract_text(const Document& doc, size_t rev,
                                   const ExtractOptions& opts = {});

enum class ImageFormat { JPEG, JPEG2000, RawPixmap };

struct ExtractedImage {
    size_t page_index = 0;
    ObjectId object_id;
    ImageFormat format = ImageFormat::RawPixmap;
    int width = 0;
    int height = 0;
    int bits_per_component = 0;
    std::string color_space;
    Bytes payload;
};

std::vector<ExtractedImage> extract_images(const Document& doc, size_t rev,
                                           std::vector<std::string>* warnings = nullptr);

} // namespace pdfrev

#endif
