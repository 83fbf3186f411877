#ifndef PDFREV_FIXTURE_HPP
#define PDFREV_FIXTURE_HPP

#include <map>
#include <string>
#include <vector>

#include "bytes.hpp"
#include "cos.hpp"

namespace pdfrev {

enum class FixtureFont { Latin, IdentityUnicode };

struct FixtureText {
    std::string text; // UTF-8
    FixtureFont font = FixtureFont::Latin;
};

enum class FixtureImageFormat { Jpeg, RawPixmap };

struct FixtureImage {
    FixtureImageFormat format = FixtureImageFormat::RawPixmap;
    Bytes payload; // JPEG file bytes, or raw RGB8 pixels (width*height*3)
    int width = 0;
    int height = 0;
};

struct PageSpec {
    std::vector<FixtureText> texts;
    std::vector<FixtureImage> images;
};

struct ObjectRecord {
    ObjectId id;
    ByteSpan span;
    std::string role; // e.g. "catalog", "page:0", "content:0", "image:0.1"
    Bytes payload;    // pre-encoding stream payload, empty for non-streams
    size_t revision = 0;
};

struct Manifest {
    std::vector<PageSpec> pages; // current logical state
    std::vector<ObjectRecord> objects;
    size_t revision_count = 1;
    uint64_t startxref = 0; // last revision's xref offset
    std::map<std::string, std::string> info;
};

struct FixtureFile {
    Bytes bytes;
    Manifest manifest;
};

struct WriteOptions {
    bool compress_content = true;
    bool xref_stream = false;
    std::map<std::string, std::string> info; // merged over the defaults
};

struct EditScript {
    std::map<size_t, PageSpec> page_edits;
    std::vector<PageSpec> pages_appended;
    std::map<std::string, std::string> info_updates;
};

FixtureFile write_pdf(const std::vector<PageSpec>& pages, const WriteOptions& opts = {});

FixtureFile incremental_save(const FixtureFile& prev, const EditScript& edits,
                             const WriteOptions& opts = {});

// Re-serializes the final revision only; all residual blocks are gone.
Bytes full_save(const Bytes& input);

// The text extract_text is expected to produce for a fixture page.
std::string expected_text(const PageSpec& page);

// A tiny valid baseline JPEG (for image round-trip fixtures).
Bytes tiny_jpeg();

} // namespace pdfrev

#endif
