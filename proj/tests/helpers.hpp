#ifndef PDFREV_TEST_HELPERS_HPP
#define PDFREV_TEST_HELPERS_HPP

#include <random>
#include <string>
#include <vector>

#include "fixture.hpp"
#include "residual.hpp"
#include "revisions.hpp"

namespace pdfrev::test {

inline PageSpec text_page(std::initializer_list<std::string> lines,
                          FixtureFont font = FixtureFont::Latin) {
    PageSpec page;
    for (const std::string& line : lines) page.texts.push_back({line, font});
    return page;
}

// Three pages, then one incremental save editing pages 0 and 1.
struct EditedFixture {
    FixtureFile original;
    FixtureFile modified;
};

inline EditedFixture make_edited_fixture(const WriteOptions& opts = {}) {
    EditedFixture f;
    f.original = write_pdf({text_page({"First page original"}),
                            text_page({"Second page original"}),
                            text_page({"Third page untouched"})},
                           opts);
    EditScript edits;
    edits.page_edits[0] = text_page({"First page edited"});
    edits.page_edits[1] = text_page({"Second page edited"});
    f.modified = incremental_save(f.original, edits, opts);
    return f;
}

inline Bytes random_bytes(std::mt19937& rng, size_t n) {
    Bytes out(n);
    for (size_t i = 0; i < n; ++i) out[i] = static_cast<uint8_t>(rng() & 0xFF);
    return out;
}

inline std::string random_ascii(std::mt19937& rng, size_t n) {
    static const char alphabet[] =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789 .,;:!?-";
    std::string out;
    out.reserve(n);
    for (size_t i = 0; i < n; ++i) out += alphabet[rng() % (sizeof(alphabet) - 1)];
    return out;
}

inline PageSpec random_page(std::mt19937& rng) {
    PageSpec page;
    size_t lines = 1 + rng() % 3;
    for (size_t i = 0; i < lines; ++i)
        page.texts.push_back({random_ascii(rng, 8 + rng() % 40), FixtureFont::Latin});
    return page;
}

inline EditScript random_edit_script(std::mt19937& rng, size_t page_count) {
    EditScript edits;
    if (page_count > 0 && rng() % 2 == 0)
        edits.page_edits[rng() % page_count] = random_page(rng);
    if (rng() % 3 == 0) edits.pages_appended.push_back(random_page(rng));
    if (rng() % 4 == 0) edits.info_updates["Subject"] = random_ascii(rng, 12);
    if (edits.page_edits.empty() && edits.pages_appended.empty() && edits.info_updates.empty()) {
        if (page_count > 0)
            edits.page_edits[rng() % page_count] = random_page(rng);
        else
            edits.pages_appended.push_back(random_page(rng));
    }
    return edits;
}

// spans disjoint, sorted, union = [0, file length)
inline bool coverage_is_total(const CoverageMap& map, size_t file_size) {
    uint64_t pos = 0;
    for (const SpanClass& sc : map.spans) {
        if (sc.span.start != pos) return false;
        pos = sc.span.end();
    }
    return pos == file_size;
}

} // namespace pdfrev::test

#endif
