#include <doctest.h>

#include "extract.hpp"
#include "filters.hpp"
#include "helpers.hpp"
#include "pagetree.hpp"

using namespace pdfrev;
using namespace pdfrev::test;

namespace {

// Minimal uncompressed single-page file with a custom content program.
Bytes one_page_pdf(const std::string& content) {
    std::string head = "%PDF-1.4\n";
    std::vector<std::string> objs = {
        "1 0 obj\n<</Type /Catalog /Pages 2 0 R>>\nendobj\n",
        "2 0 obj\n<</Type /Pages /Kids [3 0 R] /Count 1>>\nendobj\n",
        "3 0 obj\n<</Type /Page /Parent 2 0 R /Resources <</Font <</F1 5 0 R>>>> "
        "/Contents 4 0 R>>\nendobj\n",
        "4 0 obj\n<</Length " + std::to_string(content.size()) + ">>\nstream\n" + content +
            "\nendstream\nendobj\n",
        "5 0 obj\n<</Type /Font /Subtype /Type1 /BaseFont /Helvetica "
        "/Encoding /WinAnsiEncoding>>\nendobj\n",
    };
    std::string body;
    std::vector<uint64_t> offsets;
    uint64_t pos = head.size();
    for (const std::string& o : objs) {
        offsets.push_back(pos);
        body += o;
        pos += o.size();
    }
    std::string xref = "xref\n0 6\n0000000000 65535 f\r\n";
    for (uint64_t off : offsets) {
        char line[32];
        std::snprintf(line, sizeof(line), "%010llu 00000 n\r\n",
                      static_cast<unsigned long long>(off));
        xref += line;
    }
    std::string tail = "trailer\n<</Size 6 /Root 1 0 R>>\nstartxref\n" + std::to_string(pos) +
                       "\n%%EOF\n";
    return to_bytes(head + body + xref + tail);
}

} // namespace

TEST_CASE("tokenize_content: BT/Tf/Tj/ET") {
    auto ops = tokenize_content(to_bytes(std::string("BT /F1 12 Tf (Hi) Tj ET")));
    REQUIRE(ops.size() == 4);
    CHECK(ops[0].op == "BT");
    CHECK(ops[0].operands.empty());
    CHECK(ops[1].op == "Tf");
    REQUIRE(ops[1].operands.size() == 2);
    CHECK(ops[1].operands[0].as_name() == "F1");
    CHECK(ops[1].operands[1].as_integer() == 12);
    CHECK(ops[2].op == "Tj");
    CHECK(ops[2].operands[0].as_string().data == to_bytes("Hi"));
    CHECK(ops[3].op == "ET");
}

TEST_CASE("tokenize_content: TJ array operand and empty program") {
    auto ops = tokenize_content(to_bytes(std::string("[(A) -120 (B)] TJ")));
    REQUIRE(ops.size() == 1);
    CHECK(ops[0].op == "TJ");
    REQUIRE(ops[0].operands.size() == 1);
    CHECK(ops[0].operands[0].as_array().size() == 3);

    CHECK(tokenize_content({}).empty());
}

TEST_CASE("tokenize_content: inline image collapses to one BI op") {
    auto ops = tokenize_content(
        to_bytes(std::string("q BI /W 1 /H 1 ID \x01\x02\xff EI Q")));
    bool found = false;
    for (const auto& op : ops)
        if (op.op == "BI") found = true;
    CHECK(found);
    CHECK(ops.back().op == "Q");
}

TEST_CASE("parse_to_unicode: bfrange with incremented destination") {
    std::string cmap =
        "begincmap\n1 beginbfrange\n<0041> <005A> <0041>\nendbfrange\nendcmap\n";
    auto map = parse_to_unicode(to_bytes(cmap));
    CHECK(map.size() == 0x5A - 0x41 + 1);
    CHECK(map.at(0x41) == "A");
    CHECK(map.at(0x5A) == "Z");
}

TEST_CASE("parse_to_unicode: bfchar with surrogate pair") {
    std::string cmap = "begincmap\n1 beginbfchar\n<3A51> <D840DC3E>\nendbfchar\nendcmap\n";
    auto map = parse_to_unicode(to_bytes(cmap));
    REQUIRE(map.count(0x3A51));
    CHECK(map.at(0x3A51) == "\xF0\xA0\x80\xBE"); // U+2003E
}

TEST_CASE("parse_to_unicode: bfrange with array destination, empty cmap") {
    std::string cmap =
        "begincmap\n1 beginbfrange\n<0001> <0002> [<0058> <0059>]\nendbfrange\nendcmap\n";
    auto map = parse_to_unicode(to_bytes(cmap));
    CHECK(map.at(1) == "X");
    CHECK(map.at(2) == "Y");
    CHECK(parse_to_unicode(to_bytes(std::string("begincmap\nendcmap\n"))).empty());
}

TEST_CASE("extract_text: fixture Latin and Unicode pages") {
    PageSpec latin = text_page({"Hello"});
    PageSpec korean = text_page({"한"}, FixtureFont::IdentityUnicode);
    FixtureFile f = write_pdf({latin, korean});
    Document doc = build_revision_chain(Bytes(f.bytes));
    auto pages = extract_text(doc, 0);
    REQUIRE(pages.size() == 2);
    CHECK(pages[0].joined == "Hello");
    CHECK(pages[1].joined == "한");
    CHECK(pages[1].warnings.empty());
}

TEST_CASE("extract_text: no text operators, and repeatability") {
    FixtureFile f = write_pdf({PageSpec{}});
    Document doc = build_revision_chain(Bytes(f.bytes));
    auto pages = extract_text(doc, 0);
    REQUIRE(pages.size() == 1);
    CHECK(pages[0].runs.empty());
    CHECK(pages[0].joined.empty());
    CHECK(extract_text(doc, 0)[0].joined == pages[0].joined);
}

TEST_CASE("extract_text: kerning threshold inserts a space, line breaks on Td") {
    Bytes pdf = one_page_pdf("BT /F1 12 Tf [(A) -300 (B) -100 (C)] TJ 0 -20 Td (D) Tj ET");
    Document doc = build_revision_chain(std::move(pdf));
    auto pages = extract_text(doc, 0);
    REQUIRE(pages.size() == 1);
    CHECK(pages[0].joined == "A BC\nD");
}

TEST_CASE("extract_text: quote operators show text with a break") {
    Bytes pdf = one_page_pdf("BT /F1 12 Tf (first) Tj (second) ' ET");
    Document doc = build_revision_chain(std::move(pdf));
    CHECK(extract_text(doc, 0)[0].joined == "first\nsecond");
}

TEST_CASE("extract_images: JPEG passthrough and raw pixmap geometry") {
    PageSpec page;
    page.images.push_back({FixtureImageFormat::Jpeg, tiny_jpeg(), 1, 1});
    Bytes pix = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
    page.images.push_back({FixtureImageFormat::RawPixmap, pix, 2, 2});
    FixtureFile f = write_pdf({page});
    Document doc = build_revision_chain(Bytes(f.bytes));

    auto images = extract_images(doc, 0);
    REQUIRE(images.size() == 2);
    CHECK(images[0].format == ImageFormat::JPEG);
    CHECK(images[0].payload == tiny_jpeg());
    CHECK(images[1].format == ImageFormat::RawPixmap);
    CHECK(images[1].width == 2);
    CHECK(images[1].height == 2);
    CHECK(images[1].payload == pix);
    CHECK(images[1].payload.size() == 12);
}

TEST_CASE("extract_images: page without XObjects") {
    FixtureFile f = write_pdf({text_page({"no images"})});
    Document doc = build_revision_chain(Bytes(f.bytes));
    CHECK(extract_images(doc, 0).empty());
}

TEST_CASE("pagetree: counts, contents, nesting") {
    FixtureFile f = write_pdf({text_page({"a"}), text_page({"b"}), text_page({"c"})});
    Document doc = build_revision_chain(Bytes(f.bytes));
    CHECK(page_count(doc, 0) == 3);
    auto refs = pages(doc, 0);
    REQUIRE(refs.size() == 3);
    CHECK(refs[0].contents.size() == 1);

    FixtureFile blank = write_pdf({});
    Document bdoc = build_revision_chain(Bytes(blank.bytes));
    CHECK(page_count(bdoc, 0) == 0);
}

TEST_CASE("pagetree: nested /Pages nodes") {
    std::string head = "%PDF-1.4\n";
    std::vector<std::string> objs = {
        "1 0 obj\n<</Type /Catalog /Pages 2 0 R>>\nendobj\n",
        "2 0 obj\n<</Type /Pages /Kids [3 0 R 4 0 R] /Count 5>>\nendobj\n",
        "3 0 obj\n<</Type /Pages /Parent 2 0 R /Kids [5 0 R 6 0 R] /Count 2>>\nendobj\n",
        "4 0 obj\n<</Type /Pages /Parent 2 0 R /Kids [7 0 R 8 0 R 9 0 R] /Count 3>>\nendobj\n",
        "5 0 obj\n<</Type /Page /Parent 3 0 R>>\nendobj\n",
        "6 0 obj\n<</Type /Page /Parent 3 0 R>>\nendobj\n",
        "7 0 obj\n<</Type /Page /Parent 4 0 R>>\nendobj\n",
        "8 0 obj\n<</Type /Page /Parent 4 0 R>>\nendobj\n",
        "9 0 obj\n<</Type /Page /Parent 4 0 R>>\nendobj\n",
    };
    std::string body;
    std::vector<uint64_t> offsets;
    uint64_t pos = head.size();
    for (const std::string& o : objs) {
        offsets.push_back(pos);
        body += o;
        pos += o.size();
    }
    std::string xref = "xref\n0 10\n0000000000 65535 f\r\n";
    for (uint64_t off : offsets) {
        char line[32];
        std::snprintf(line, sizeof(line), "%010llu 00000 n\r\n",
                      static_cast<unsigned long long>(off));
        xref += line;
    }
    std::string tail = "trailer\n<</Size 10 /Root 1 0 R>>\nstartxref\n" + std::to_string(pos) +
                       "\n%%EOF\n";
    Document doc = build_revision_chain(to_bytes(head + body + xref + tail));
    CHECK(page_count(doc, 0) == 5);
    auto refs = pages(doc, 0);
    REQUIRE(refs.size() == 5);
    CHECK(refs[0].page_object.number == 5);
    CHECK(refs[4].page_object.number == 9);
    CHECK(refs[2].contents.empty()); // blank page is not an error
}

TEST_CASE("pagetree: unedited page content identical across revisions") {
    EditedFixture f = make_edited_fixture();
    Document doc = build_revision_chain(Bytes(f.modified.bytes));
    auto r0 = pages(doc, 0);
    auto r1 = pages(doc, 1);
    CHECK(content_program(doc, 0, r0[2]) == content_program(doc, 1, r1[2]));
}
