#include <doctest.h>

#include "filters.hpp"
#include "helpers.hpp"
#include "revisions.hpp"

using namespace pdfrev;
using namespace pdfrev::test;

namespace {
FileImage img(const Bytes& b) { return FileImage(b.data(), b.size()); }
} // namespace

TEST_CASE("parse_startxref: fixture value and junk tolerance") {
    FixtureFile f = write_pdf({text_page({"hello"})});
    CHECK(parse_startxref(img(f.bytes)) == f.manifest.startxref);

    Bytes junked = f.bytes;
    for (int i = 0; i < 100; ++i) junked.push_back('#');
    CHECK(parse_startxref(img(junked)) == f.manifest.startxref);

    Bytes empty;
    CHECK_THROWS_AS(parse_startxref(img(empty)), PdfError);
}

TEST_CASE("parse_xref_at: classic table with a 106 22 subsection") {
    std::string table = "xref\n106 22\n";
    table += "0000001484 00000 n\r\n"; // object 106
    for (int i = 1; i < 21; ++i) {
        char line[32];
        std::snprintf(line, sizeof(line), "%010d 00000 n\r\n", 2000 + i);
        table += line;
    }
    table += "0000000000 65535 f\r\n"; // object 127: free
    table += "trailer\n<</Size 128 /Root 1 0 R>>\n";
    Bytes bytes = to_bytes(table);

    auto [xref, trailer] = parse_xref_at(img(bytes), 0);
    REQUIRE(xref.subsections.size() == 1);
    CHECK(xref.subsections[0].first_object_number == 106);
    REQUIRE(xref.subsections[0].entries.size() == 22);

    const XrefEntry& first = xref.subsections[0].entries[0];
    CHECK(first.object_number == 106);
    CHECK(first.offset == 1484);
    CHECK(first.generation == 0);
    CHECK(first.in_use);

    const XrefEntry& last = xref.subsections[0].entries[21];
    CHECK_FALSE(last.in_use);
    CHECK(last.generation == 65535);

    CHECK(trailer.dict.at("Size").as_integer() == 128);
}

TEST_CASE("parse_xref_at: not an xref") {
    Bytes bytes = to_bytes(std::string("hello world"));
    CHECK_THROWS_AS(parse_xref_at(img(bytes), 0), PdfError);
}

TEST_CASE("build_revision_chain: revision counts and growth") {
    EditedFixture f = make_edited_fixture();
    Document one = build_revision_chain(Bytes(f.original.bytes));
    CHECK(one.revision_count() == 1);

    Document two = build_revision_chain(Bytes(f.modified.bytes));
    REQUIRE(two.revision_count() == 2);
    CHECK(two.revisions[0].cumulative_end == f.original.bytes.size());
    CHECK(two.revisions[1].cumulative_end == f.modified.bytes.size());
    CHECK(two.anomalies.empty());

    EditScript more;
    more.page_edits[2] = text_page({"Third page now edited"});
    FixtureFile third = incremental_save(f.modified, more);
    Document three = build_revision_chain(Bytes(third.bytes));
    REQUIRE(three.revision_count() == 3);
    CHECK(three.revisions[0].cumulative_end < three.revisions[1].cumulative_end);
    CHECK(three.revisions[1].cumulative_end < three.revisions[2].cumulative_end);
}

TEST_CASE("build_revision_chain: cross-reference stream form") {
    WriteOptions opts;
    opts.xref_stream = true;
    EditedFixture f = make_edited_fixture(opts);
    Document doc = build_revision_chain(Bytes(f.modified.bytes));
    REQUIRE(doc.revision_count() == 2);
    CHECK(doc.revisions[0].xref.is_stream);
    CHECK(doc.revisions[1].xref.is_stream);
}

TEST_CASE("build_revision_chain: encrypted documents are refused") {
    std::string head = "%PDF-1.4\n";
    std::string obj = "1 0 obj\n<</Type /Catalog>>\nendobj\n";
    std::string xref = "xref\n0 2\n0000000000 65535 f\r\n0000000009 00000 n\r\n";
    std::string tail = "trailer\n<</Size 2 /Root 1 0 R /Encrypt 9 0 R>>\nstartxref\n" +
                       std::to_string(head.size() + obj.size()) + "\n%%EOF\n";
    Bytes bytes = to_bytes(head + obj + xref + tail);
    try {
        build_revision_chain(std::move(bytes));
        FAIL("expected EncryptedDocument");
    } catch (const PdfError& e) {
        CHECK(e.code() == ErrorCode::EncryptedDocument);
    }
}

TEST_CASE("resolve: edited object moves between revisions, untouched object does not") {
    EditedFixture f = make_edited_fixture();
    Document doc = build_revision_chain(Bytes(f.modified.bytes));

    uint32_t edited = 0, untouched = 0;
    for (const ObjectRecord& rec : f.modified.manifest.objects) {
        if (rec.role == "content:0" && rec.revision == 0) edited = rec.id.number;
        if (rec.role == "content:2") untouched = rec.id.number;
    }
    REQUIRE(edited != 0);
    REQUIRE(untouched != 0);

    Resolved r0 = resolve(doc, 0, {edited, 0});
    Resolved r1 = resolve(doc, 1, {edited, 0});
    CHECK(r0.span.start != r1.span.start);
    CHECK(r1.span.start >= f.original.bytes.size()); // added-block copy

    CHECK(resolve(doc, 0, {untouched, 0}).span.start ==
          resolve(doc, 1, {untouched, 0}).span.start);

    try {
        resolve(doc, 0, {9999, 0});
        FAIL("expected UnknownObject");
    } catch (const PdfError& e) {
        CHECK(e.code() == ErrorCode::UnknownObject);
    }
}

TEST_CASE("resolve: objects inside an object stream") {
    // hand-built file: object 4 lives at index 1 of object stream 2
    std::string head = "%PDF-1.5\n";
    Bytes objstm_payload = to_bytes(std::string("3 0 4 9 <</A 1>> <</B 2>>"));
    Bytes compressed = flate_encode(objstm_payload);

    std::string stm = "2 0 obj\n<</Type /ObjStm /N 2 /First 8 /Filter /FlateDecode /Length " +
                      std::to_string(compressed.size()) + ">>\nstream\n" +
                      std::string(compressed.begin(), compressed.end()) +
                      "\nendstream\nendobj\n";
    std::string cat = "1 0 obj\n<</Type /Catalog>>\nendobj\n";
    uint64_t off_cat = head.size();
    uint64_t off_stm = off_cat + cat.size();
    uint64_t off_xref = off_stm + stm.size();

    // xref stream object 5: entries for objects 0..5
    Bytes rows;
    auto row = [&rows](uint8_t type, uint32_t f2, uint16_t f3) {
        rows.push_back(type);
        for (int s = 24; s >= 0; s -= 8) rows.push_back(static_cast<uint8_t>(f2 >> s));
        rows.push_back(static_cast<uint8_t>(f3 >> 8));
        rows.push_back(static_cast<uint8_t>(f3 & 0xFF));
    };
    row(0, 0, 0xFFFF);
    row(1, static_cast<uint32_t>(off_cat), 0);
    row(1, static_cast<uint32_t>(off_stm), 0);
    row(2, 2, 0); // object 3: in stream 2, index 0
    row(2, 2, 1); // object 4: in stream 2, index 1
    row(1, static_cast<uint32_t>(off_xref), 0);
    Bytes xrows = flate_encode(rows);
    std::string xrefobj =
        "5 0 obj\n<</Type /XRef /Size 6 /W [1 4 2] /Index [0 6] /Root 1 0 R "
        "/Filter /FlateDecode /Length " +
        std::to_string(xrows.size()) + ">>\nstream\n" +
        std::string(xrows.begin(), xrows.end()) + "\nendstream\nendobj\n";
    std::string tail = "startxref\n" + std::to_string(off_xref) + "\n%%EOF\n";

    Bytes file = to_bytes(head + cat + stm + xrefobj + tail);
    Document doc = build_revision_chain(std::move(file));
    REQUIRE(doc.revision_count() == 1);

    Resolved r3 = resolve(doc, 0, {3, 0});
    REQUIRE(r3.value.is_dict());
    CHECK(r3.value.dict_get("A")->as_integer() == 1);
    Resolved r4 = resolve(doc, 0, {4, 0});
    REQUIRE(r4.value.is_dict());
    CHECK(r4.value.dict_get("B")->as_integer() == 2);
}

TEST_CASE("extract_info: per-revision metadata") {
    WriteOptions opts;
    opts.info["Title"] = "My Doc";
    FixtureFile f = write_pdf({text_page({"x"})}, opts);
    EditScript edits;
    edits.page_edits[0] = text_page({"y"});
    FixtureFile g = incremental_save(f, edits, opts);

    Document doc = build_revision_chain(Bytes(g.bytes));
    auto info0 = extract_info(doc, 0);
    auto info1 = extract_info(doc, 1);
    CHECK(info0.at("Title") == "My Doc");
    CHECK(info1.at("Title") == "My Doc");
    CHECK(info0.at("ModDate") != info1.at("ModDate"));
}

TEST_CASE("extract_info: missing /Info yields an empty map") {
    std::string head = "%PDF-1.4\n";
    std::string obj = "1 0 obj\n<</Type /Catalog>>\nendobj\n";
    std::string xref = "xref\n0 2\n0000000000 65535 f\r\n0000000009 00000 n\r\n";
    std::string tail = "trailer\n<</Size 2 /Root 1 0 R>>\nstartxref\n" +
                       std::to_string(head.size() + obj.size()) + "\n%%EOF\n";
    Document doc = build_revision_chain(to_bytes(head + obj + xref + tail));
    CHECK(extract_info(doc, 0).empty());
}

TEST_CASE("carve_document: files without a usable chain still expose objects") {
    Bytes bytes = to_bytes(std::string("1 0 obj\n<</A 1>>\nendobj\n2 0 obj\nnull\nendobj\n"));
    Document doc = carve_document(std::move(bytes));
    CHECK(doc.revision_count() == 0);
    CHECK_FALSE(doc.anomalies.empty());
}

TEST_CASE("prev cycle is detected") {
    FixtureFile f = write_pdf({text_page({"x"})});
    // append a second revision whose /Prev points at its own xref
    std::string block = "\nxref\n0 1\n0000000000 65535 f\r\n";
    uint64_t xref_off = f.bytes.size() + 1;
    block += "trailer\n<</Size 1 /Root 1 0 R /Prev " + std::to_string(xref_off) +
             ">>\nstartxref\n" + std::to_string(xref_off) + "\n%%EOF\n";
    Bytes bytes = f.bytes;
    bytes.insert(bytes.end(), block.begin(), block.end());
    try {
        build_revision_chain(std::move(bytes));
        FAIL("expected PrevCycle");
    } catch (const PdfError& e) {
        CHECK(e.code() == ErrorCode::PrevCycle);
    }
}
