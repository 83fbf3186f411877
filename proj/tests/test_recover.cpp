#include <doctest.h>

#include <random>

#include "extract.hpp"
#include "helpers.hpp"
#include "recover.hpp"

using namespace pdfrev;
using namespace pdfrev::test;

namespace {

std::vector<std::string> texts_of(const Document& doc, size_t rev) {
    std::vector<std::string> out;
    for (const PageText& p : extract_text(doc, rev)) out.push_back(p.joined);
    return out;
}

FixtureFile three_revisions(const WriteOptions& opts = {}) {
    EditedFixture f = make_edited_fixture(opts);
    EditScript more;
    more.page_edits[2] = text_page({"Third page finally edited"});
    return incremental_save(f.modified, more, opts);
}

} // namespace

TEST_CASE("truncation to the last revision is the identity") {
    FixtureFile f = three_revisions();
    Document doc = build_revision_chain(Bytes(f.bytes));
    CHECK(recover_by_truncation(doc, doc.revision_count() - 1) == f.bytes);
}

TEST_CASE("truncation to revision 0 reproduces the original bytes") {
    EditedFixture f = make_edited_fixture();
    Document doc = build_revision_chain(Bytes(f.modified.bytes));
    CHECK(recover_by_truncation(doc, 0) == f.original.bytes);
}

TEST_CASE("truncation to a middle revision re-parses with fewer revisions") {
    FixtureFile f = three_revisions();
    Document doc = build_revision_chain(Bytes(f.bytes));
    REQUIRE(doc.revision_count() == 3);

    Bytes mid = recover_by_truncation(doc, 1);
    Document again = build_revision_chain(Bytes(mid));
    CHECK(again.revision_count() == 2);

    // idempotence: recovering the recovered file changes nothing
    CHECK(recover_by_truncation(again, 1) == mid);
}

TEST_CASE("truncation preserves the target revision's text") {
    FixtureFile f = three_revisions();
    Document doc = build_revision_chain(Bytes(f.bytes));
    for (size_t rev = 0; rev < doc.revision_count(); ++rev) {
        Document rec = build_revision_chain(recover_by_truncation(doc, rev));
        CAPTURE(rev);
        CHECK(texts_of(rec, rec.revision_count() - 1) == texts_of(doc, rev));
    }
}

TEST_CASE("offset rewrite keeps the file size") {
    FixtureFile f = three_revisions();
    Document doc = build_revision_chain(Bytes(f.bytes));
    for (size_t rev = 0; rev < doc.revision_count(); ++rev) {
        CAPTURE(rev);
        CHECK(recover_by_offset_rewrite(doc, rev).size() == f.bytes.size());
    }
}

TEST_CASE("offset rewrite to the last revision is byte-identical") {
    FixtureFile f = three_revisions();
    Document doc = build_revision_chain(Bytes(f.bytes));
    CHECK(recover_by_offset_rewrite(doc, doc.revision_count() - 1) == f.bytes);
}

TEST_CASE("offset rewrite restores the target revision's text in the final view") {
    FixtureFile f = three_revisions();
    Document doc = build_revision_chain(Bytes(f.bytes));
    for (size_t rev = 0; rev < doc.revision_count(); ++rev) {
        Document rec = build_revision_chain(recover_by_offset_rewrite(doc, rev));
        CAPTURE(rev);
        CHECK(texts_of(rec, rec.revision_count() - 1) == texts_of(doc, rev));
    }
}

TEST_CASE("recovery agrees across methods over random fixtures") {
    std::mt19937 rng(123);
    for (int trial = 0; trial < 15; ++trial) {
        FixtureFile f = write_pdf({random_page(rng), random_page(rng)});
        size_t saves = 1 + rng() % 2;
        for (size_t s = 0; s < saves; ++s)
            f = incremental_save(f, random_edit_script(rng, f.manifest.pages.size()));
        Document doc = build_revision_chain(Bytes(f.bytes));
        size_t rev = rng() % doc.revision_count();
        CAPTURE(trial);
        CAPTURE(rev);

        Bytes trunc = recover_by_truncation(doc, rev);
        CHECK(trunc.size() == doc.revisions[rev].cumulative_end);
        Document td = build_revision_chain(Bytes(trunc));

        Document rd = build_revision_chain(recover_by_offset_rewrite(doc, rev));
        CHECK(texts_of(td, td.revision_count() - 1) ==
              texts_of(rd, rd.revision_count() - 1));
    }
}

TEST_CASE("recovery rejects an out-of-range revision") {
    FixtureFile f = write_pdf({text_page({"x"})});
    Document doc = build_revision_chain(Bytes(f.bytes));
    CHECK_THROWS_AS(recover_by_truncation(doc, 5), PdfError);
    CHECK_THROWS_AS(recover_by_offset_rewrite(doc, 5), PdfError);
}
