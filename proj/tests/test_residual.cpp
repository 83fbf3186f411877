#include <doctest.h>

#include <random>
#include <set>

#include "helpers.hpp"
#include "residual.hpp"

using namespace pdfrev;
using namespace pdfrev::test;

TEST_CASE("shadow_objects: edited pages leave content and page shadows") {
    EditedFixture f = make_edited_fixture();
    Document doc = build_revision_chain(Bytes(f.modified.bytes));
    auto shadows = shadow_objects(doc);
    REQUIRE_FALSE(shadows.empty());

    std::set<uint32_t> expected, untouched;
    for (const ObjectRecord& rec : f.modified.manifest.objects) {
        if (rec.role == "content:0" || rec.role == "content:1" ||
            rec.role == "page:0" || rec.role == "page:1")
            expected.insert(rec.id.number);
        if (rec.role == "content:2" || rec.role == "page:2") untouched.insert(rec.id.number);
    }

    std::set<uint32_t> found;
    for (const ShadowObject& s : shadows) {
        found.insert(s.object_number);
        CHECK(s.superseded_revision == 0);
        CHECK(s.superseding_revision == 1);
        CHECK(s.old_span.length > 0);
        CHECK(untouched.count(s.object_number) == 0);
        if (s.kind == ShadowKind::ContentStream || s.kind == ShadowKind::Page)
            CHECK(expected.count(s.object_number) == 1);
    }
    for (uint32_t num : expected) CHECK(found.count(num) == 1);
}

TEST_CASE("shadow_objects: single revision has none") {
    FixtureFile f = write_pdf({text_page({"only"})});
    Document doc = build_revision_chain(Bytes(f.bytes));
    CHECK(shadow_objects(doc).empty());
}

TEST_CASE("shadow_objects: same page edited twice yields one shadow per supersession") {
    FixtureFile f = write_pdf({text_page({"v1"})});
    EditScript e1;
    e1.page_edits[0] = text_page({"v2"});
    FixtureFile g = incremental_save(f, e1);
    EditScript e2;
    e2.page_edits[0] = text_page({"v3"});
    FixtureFile h = incremental_save(g, e2);

    uint32_t content = 0;
    for (const ObjectRecord& rec : h.manifest.objects)
        if (rec.role == "content:0" && rec.revision == 0) content = rec.id.number;
    REQUIRE(content != 0);

    Document doc = build_revision_chain(Bytes(h.bytes));
    size_t edges = 0;
    for (const ShadowObject& s : shadow_objects(doc))
        if (s.object_number == content) {
            ++edges;
            CHECK(s.superseding_revision == s.superseded_revision + 1);
        }
    CHECK(edges == 2);
}

TEST_CASE("shadow old spans are invisible to the final resolution view") {
    EditedFixture f = make_edited_fixture();
    Document doc = build_revision_chain(Bytes(f.modified.bytes));
    const auto& final_view = resolution_view(doc, doc.revision_count() - 1);
    for (const ShadowObject& s : shadow_objects(doc)) {
        for (const auto& [num, entry] : final_view)
            if (entry.in_use && !entry.compressed)
                CHECK(entry.offset != s.old_span.start);
    }
}

TEST_CASE("coverage_map: clean files account for every byte") {
    for (bool xstream : {false, true}) {
        WriteOptions opts;
        opts.xref_stream = xstream;
        EditedFixture f = make_edited_fixture(opts);
        Document doc = build_revision_chain(Bytes(f.modified.bytes));
        CoverageMap cov = coverage_map(doc);
        CAPTURE(xstream);
        CHECK(coverage_is_total(cov, f.modified.bytes.size()));
        CHECK(cov.unaccounted_bytes == 0);
    }
}

TEST_CASE("coverage_map: carve-only documents still get total coverage") {
    Bytes bytes = to_bytes(std::string(
        "1 0 obj\n<</A 1>>\nendobj\njunk junk junk\n2 0 obj\nnull\nendobj\n"));
    Document doc = carve_document(std::move(bytes));
    CoverageMap cov = coverage_map(doc);
    CHECK(coverage_is_total(cov, doc.bytes.size()));
    CHECK(cov.unaccounted_bytes > 0);
}

TEST_CASE("coverage_map: injected slack shows up as one unaccounted span") {
    EditedFixture f = make_edited_fixture();
    // splice a run of 64 'Z' bytes right before the final revision block
    uint64_t at = f.original.bytes.size();
    Bytes doctored = f.modified.bytes;
    doctored.insert(doctored.begin() + at, 64, 'Z');
    // the damaged file no longer passes offset audits; carve it instead
    Document doc = carve_document(std::move(doctored));
    CoverageMap cov = coverage_map(doc);
    CHECK(cov.unaccounted_bytes >= 64);
    bool found = false;
    for (const SpanClass& sc : cov.spans)
        if (sc.kind == SpanKind::Unaccounted && sc.span.start <= at &&
            sc.span.end() >= at + 64)
            found = true;
    CHECK(found);
}

TEST_CASE("diff_revisions: edited pages and superseded objects") {
    EditedFixture f = make_edited_fixture();
    Document doc = build_revision_chain(Bytes(f.modified.bytes));
    RevisionDiff d = diff_revisions(doc, 0, 1);
    CHECK(d.pages_changed == std::vector<size_t>{0, 1});
    CHECK(d.text_before.at(0) == "First page original");
    CHECK(d.text_after.at(0) == "First page edited");
    CHECK(d.text_before.at(1) == "Second page original");
    CHECK(d.text_after.at(1) == "Second page edited");
    CHECK_FALSE(d.objects_added.empty());
    CHECK_FALSE(d.objects_superseded.empty());

    // superseded set matches the shadow edges for this revision pair
    std::set<uint32_t> from_diff, from_shadows;
    for (ObjectId id : d.objects_superseded) from_diff.insert(id.number);
    for (const ShadowObject& s : shadow_objects(doc))
        if (s.superseding_revision == 1) from_shadows.insert(s.object_number);
    CHECK(from_diff == from_shadows);
}

TEST_CASE("diff_revisions: appended page reports as changed and added") {
    FixtureFile f = write_pdf({text_page({"a"}), text_page({"b"}), text_page({"c"})});
    EditScript edits;
    edits.pages_appended.push_back(text_page({"fourth"}));
    FixtureFile g = incremental_save(f, edits);
    Document doc = build_revision_chain(Bytes(g.bytes));

    RevisionDiff d = diff_revisions(doc, 0, 1);
    REQUIRE(d.pages_changed == std::vector<size_t>{3});
    CHECK(d.text_before.count(3) == 0);
    CHECK(d.text_after.at(3) == "fourth");

    uint32_t new_page = 0;
    for (const ObjectRecord& rec : g.manifest.objects)
        if (rec.role == "page:3") new_page = rec.id.number;
    REQUIRE(new_page != 0);
    bool added = false;
    for (ObjectId id : d.objects_added)
        if (id.number == new_page) added = true;
    CHECK(added);
}

TEST_CASE("diff_revisions: identical endpoints are a precondition error") {
    EditedFixture f = make_edited_fixture();
    Document doc = build_revision_chain(Bytes(f.modified.bytes));
    try {
        diff_revisions(doc, 0, 0);
        FAIL("expected BadArgument");
    } catch (const PdfError& e) {
        CHECK(e.code() == ErrorCode::BadArgument);
    }
    CHECK_THROWS_AS(diff_revisions(doc, 0, 7), PdfError);
}

TEST_CASE("coverage totality property over random layered fixtures") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 15; ++trial) {
        WriteOptions opts;
        opts.xref_stream = rng() % 2 == 0;
        FixtureFile f = write_pdf({random_page(rng)}, opts);
        size_t saves = rng() % 3;
        for (size_t s = 0; s < saves; ++s)
            f = incremental_save(f, random_edit_script(rng, f.manifest.pages.size()), opts);
        Document doc = build_revision_chain(Bytes(f.bytes));
        CoverageMap cov = coverage_map(doc);
        CAPTURE(trial);
        CHECK(coverage_is_total(cov, f.bytes.size()));
        CHECK(cov.unaccounted_bytes == 0);
    }
}
