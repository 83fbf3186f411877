#include "report.hpp"

#include "extract.hpp"
#include "residual.hpp"

namespace pdfrev {

namespace {

Json span_json(ByteSpan span) {
    return Json{{"start", span.start}, {"length", span.length}};
}

Json info_json(const std::map<std::string, std::string>& info) {
    Json j = Json::object();
    for (const auto& [k, v] : info) j[k] = v;
    return j;
}

size_t entry_count(const XrefSection& xref) {
    size_t n = 0;
    for (const auto& sub : xref.subsections) n += sub.entries.size();
    return n;
}

const char* shadow_kind_name(ShadowKind kind) {
    switch (kind) {
        case ShadowKind::ContentStream: return "content-stream";
        case ShadowKind::Page: return "page";
        case ShadowKind::Resource: return "resource";
        case ShadowKind::Catalog: return "catalog";
        case ShadowKind::Other: return "other";
    }
    return "other";
}

const char* hidden_kind_name(HiddenKind kind) {
    switch (kind) {
        case HiddenKind::UnaccountedSpan: return "UnaccountedSpan";
        case HiddenKind::UnreferencedStream: return "UnreferencedStream";
        case HiddenKind::OrphanObject: return "OrphanObject";
    }
    return "UnaccountedSpan";
}

PayloadLocator candidate_locator(const HiddenCandidate& c) {
    PayloadLocator loc;
    loc.technique = c.kind == HiddenKind::UnreferencedStream ? HideTechnique::SupersededStream
                                                             : HideTechnique::SlackInjection;
    loc.span = c.span;
    loc.object_id = c.object_id;
    return loc;
}

Json page_texts_json(const Document& doc, size_t rev) {
    Json pages = Json::array();
    for (const PageText& pt : extract_text(doc, rev)) {
        Json p;
        p["index"] = pt.page_index;
        p["text"] = pt.joined;
        if (!pt.warnings.empty()) p["warnings"] = pt.warnings;
        pages.push_back(std::move(p));
    }
    return pages;
}

const char* image_format_name(ImageFormat f) {
    switch (f) {
        case ImageFormat::JPEG: return "jpeg";
        case ImageFormat::JPEG2000: return "jpeg2000";
        case ImageFormat::RawPixmap: return "raw";
    }
    return "raw";
}

} // namespace

Json base_report(const Document& doc, const std::string& command,
                 const std::string& input_path) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    j["input_path"] = input_path;
    j["file_size"] = doc.bytes.size();
    j["header_version"] = doc.header_version;
    j["revision_count"] = doc.revision_count();
    Json revs = Json::array();
    for (const Revision& rev : doc.revisions) {
        Json r;
        r["index"] = rev.index;
        r["byte_range"] = Json{{"start", rev.block_span.start}, {"end", rev.block_span.end()}};
        r["cumulative_size"] = rev.cumulative_end;
        r["xref_offset"] = rev.xref_offset;
        r["xref_form"] = rev.xref.is_stream ? "stream" : "table";
        r["object_count"] = entry_count(rev.xref);
        r["info"] = info_json(extract_info(doc, rev.index));
        revs.push_back(std::move(r));
    }
    j["revisions"] = std::move(revs);
    j["anomalies"] = doc.anomalies;
    return j;
}

Json report_info(const Document& doc, const std::string& input_path) {
    return base_report(doc, "info", input_path);
}

Json report_text(const Document& doc, const std::string& input_path,
                 std::optional<size_t> rev) {
    Json j = base_report(doc, "text", input_path);
    Json out = Json::array();
    if (rev) {
        out.push_back(Json{{"revision", *rev}, {"pages", page_texts_json(doc, *rev)}});
    } else {
        for (size_t r = 0; r < doc.revision_count(); ++r)
            out.push_back(Json{{"revision", r}, {"pages", page_texts_json(doc, r)}});
    }
    j["text"] = std::move(out);
    return j;
}

Json report_diff(const Document& doc, const std::string& input_path, size_t from, size_t to) {
    Json j = base_report(doc, "diff", input_path);
    RevisionDiff diff = diff_revisions(doc, from, to);
    Json d;
    d["from"] = diff.from_rev;
    d["to"] = diff.to_rev;
    d["pages_changed"] = diff.pages_changed;
    Json before = Json::object(), after = Json::object();
    for (const auto& [p, t] : diff.text_before) before[std::to_string(p)] = t;
    for (const auto& [p, t] : diff.text_after) after[std::to_string(p)] = t;
    d["text_before"] = std::move(before);
    d["text_after"] = std::move(after);
    auto numbers = [](const std::vector<ObjectId>& ids) {
        Json a = Json::array();
        for (ObjectId id : ids) a.push_back(id.number);
        return a;
    };
    d["objects_added"] = numbers(diff.objects_added);
    d["objects_superseded"] = numbers(diff.objects_superseded);
    d["objects_freed"] = numbers(diff.objects_freed);
    j["diff"] = std::move(d);
    return j;
}

Json report_shadows(const Document& doc, const std::string& input_path) {
    Json j = base_report(doc, "shadows", input_path);
    Json list = Json::array();
    for (const ShadowObject& s : shadow_objects(doc)) {
        Json e;
        e["object"] = s.object_number;
        e["kind"] = shadow_kind_name(s.kind);
        e["superseded_revision"] = s.superseded_revision;
        e["superseding_revision"] = s.superseding_revision;
        e["old_span"] = span_json(s.old_span);
        e["new_span"] = span_json(s.new_span);
        list.push_back(std::move(e));
    }
    j["shadows"] = std::move(list);
    return j;
}

Json report_scan(const Document& doc, const std::string& input_path) {
    Json j = base_report(doc, "scan", input_path);
    CoverageMap cov = coverage_map(doc);
    Json spans = Json::array();
    for (const SpanClass& sc : cov.spans) {
        Json s;
        s["start"] = sc.span.start;
        s["length"] = sc.span.length;
        s["kind"] = span_kind_name(sc.kind);
        if (sc.owner_object) s["object"] = sc.owner_object->number;
        if (sc.owner_revision) s["revision"] = *sc.owner_revision;
        spans.push_back(std::move(s));
    }
    j["coverage"] = Json{{"unaccounted_bytes", cov.unaccounted_bytes}, {"spans", std::move(spans)}};
    Json cands = Json::array();
    for (const HiddenCandidate& c : detect_hidden(doc)) {
        Json e;
        e["reason"] = hidden_kind_name(c.kind);
        e["locator"] = format_locator(candidate_locator(c));
        e["start"] = c.span.start;
        e["length"] = c.span.length;
        if (c.object_id) e["object"] = c.object_id->number;
        e["entropy"] = c.entropy;
        e["note"] = c.note;
        cands.push_back(std::move(e));
    }
    j["candidates"] = std::move(cands);
    return j;
}

Json report_images(const Document& doc, const std::string& input_path,
                   std::optional<size_t> rev) {
    Json j = base_report(doc, "images", input_path);
    Json list = Json::array();
    size_t first = rev ? *rev : 0;
    size_t last = rev ? *rev : doc.revision_count() - 1;
    for (size_t r = first; r <= last && r < doc.revision_count(); ++r) {
        std::vector<std::string> warnings;
        size_t idx = 0;
        for (const ExtractedImage& im : extract_images(doc, r, &warnings)) {
            Json e;
            e["revision"] = r;
            e["index"] = idx++;
            e["page"] = im.page_index;
            e["object"] = im.object_id.number;
            e["format"] = image_format_name(im.format);
            e["width"] = im.width;
            e["height"] = im.height;
            e["bits_per_component"] = im.bits_per_component;
            e["color_space"] = im.color_space;
            e["size"] = im.payload.size();
            list.push_back(std::move(e));
        }
        for (const std::string& w : warnings) j["anomalies"].push_back(w);
    }
    j["images"] = std::move(list);
    return j;
}

Json report_recover(const Document& doc, const std::string& input_path, size_t rev,
                    const std::string& method, uint64_t output_size) {
    Json j = base_report(doc, "recover", input_path);
    j["recover"] =
        Json{{"revision", rev}, {"method", method}, {"output_size", output_size}};
    return j;
}

Json report_hide(const Document& doc, const std::string& input_path, int technique,
                 const PayloadLocator& locator, uint64_t payload_size, uint64_t output_size) {
    Json j = base_report(doc, "hide", input_path);
    j["hide"] = Json{{"technique", technique},
                     {"locator", format_locator(locator)},
                     {"payload_size", payload_size},
                     {"output_size", output_size}};
    return j;
}

Json manifest_to_json(const Manifest& manifest) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["revision_count"] = manifest.revision_count;
    j["startxref"] = manifest.startxref;
    j["info"] = info_json(manifest.info);
    Json pages = Json::array();
    for (const PageSpec& page : manifest.pages) {
        Json p;
        Json texts = Json::array();
        for (const FixtureText& t : page.texts)
            texts.push_back(Json{
                {"text", t.text},
                {"font", t.font == FixtureFont::Latin ? "latin" : "unicode"}});
        p["texts"] = std::move(texts);
        Json images = Json::array();
        for (const FixtureImage& im : page.images)
            images.push_back(Json{
                {"format", im.format == FixtureImageFormat::Jpeg ? "jpeg" : "raw"},
                {"width", im.width},
                {"height", im.height},
                {"size", im.payload.size()}});
        p["images"] = std::move(images);
        p["expected_text"] = expected_text(page);
        pages.push_back(std::move(p));
    }
    j["pages"] = std::move(pages);
    Json objects = Json::array();
    for (const ObjectRecord& rec : manifest.objects)
        objects.push_back(Json{{"object", rec.id.number},
                               {"revision", rec.revision},
                               {"role", rec.role},
                               {"start", rec.span.start},
                               {"length", rec.span.length}});
    j["objects"] = std::move(objects);
    return j;
}

std::string dump_report(const Json& j) { return j.dump(2) + "\n"; }

} // namespace pdfrev
