#include "pdfrev.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <string>

#include "extract.hpp"
#include "fixture.hpp"
#include "recover.hpp"
#include "report.hpp"
#include "revisions.hpp"
#include "stego.hpp"

using namespace pdfrev;

struct pdfrev_doc {
    Document doc;
    std::string path;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

pdfrev_status status_of(const PdfError& e) {
    switch (e.code()) {
        case ErrorCode::EncryptedDocument:
        case ErrorCode::NotAppendOnlyTarget:
        case ErrorCode::NoSafeInsertionPoint:
        case ErrorCode::UnsupportedImageFormat:
            return PDFREV_ERR_UNSUPPORTED;
        case ErrorCode::IoError:
            return PDFREV_ERR_IO;
        default:
            return PDFREV_ERR_PARSE;
    }
}

pdfrev_status fill_buf(pdfrev_buf* out, const uint8_t* data, size_t len) {
    if (!out) {
        set_error("output buffer pointer is null");
        return PDFREV_ERR_PARSE;
    }
    out->data = static_cast<uint8_t*>(std::malloc(len ? len : 1));
    if (!out->data) {
        set_error("out of memory");
        return PDFREV_ERR_IO;
    }
    if (len) std::memcpy(out->data, data, len);
    out->len = len;
    return PDFREV_OK;
}

pdfrev_status fill_buf(pdfrev_buf* out, const std::string& s) {
    return fill_buf(out, reinterpret_cast<const uint8_t*>(s.data()), s.size());
}

pdfrev_status fill_buf(pdfrev_buf* out, const Bytes& b) {
    return fill_buf(out, b.data(), b.size());
}

template <typename Fn>
pdfrev_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const PdfError& e) {
        set_error(e.what());
        return status_of(e);
    } catch (const std::exception& e) {
        set_error(e.what());
        return PDFREV_ERR_PARSE;
    }
}

pdfrev_status check_rev(const pdfrev_doc* doc, size_t rev) {
    if (rev < doc->doc.revision_count()) return PDFREV_OK;
    set_error("revision " + std::to_string(rev) + " out of range (file has " +
              std::to_string(doc->doc.revision_count()) + ")");
    return PDFREV_ERR_PARSE;
}

// JSON fixture description -> writer inputs
PageSpec page_spec_from_json(const Json& j) {
    PageSpec page;
    for (const Json& t : j.value("texts", Json::array())) {
        FixtureText text;
        text.text = t.value("text", "");
        std::string font = t.value("font", "latin");
        if (font == "unicode")
            text.font = FixtureFont::IdentityUnicode;
        else if (font == "latin")
            text.font = FixtureFont::Latin;
        else
            throw PdfError(ErrorCode::BadArgument, "unknown fixture font '" + font + "'");
        page.texts.push_back(std::move(text));
    }
    for (const Json& im : j.value("images", Json::array())) {
        FixtureImage image;
        std::string format = im.value("format", "raw");
        if (format == "jpeg") {
            image.format = FixtureImageFormat::Jpeg;
            image.payload = tiny_jpeg();
            image.width = 1;
            image.height = 1;
        } else if (format == "raw") {
            image.format = FixtureImageFormat::RawPixmap;
            image.width = im.value("width", 2);
            image.height = im.value("height", 2);
            uint8_t rgb[3] = {128, 128, 128};
            if (auto it = im.find("fill"); it != im.end() && it->is_array() && it->size() == 3)
                for (int c = 0; c < 3; ++c) rgb[c] = static_cast<uint8_t>((*it)[c].get<int>());
            for (int p = 0; p < image.width * image.height; ++p)
                for (int c = 0; c < 3; ++c) image.payload.push_back(rgb[c]);
        } else {
            throw PdfError(ErrorCode::BadArgument, "unknown fixture image format '" + format + "'");
        }
        page.images.push_back(std::move(image));
    }
    return page;
}

std::map<std::string, std::string> string_map_from_json(const Json& j) {
    std::map<std::string, std::string> out;
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value().get<std::string>();
    return out;
}

} // namespace

extern "C" {

const char* pdfrev_version(void) { return kToolVersion; }

const char* pdfrev_last_error(void) { return g_last_error.c_str(); }

void pdfrev_buf_free(pdfrev_buf* buf) {
    if (!buf) return;
    std::free(buf->data);
    buf->data = nullptr;
    buf->len = 0;
}

pdfrev_status pdfrev_open_bytes(const uint8_t* data, size_t len, uint64_t max_file_size,
                                pdfrev_doc** out) {
    return guarded([&]() -> pdfrev_status {
        if (!data || !out) {
            set_error("null argument");
            return PDFREV_ERR_PARSE;
        }
        BuildOptions opts;
        if (max_file_size) opts.max_file_size = max_file_size;
        auto doc = std::make_unique<pdfrev_doc>();
        doc->doc = build_revision_chain(Bytes(data, data + len), opts);
        *out = doc.release();
        return PDFREV_OK;
    });
}

pdfrev_status pdfrev_open_file(const char* path, uint64_t max_file_size, pdfrev_doc** out) {
    return guarded([&]() -> pdfrev_status {
        if (!path || !out) {
            set_error("null argument");
            return PDFREV_ERR_PARSE;
        }
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            set_error(std::string("cannot open ") + path);
            return PDFREV_ERR_IO;
        }
        Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        if (in.bad()) {
            set_error(std::string("read failure on ") + path);
            return PDFREV_ERR_IO;
        }
        pdfrev_doc* doc = nullptr;
        pdfrev_status st = pdfrev_open_bytes(bytes.data(), bytes.size(), max_file_size, &doc);
        if (st != PDFREV_OK) return st;
        doc->path = path;
        *out = doc;
        return PDFREV_OK;
    });
}

void pdfrev_close(pdfrev_doc* doc) { delete doc; }

size_t pdfrev_revision_count(const pdfrev_doc* doc) {
    return doc ? doc->doc.revision_count() : 0;
}

pdfrev_status pdfrev_report_info(const pdfrev_doc* doc, pdfrev_buf* out_json) {
    return guarded([&]() -> pdfrev_status {
        return fill_buf(out_json, dump_report(report_info(doc->doc, doc->path)));
    });
}

pdfrev_status pdfrev_report_text(const pdfrev_doc* doc, int64_t rev, pdfrev_buf* out_json) {
    return guarded([&]() -> pdfrev_status {
        std::optional<size_t> r;
        if (rev >= 0) {
            if (pdfrev_status st = check_rev(doc, static_cast<size_t>(rev)); st != PDFREV_OK)
                return st;
            r = static_cast<size_t>(rev);
        }
        return fill_buf(out_json, dump_report(report_text(doc->doc, doc->path, r)));
    });
}

pdfrev_status pdfrev_report_diff(const pdfrev_doc* doc, size_t from_rev, size_t to_rev,
                                 pdfrev_buf* out_json) {
    return guarded([&]() -> pdfrev_status {
        return fill_buf(out_json,
                        dump_report(report_diff(doc->doc, doc->path, from_rev, to_rev)));
    });
}

pdfrev_status pdfrev_report_shadows(const pdfrev_doc* doc, pdfrev_buf* out_json) {
    return guarded([&]() -> pdfrev_status {
        return fill_buf(out_json, dump_report(report_shadows(doc->doc, doc->path)));
    });
}

pdfrev_status pdfrev_report_scan(const pdfrev_doc* doc, pdfrev_buf* out_json) {
    return guarded([&]() -> pdfrev_status {
        return fill_buf(out_json, dump_report(report_scan(doc->doc, doc->path)));
    });
}

pdfrev_status pdfrev_report_images(const pdfrev_doc* doc, int64_t rev, pdfrev_buf* out_json) {
    return guarded([&]() -> pdfrev_status {
        std::optional<size_t> r;
        if (rev >= 0) {
            if (pdfrev_status st = check_rev(doc, static_cast<size_t>(rev)); st != PDFREV_OK)
                return st;
            r = static_cast<size_t>(rev);
        }
        return fill_buf(out_json, dump_report(report_images(doc->doc, doc->path, r)));
    });
}

pdfrev_status pdfrev_recover(const pdfrev_doc* doc, size_t rev, int method, pdfrev_buf* out_pdf,
                             pdfrev_buf* out_json) {
    return guarded([&]() -> pdfrev_status {
        if (pdfrev_status st = check_rev(doc, rev); st != PDFREV_OK) return st;
        Bytes out;
        std::string name;
        if (method == PDFREV_RECOVER_TRUNCATE) {
            out = recover_by_truncation(doc->doc, rev);
            name = "truncate";
        } else if (method == PDFREV_RECOVER_REWRITE) {
            out = recover_by_offset_rewrite(doc->doc, rev);
            name = "rewrite";
        } else {
            set_error("unknown recover method " + std::to_string(method));
            return PDFREV_ERR_PARSE;
        }
        if (pdfrev_status st = fill_buf(out_pdf, out); st != PDFREV_OK) return st;
        if (out_json)
            return fill_buf(out_json, dump_report(report_recover(doc->doc, doc->path, rev, name,
                                                                 out.size())));
        return PDFREV_OK;
    });
}

pdfrev_status pdfrev_image_count(const pdfrev_doc* doc, int64_t rev, size_t* out) {
    return guarded([&]() -> pdfrev_status {
        size_t r = rev < 0 ? doc->doc.revision_count() - 1 : static_cast<size_t>(rev);
        if (pdfrev_status st = check_rev(doc, r); st != PDFREV_OK) return st;
        *out = extract_images(doc->doc, r).size();
        return PDFREV_OK;
    });
}

pdfrev_status pdfrev_image_get(const pdfrev_doc* doc, int64_t rev, size_t index,
                               pdfrev_buf* out_data, pdfrev_buf* out_meta_json) {
    return guarded([&]() -> pdfrev_status {
        size_t r = rev < 0 ? doc->doc.revision_count() - 1 : static_cast<size_t>(rev);
        if (pdfrev_status st = check_rev(doc, r); st != PDFREV_OK) return st;
        std::vector<ExtractedImage> images = extract_images(doc->doc, r);
        if (index >= images.size()) {
            set_error("image index out of range");
            return PDFREV_ERR_PARSE;
        }
        const ExtractedImage& im = images[index];
        if (pdfrev_status st = fill_buf(out_data, im.payload); st != PDFREV_OK) return st;
        if (out_meta_json) {
            const char* format = "raw";
            const char* ext = "raw";
            if (im.format == ImageFormat::JPEG) {
                format = "jpeg";
                ext = "jpg";
            } else if (im.format == ImageFormat::JPEG2000) {
                format = "jpeg2000";
                ext = "jp2";
            }
            Json meta{{"revision", r},       {"index", index},
                      {"page", im.page_index}, {"object", im.object_id.number},
                      {"format", format},     {"ext", ext},
                      {"width", im.width},    {"height", im.height},
                      {"bits_per_component", im.bits_per_component},
                      {"color_space", im.color_space}};
            return fill_buf(out_meta_json, dump_report(meta));
        }
        return PDFREV_OK;
    });
}

pdfrev_status pdfrev_hide(const pdfrev_doc* doc, const uint8_t* payload, size_t payload_len,
                          int technique, int64_t at, pdfrev_buf* out_pdf, char* locator_out,
                          size_t locator_cap, pdfrev_buf* out_json) {
    return guarded([&]() -> pdfrev_status {
        if (!payload && payload_len) {
            set_error("null payload");
            return PDFREV_ERR_PARSE;
        }
        Bytes data(payload, payload + payload_len);
        HideResult result;
        if (technique == PDFREV_HIDE_SUPERSEDED) {
            result = hide_superseded(doc->doc.bytes, data);
        } else if (technique == PDFREV_HIDE_SLACK) {
            std::optional<uint64_t> insert_at;
            if (at >= 0) insert_at = static_cast<uint64_t>(at);
            result = hide_in_slack(doc->doc.bytes, data, insert_at);
        } else {
            set_error("unknown hide technique " + std::to_string(technique));
            return PDFREV_ERR_PARSE;
        }
        std::string locator = format_locator(result.locator);
        if (locator_out && locator_cap) {
            std::snprintf(locator_out, locator_cap, "%s", locator.c_str());
            if (locator.size() + 1 > locator_cap) {
                set_error("locator buffer too small");
                return PDFREV_ERR_PARSE;
            }
        }
        if (pdfrev_status st = fill_buf(out_pdf, result.bytes); st != PDFREV_OK) return st;
        if (out_json)
            return fill_buf(out_json,
                            dump_report(report_hide(doc->doc, doc->path, technique,
                                                    result.locator, payload_len,
                                                    result.bytes.size())));
        return PDFREV_OK;
    });
}

pdfrev_status pdfrev_extract_hidden(const pdfrev_doc* doc, const char* locator,
                                    pdfrev_buf* out_payload) {
    return guarded([&]() -> pdfrev_status {
        if (!locator) {
            set_error("null locator");
            return PDFREV_ERR_PARSE;
        }
        Bytes payload = extract_payload(doc->doc.bytes, parse_locator(locator));
        return fill_buf(out_payload, payload);
    });
}

pdfrev_status pdfrev_fixture_build(const char* spec_json, size_t spec_len, pdfrev_buf* out_pdf,
                                   pdfrev_buf* out_manifest_json) {
    return guarded([&]() -> pdfrev_status {
        if (!spec_json) {
            set_error("null fixture description");
            return PDFREV_ERR_PARSE;
        }
        Json spec = Json::parse(std::string(spec_json, spec_len));
        WriteOptions opts;
        opts.compress_content = spec.value("compress", true);
        opts.xref_stream = spec.value("xref_stream", false);
        if (spec.contains("info")) opts.info = string_map_from_json(spec["info"]);

        std::vector<PageSpec> pages;
        for (const Json& p : spec.value("pages", Json::array()))
            pages.push_back(page_spec_from_json(p));

        FixtureFile file = write_pdf(pages, opts);
        for (const Json& update : spec.value("updates", Json::array())) {
            EditScript edits;
            if (update.contains("page_edits"))
                for (auto it = update["page_edits"].begin(); it != update["page_edits"].end();
                     ++it)
                    edits.page_edits[std::stoul(it.key())] = page_spec_from_json(it.value());
            for (const Json& p : update.value("pages_appended", Json::array()))
                edits.pages_appended.push_back(page_spec_from_json(p));
            if (update.contains("info"))
                edits.info_updates = string_map_from_json(update["info"]);
            file = incremental_save(file, edits, opts);
        }

        if (pdfrev_status st = fill_buf(out_pdf, file.bytes); st != PDFREV_OK) return st;
        if (out_manifest_json)
            return fill_buf(out_manifest_json, dump_report(manifest_to_json(file.manifest)));
        return PDFREV_OK;
    });
}

} // extern "C"
