// pdfrev command-line front end. Talks to the library through the C API only;
// reports go to stdout as JSON, progress notes to stderr.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdfrev.h"

namespace {

namespace fs = std::filesystem;

struct Global {
    bool quiet = false;
    bool force = false;
    uint64_t max_file_size = 0; // 0 = library default (1 GiB)
};

void note(const Global& g, const std::string& msg) {
    if (!g.quiet) std::cerr << msg << "\n";
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

int fail(int code, const std::string& msg) {
    std::cerr << "{\"error\": \"" << json_escape(msg) << "\"}\n";
    return code;
}

int fail_api(pdfrev_status st) { return fail(static_cast<int>(st), pdfrev_last_error()); }

struct DocHandle {
    pdfrev_doc* doc = nullptr;
    ~DocHandle() { pdfrev_close(doc); }
};

struct BufHandle {
    pdfrev_buf buf{nullptr, 0};
    ~BufHandle() { pdfrev_buf_free(&buf); }
    std::string str() const { return std::string(reinterpret_cast<char*>(buf.data), buf.len); }
};

int open_doc(const Global& g, const std::string& path, DocHandle& h) {
    pdfrev_status st = pdfrev_open_file(path.c_str(), g.max_file_size, &h.doc);
    if (st != PDFREV_OK) return fail_api(st);
    return 0;
}

int write_output(const Global& g, const std::string& path, const uint8_t* data, size_t len) {
    if (!g.force && fs::exists(path))
        return fail(3, "output path exists: " + path + " (use --force to overwrite)");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return fail(3, "cannot open output path: " + path);
    out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(len));
    out.close();
    if (!out) return fail(3, "write failure: " + path);
    return 0;
}

std::optional<std::vector<uint8_t>> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::vector<uint8_t> data((std::istreambuf_iterator<char>(in)),
                              std::istreambuf_iterator<char>());
    if (in.bad()) return std::nullopt;
    return data;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pdfrev — PDF revision forensics"};
    app.require_subcommand(1);
    app.fallthrough(); // allow global flags after the subcommand name

    Global g;
    app.add_flag("--quiet", g.quiet, "suppress progress output on stderr");
    app.add_flag("--force", g.force, "allow overwriting existing output files");
    app.add_option("--max-file-size", g.max_file_size, "input size limit in bytes (default 1 GiB)");

    std::string file, out_path, payload_path, locator, method = "truncate";
    long long rev = -1, from_rev = 0, to_rev = 0, at = -1;
    bool all_revs = false;
    int technique = 1;

    CLI::App* info = app.add_subcommand("info", "revision chain and metadata summary");
    info->add_option("file", file)->required();

    CLI::App* recover = app.add_subcommand("recover", "write an earlier revision as a PDF");
    recover->add_option("file", file)->required();
    recover->add_option("--rev", rev, "revision to recover")->required();
    recover->add_option("--method", method)->check(CLI::IsMember({"truncate", "rewrite"}));
    recover->add_option("-o,--output", out_path, "output PDF path");

    CLI::App* text = app.add_subcommand("text", "per-page text for one or all revisions");
    text->add_option("file", file)->required();
    text->add_option("--rev", rev);
    text->add_flag("--all", all_revs, "emit every revision");

    CLI::App* images = app.add_subcommand("images", "extract page images");
    images->add_option("file", file)->required();
    images->add_option("--rev", rev);
    images->add_option("-o,--output", out_path, "output directory")->required();

    CLI::App* diff = app.add_subcommand("diff", "compare two revisions");
    diff->add_option("file", file)->required();
    diff->add_option("--from", from_rev)->required();
    diff->add_option("--to", to_rev)->required();

    CLI::App* shadows = app.add_subcommand("shadows", "superseded (residual) objects");
    shadows->add_option("file", file)->required();

    CLI::App* scan = app.add_subcommand("scan", "byte coverage and hidden-data candidates");
    scan->add_option("file", file)->required();

    CLI::App* hide = app.add_subcommand("hide", "plant a payload in a copy of the file");
    hide->add_option("file", file)->required();
    hide->add_option("--payload", payload_path, "binary payload file")->required();
    hide->add_option("--technique", technique)->check(CLI::IsMember({1, 2}))->required();
    hide->add_option("--at", at, "insertion offset (technique 2)");
    hide->add_option("-o,--output", out_path)->required();

    CLI::App* extract = app.add_subcommand("extract-hidden", "recover a planted payload");
    extract->add_option("file", file)->required();
    extract->add_option("--at", locator, "locator technique:offset:length[:obj]")->required();
    extract->add_option("-o,--output", out_path)->required();

    CLI::App* fixture = app.add_subcommand("fixture", "build a deterministic test PDF");
    fixture->add_option("spec", file, "JSON description")->required();
    fixture->add_option("-o,--output", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage errors are exit 1 regardless of CLI11's code
    }

    if (fixture->parsed()) {
        auto spec = read_file(file);
        if (!spec) return fail(3, "cannot read " + file);
        BufHandle pdf, manifest;
        pdfrev_status st =
            pdfrev_fixture_build(reinterpret_cast<const char*>(spec->data()), spec->size(),
                                 &pdf.buf, &manifest.buf);
        if (st != PDFREV_OK) return fail_api(st);
        if (int rc = write_output(g, out_path, pdf.buf.data, pdf.buf.len)) return rc;
        std::string manifest_path = out_path + ".manifest.json";
        if (int rc = write_output(g, manifest_path, manifest.buf.data, manifest.buf.len))
            return rc;
        note(g, "wrote " + out_path + " and " + manifest_path);
        std::cout << manifest.str();
        return 0;
    }

    DocHandle doc;
    if (int rc = open_doc(g, file, doc)) return rc;
    note(g, file + ": " + std::to_string(pdfrev_revision_count(doc.doc)) + " revision(s)");

    if (info->parsed()) {
        BufHandle json;
        pdfrev_status st = pdfrev_report_info(doc.doc, &json.buf);
        if (st != PDFREV_OK) return fail_api(st);
        std::cout << json.str();
        return 0;
    }

    if (recover->parsed()) {
        int m = method == "rewrite" ? PDFREV_RECOVER_REWRITE : PDFREV_RECOVER_TRUNCATE;
        BufHandle pdf, json;
        pdfrev_status st =
            pdfrev_recover(doc.doc, static_cast<size_t>(rev), m, &pdf.buf, &json.buf);
        if (st != PDFREV_OK) return fail_api(st);
        if (out_path.empty()) {
            char revtag[16];
            std::snprintf(revtag, sizeof(revtag), "rev%03lld", rev);
            fs::path p(file);
            out_path = (p.parent_path() /
                        (p.stem().string() + "." + revtag + "." + method + ".pdf"))
                           .string();
        }
        if (int rc = write_output(g, out_path, pdf.buf.data, pdf.buf.len)) return rc;
        note(g, "wrote " + out_path);
        std::cout << json.str();
        return 0;
    }

    if (text->parsed()) {
        int64_t want = all_revs ? -1
                                : (rev >= 0 ? rev
                                            : static_cast<int64_t>(
                                                  pdfrev_revision_count(doc.doc)) -
                                                  1);
        BufHandle json;
        pdfrev_status st = pdfrev_report_text(doc.doc, want, &json.buf);
        if (st != PDFREV_OK) return fail_api(st);
        std::cout << json.str();
        return 0;
    }

    if (images->parsed()) {
        std::error_code ec;
        fs::create_directories(out_path, ec);
        if (ec) return fail(3, "cannot create directory " + out_path);
        size_t count = 0;
        pdfrev_status st = pdfrev_image_count(doc.doc, rev, &count);
        if (st != PDFREV_OK) return fail_api(st);
        for (size_t i = 0; i < count; ++i) {
            BufHandle data, meta;
            st = pdfrev_image_get(doc.doc, rev, i, &data.buf, &meta.buf);
            if (st != PDFREV_OK) return fail_api(st);
            std::string meta_str = meta.str();
            std::string ext = "raw";
            if (auto pos = meta_str.find("\"ext\": \""); pos != std::string::npos) {
                pos += 8;
                ext = meta_str.substr(pos, meta_str.find('"', pos) - pos);
            }
            std::string base = out_path + "/image-" + std::to_string(i);
            if (int rc = write_output(g, base + "." + ext, data.buf.data, data.buf.len))
                return rc;
            if (int rc = write_output(g, base + ".json", meta.buf.data, meta.buf.len)) return rc;
            note(g, "wrote " + base + "." + ext);
        }
        BufHandle json;
        st = pdfrev_report_images(doc.doc, rev, &json.buf);
        if (st != PDFREV_OK) return fail_api(st);
        std::cout << json.str();
        return 0;
    }

    if (diff->parsed()) {
        BufHandle json;
        pdfrev_status st = pdfrev_report_diff(doc.doc, static_cast<size_t>(from_rev),
                                              static_cast<size_t>(to_rev), &json.buf);
        if (st != PDFREV_OK) return fail_api(st);
        std::cout << json.str();
        return 0;
    }

    if (shadows->parsed()) {
        BufHandle json;
        pdfrev_status st = pdfrev_report_shadows(doc.doc, &json.buf);
        if (st != PDFREV_OK) return fail_api(st);
        std::cout << json.str();
        return 0;
    }

    if (scan->parsed()) {
        BufHandle json;
        pdfrev_status st = pdfrev_report_scan(doc.doc, &json.buf);
        if (st != PDFREV_OK) return fail_api(st);
        std::cout << json.str();
        return 0;
    }

    if (hide->parsed()) {
        auto payload = read_file(payload_path);
        if (!payload) return fail(3, "cannot read " + payload_path);
        BufHandle pdf, json;
        char loc[128] = {0};
        pdfrev_status st = pdfrev_hide(doc.doc, payload->data(), payload->size(), technique, at,
                                       &pdf.buf, loc, sizeof(loc), &json.buf);
        if (st != PDFREV_OK) return fail_api(st);
        if (int rc = write_output(g, out_path, pdf.buf.data, pdf.buf.len)) return rc;
        note(g, "wrote " + out_path + "  locator " + loc);
        std::cout << json.str();
        return 0;
    }

    if (extract->parsed()) {
        BufHandle payload;
        pdfrev_status st = pdfrev_extract_hidden(doc.doc, locator.c_str(), &payload.buf);
        if (st != PDFREV_OK) return fail_api(st);
        if (int rc = write_output(g, out_path, payload.buf.data, payload.buf.len)) return rc;
        note(g, "wrote " + out_path);
        std::cout << "{\"schema_version\": 1, \"command\": \"extract-hidden\", \"payload_size\": "
                  << payload.buf.len << "}\n";
        return 0;
    }

    return fail(1, "no subcommand");
}
