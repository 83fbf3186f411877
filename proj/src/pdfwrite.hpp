#ifndef PDFREV_PDFWRITE_HPP
#define PDFREV_PDFWRITE_HPP

#include <map>
#include <string>
#include <vector>

#include "cos.hpp"
#include "fixture.hpp"

namespace pdfrev {

// Append-oriented file builder; records object spans for manifests.
class Emitter {
public:
    Emitter(Bytes base, size_t revision) : out_(std::move(base)), revision_(revision) {}

    uint64_t size() const { return out_.size(); }

    void raw(std::string_view text) { out_.insert(out_.end(), text.begin(), text.end()); }
    void raw(const Bytes& data) { out_.insert(out_.end(), data.begin(), data.end()); }

    uint64_t begin_object(uint32_t number) {
        uint64_t start = out_.size();
        raw(std::to_string(number) + " 0 obj\n");
        return start;
    }

    void end_object(uint32_t number, uint64_t start, std::string role, Bytes payload,
                    std::vector<ObjectRecord>& records) {
        raw("endobj");
        records.push_back({ObjectId{number, 0}, ByteSpan{start, out_.size() - start},
                           std::move(role), std::move(payload), revision_});
        raw("\n");
        offsets_[number] = start;
    }

    void dict_object(uint32_t number, const CosDict& dict, std::string role,
                     std::vector<ObjectRecord>& records);

    void stream_object(uint32_t number, CosDict dict, const Bytes& encoded, Bytes payload,
                       std::string role, std::vector<ObjectRecord>& records);

    const std::map<uint32_t, uint64_t>& offsets() const { return offsets_; }

    Bytes take() { return std::move(out_); }

private:
    Bytes out_;
    size_t revision_;
    std::map<uint32_t, uint64_t> offsets_;
};

// entries: object number -> (offset, in_use)
using XrefPlan = std::map<uint32_t, std::pair<uint64_t, bool>>;

uint64_t emit_classic_xref(Emitter& em, const XrefPlan& entries, const CosDict& trailer);

uint64_t emit_xref_stream(Emitter& em, uint32_t xref_num, XrefPlan entries, CosDict trailer,
                          std::vector<ObjectRecord>& records);

void emit_file_end(Emitter& em, uint64_t xref_off);

} // namespace pdfrev

#endif
