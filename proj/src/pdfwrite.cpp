#include "pdfwrite.hpp"

#include <cstdio>

#include "filters.hpp"
#include "serialize.hpp"

namespace pdfrev {

namespace {

std::string format10(uint64_t v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%010llu", static_cast<unsigned long long>(v));
    return buf;
}

std::string format5(uint32_t v) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%05u", v);
    return buf;
}

// Contiguous subsection grouping of (number -> offset) for a classic table.
std::vector<std::pair<uint32_t, std::vector<std::pair<uint64_t, bool>>>>
group_entries(const XrefPlan& entries) {
    std::vector<std::pair<uint32_t, std::vector<std::pair<uint64_t, bool>>>> groups;
    for (const auto& [num, entry] : entries) {
        if (!groups.empty() && groups.back().first + groups.back().second.size() == num)
            groups.back().second.push_back(entry);
        else
            groups.push_back({num, {entry}});
    }
    return groups;
}

} // namespace

void Emitter::dict_object(uint32_t number, const CosDict& dict, std::string role,
                          std::vector<ObjectRecord>& records) {
    uint64_t start = begin_object(number);
    raw(serialize_value(CosValue::dict(dict)));
    raw("\n");
    end_object(number, start, std::move(role), {}, records);
}

void Emitter::stream_object(uint32_t number, CosDict dict, const Bytes& encoded, Bytes payload,
                            std::string role, std::vector<ObjectRecord>& records) {
    dict["Length"] = CosValue::integer(static_cast<int64_t>(encoded.size()));
    uint64_t start = begin_object(number);
    raw(serialize_value(CosValue::dict(dict)));
    raw("\nstream\n");
    raw(encoded);
    raw("\nendstream\n");
    end_object(number, start, std::move(role), std::move(payload), records);
}

uint64_t emit_classic_xref(Emitter& em, const XrefPlan& entries, const CosDict& trailer) {
    uint64_t xref_off = em.size();
    em.raw("xref\n");
    for (const auto& [first, group] : group_entries(entries)) {
        em.raw(std::to_string(first) + " " + std::to_string(group.size()) + "\n");
        for (const auto& [offset, in_use] : group) {
            uint32_t gen = in_use ? 0 : 65535;
            em.raw(format10(offset) + " " + format5(gen) + " " + (in_use ? "n" : "f") + "\r\n");
        }
    }
    em.raw("trailer\n");
    em.raw(serialize_value(CosValue::dict(trailer)));
    em.raw("\n");
    return xref_off;
}

uint64_t emit_xref_stream(Emitter& em, uint32_t xref_num, XrefPlan entries, CosDict trailer,
                          std::vector<ObjectRecord>& records) {
    uint64_t xref_off = em.size();
    entries[xref_num] = {xref_off, true};

    Bytes rows;
    CosArray index;
    for (const auto& [first, group] : group_entries(entries)) {
        index.push_back(CosValue::integer(first));
        index.push_back(CosValue::integer(static_cast<int64_t>(group.size())));
        for (const auto& [offset, in_use] : group) {
            rows.push_back(in_use ? 1 : 0);
            for (int s = 24; s >= 0; s -= 8) rows.push_back(static_cast<uint8_t>(offset >> s));
            uint32_t gen = in_use ? 0 : 65535;
            rows.push_back(static_cast<uint8_t>(gen >> 8));
            rows.push_back(static_cast<uint8_t>(gen & 0xFF));
        }
    }

    trailer["Type"] = CosValue::name("XRef");
    trailer["W"] =
        CosValue::array({CosValue::integer(1), CosValue::integer(4), CosValue::integer(2)});
    trailer["Index"] = CosValue::array(std::move(index));
    trailer["Filter"] = CosValue::name("FlateDecode");
    em.stream_object(xref_num, trailer, flate_encode(rows), rows, "xref-stream", records);
    return xref_off;
}

void emit_file_end(Emitter& em, uint64_t xref_off) {
    em.raw("startxref\n" + std::to_string(xref_off) + "\n%%EOF\n");
}

} // namespace pdfrev
