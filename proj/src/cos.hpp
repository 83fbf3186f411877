#ifndef PDFREV_COS_HPP
#define PDFREV_COS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "bytes.hpp"
#include "errors.hpp"

namespace pdfrev {

struct ObjectId {
    uint32_t number = 0;
    uint32_t generation = 0;

    auto operator<=>(const ObjectId&) const = default;
};

struct CosName {
    std::string name;
    bool operator==(const CosName&) const = default;
};

struct CosString {
    Bytes data;
    bool hex = false;
    bool operator==(const CosString&) const = default;
};

class CosValue;

using CosArray = std::vector<CosValue>;
using CosDict = std::map<std::string, CosValue>;

struct CosStream {
    CosDict dict;
    ByteSpan raw; // stream payload bytes in the file image
    bool operator==(const CosStream&) const = default;
};

struct CosReference {
    ObjectId id;
    bool operator==(const CosReference&) const = default;
};

class CosValue {
public:
    using Variant = std::variant<std::monostate, bool, int64_t, double, CosName, CosString,
                                 CosArray, CosDict, CosStream, CosReference>;

    CosValue() = default;
    CosValue(Variant v) : v_(std::move(v)) {}
    static CosValue null() { return CosValue(); }
    static CosValue boolean(bool b) { return CosValue(Variant(b)); }
    static CosValue integer(int64_t n) { return CosValue(Variant(n)); }
    static CosValue real(double d) { return CosValue(Variant(d)); }
    static CosValue name(std::string n) { return CosValue(Variant(CosName{std::move(n)})); }
    static CosValue string(Bytes b, bool hex = false) {
        return CosValue(Variant(CosString{std::move(b), hex}));
    }
    static CosValue array(CosArray a) { return CosValue(Variant(std::move(a))); }
    static CosValue dict(CosDict d) { return CosValue(Variant(std::move(d))); }
    static CosValue stream(CosStream s) { return CosValue(Variant(std::move(s))); }
    static CosValue reference(ObjectId id) { return CosValue(Variant(CosReference{id})); }

    bool is_null() const { return std::holds_alternative<std::monostate>(v_); }
    bool is_bool() const { return std::holds_alternative<bool>(v_); }
    bool is_integer() const { return std::holds_alternative<int64_t>(v_); }
    bool is_real() const { return std::holds_alternative<double>(v_); }
    bool is_number() const { return is_integer() || is_real(); }
    bool is_name() const { return std::holds_alternative<CosName>(v_); }
    bool is_string() const { return std::holds_alternative<CosString>(v_); }
    bool is_array() const { return std::holds_alternative<CosArray>(v_); }
    bool is_dict() const { return std::holds_alternative<CosDict>(v_); }
    bool is_stream() const { return std::holds_alternative<CosStream>(v_); }
    bool is_reference() const { return std::holds_alternative<CosReference>(v_); }

    bool as_bool() const { return std::get<bool>(v_); }
    int64_t as_integer() const { return std::get<int64_t>(v_); }
    double as_real() const {
        return is_integer() ? static_cast<double>(as_integer()) : std::get<double>(v_);
    }
    const std::string& as_name() const { return std::get<CosName>(v_).name; }
    const CosString& as_string() const { return std::get<CosString>(v_); }
    const CosArray& as_array() const { return std::get<CosArray>(v_); }
    const CosDict& as_dict() const { return std::get<CosDict>(v_); }
    CosDict& as_dict() { return std::get<CosDict>(v_); }
    const CosStream& as_stream() const { return std::get<CosStream>(v_); }
    ObjectId as_reference() const { return std::get<CosReference>(v_).id; }

    // Dict access that also looks through a stream's dict. Returns nullptr when absent.
    const CosValue* dict_get(const std::string& key) const {
        const CosDict* d = nullptr;
        if (is_dict()) d = &as_dict();
        else if (is_stream()) d = &as_stream().dict;
        if (!d) return nullptr;
        auto it = d->find(key);
        return it == d->end() ? nullptr : &it->second;
    }

    bool operator==(const CosValue&) const = default;

    const Variant& raw_variant() const { return v_; }

private:
    Variant v_;
};

using FileImage = std::span<const uint8_t>;
using Resolver = std::function<CosValue(ObjectId)>;

struct LexResult {
    CosValue value;
    ByteSpan span;
};

struct IndirectObject {
    ObjectId id;
    CosValue value;
    ByteSpan span;
};

struct ParseOptions {
    const Resolver* resolver = nullptr;
    // Carving mode: when /Length is unresolvable or wrong, locate endstream by scanning.
    bool carve = false;
    std::vector<std::string>* warnings = nullptr;
};

// Position after any run of whitespace and %-comments starting at offset.
uint64_t skip_space_and_comments(FileImage bytes, uint64_t offset);

LexResult lex_value(FileImage bytes, uint64_t offset);

IndirectObject parse_indirect_object(FileImage bytes, uint64_t offset,
                                     const ParseOptions& opts = {});

struct ScanHit {
    ObjectId id;
    ByteSpan span;
};

struct ScanResult {
    std::vector<ScanHit> objects; // file order, non-overlapping
    size_t skipped = 0;           // unparseable candidates
};

ScanResult scan_all_objects(FileImage bytes);

// True when the keyword at `offset` matches `kw` and is delimiter/ws/EOF bounded.
bool keyword_at(FileImage bytes, uint64_t offset, std::string_view kw);

} // namespace pdfrev

#endif
