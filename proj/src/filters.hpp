#ifndef PDFREV_FILTERS_HPP
#define PDFREV_FILTERS_HPP

#include <optional>
#include <string>
#include <vector>

#include "bytes.hpp"
#include "cos.hpp"

namespace pdfrev {

enum class FilterName {
    FlateDecode,
    ASCIIHexDecode,
    ASCII85Decode,
    RunLengthDecode,
    LZWDecode,
    DCTDecode,
    JPXDecode,
    CCITTFaxDecode,
    Other,
};

struct FilterSpec {
    FilterName name = FilterName::Other;
    std::string other_name; // set when name == Other
    CosDict params;
};

FilterName filter_name_from(const std::string& name);
std::string filter_name_to_string(const FilterSpec& spec);

// Image codecs are passed through, not decoded.
bool is_terminal_filter(FilterName name);

struct DecodeLimits {
    uint64_t max_output = 256ull * 1024 * 1024; // expansion cap per stream
};

// Single-filter decode. Pure; throws CorruptStream / UnknownFilter.
Bytes apply_filter(const FilterSpec& spec, const Bytes& input, const DecodeLimits& limits = {});

struct DecodedStream {
    Bytes data;
    std::optional<FilterSpec> terminal; // image codec the data is still encoded with
    bool unknown_filter = false;        // hit an Other filter; data returned as-is from there
};

// Applies a stream's full /Filter chain; stops at image codecs.
DecodedStream decode_stream(const CosStream& stream, FileImage file, const Resolver& resolver,
                            const DecodeLimits& limits = {});

// Filter chain of a stream dict, /Filter + /DecodeParms normalized to a list.
std::vector<FilterSpec> filter_chain(const CosDict& dict, const Resolver& resolver);

// Encoders (used by the fixture writer and the hiding operations).
Bytes flate_encode(const Bytes& input);
Bytes ascii_hex_encode(const Bytes& input);
Bytes ascii85_encode(const Bytes& input);
Bytes run_length_encode(const Bytes& input);
Bytes lzw_encode(const Bytes& input);

} // namespace pdfrev

#endif
