#include <doctest.h>

#include <random>

#include "filters.hpp"
#include "helpers.hpp"

using namespace pdfrev;
using namespace pdfrev::test;

namespace {
FilterSpec spec_of(FilterName name) {
    FilterSpec s;
    s.name = name;
    return s;
}
} // namespace

TEST_CASE("ASCIIHexDecode: hand-computed example") {
    CHECK(apply_filter(spec_of(FilterName::ASCIIHexDecode), to_bytes("48656C6C6F>")) ==
          to_bytes("Hello"));
    // odd digit count: final nibble padded with zero
    CHECK(apply_filter(spec_of(FilterName::ASCIIHexDecode), to_bytes("414>")) ==
          to_bytes("A@"));
}

TEST_CASE("RunLengthDecode: lone EOD marker yields empty output") {
    CHECK(apply_filter(spec_of(FilterName::RunLengthDecode), Bytes{128}).empty());
}

TEST_CASE("FlateDecode round-trips abc") {
    CHECK(apply_filter(spec_of(FilterName::FlateDecode), flate_encode(to_bytes("abc"))) ==
          to_bytes("abc"));
}

TEST_CASE("corrupt flate input is CorruptStream") {
    try {
        apply_filter(spec_of(FilterName::FlateDecode), to_bytes("definitely not zlib"));
        FAIL("expected CorruptStream");
    } catch (const PdfError& e) {
        CHECK(e.code() == ErrorCode::CorruptStream);
    }
}

TEST_CASE("round-trip property for every decodable filter") {
    std::mt19937 rng(42);
    struct Codec {
        FilterName name;
        Bytes (*encode)(const Bytes&);
    };
    const Codec codecs[] = {
        {FilterName::FlateDecode, flate_encode},
        {FilterName::ASCIIHexDecode, ascii_hex_encode},
        {FilterName::ASCII85Decode, ascii85_encode},
        {FilterName::RunLengthDecode, run_length_encode},
        {FilterName::LZWDecode, lzw_encode},
    };
    const size_t sizes[] = {0, 1, 2, 17, 255, 1000, 65536};
    for (const Codec& codec : codecs) {
        for (size_t n : sizes) {
            Bytes input = random_bytes(rng, n);
            CAPTURE(static_cast<int>(codec.name));
            CAPTURE(n);
            CHECK(apply_filter(spec_of(codec.name), codec.encode(input)) == input);
        }
        // highly repetitive input exercises run-length and LZW code growth
        Bytes rep(40000, 'x');
        for (size_t i = 0; i < rep.size(); i += 7) rep[i] = static_cast<uint8_t>(i & 0xFF);
        CHECK(apply_filter(spec_of(codec.name), codec.encode(rep)) == rep);
    }
}

TEST_CASE("decode_stream applies a filter chain in order") {
    Bytes payload = to_bytes("chained payload bytes");
    Bytes encoded = ascii85_encode(flate_encode(payload));

    std::string file = "stream data here: " + std::string(encoded.begin(), encoded.end());
    CosStream stream;
    stream.dict["Filter"] = CosValue::array(
        {CosValue::name("ASCII85Decode"), CosValue::name("FlateDecode")});
    stream.dict["Length"] = CosValue::integer(static_cast<int64_t>(encoded.size()));
    stream.raw = {18, encoded.size()};
    FileImage img(reinterpret_cast<const uint8_t*>(file.data()), file.size());
    DecodedStream out = decode_stream(stream, img, Resolver());
    CHECK(out.data == payload);
    CHECK_FALSE(out.terminal.has_value());
}

TEST_CASE("decode_stream: no filter is identity, image codecs are terminal") {
    Bytes data = to_bytes("raw body");
    CosStream stream;
    stream.dict["Length"] = CosValue::integer(static_cast<int64_t>(data.size()));
    stream.raw = {0, data.size()};
    FileImage img(data.data(), data.size());
    CHECK(decode_stream(stream, img, Resolver()).data == data);

    stream.dict["Filter"] = CosValue::name("DCTDecode");
    DecodedStream jpeg = decode_stream(stream, img, Resolver());
    CHECK(jpeg.data == data);
    REQUIRE(jpeg.terminal.has_value());
    CHECK(jpeg.terminal->name == FilterName::DCTDecode);
}

TEST_CASE("abbreviated filter names are recognized") {
    CHECK(filter_name_from("Fl") == FilterName::FlateDecode);
    CHECK(filter_name_from("AHx") == FilterName::ASCIIHexDecode);
    CHECK(filter_name_from("A85") == FilterName::ASCII85Decode);
    CHECK(filter_name_from("RL") == FilterName::RunLengthDecode);
    CHECK(filter_name_from("LZW") == FilterName::LZWDecode);
    CHECK(filter_name_from("DCT") == FilterName::DCTDecode);
    CHECK(filter_name_from("NoSuchFilter") == FilterName::Other);
}

TEST_CASE("PNG predictors: Up filter round-trip by hand") {
    // 2 columns, 3 rows, Up row filter (type 2): each byte stored minus the byte above
    Bytes filtered = {2, 10, 20, 2, 5, 5, 2, 1, 2};
    FilterSpec spec = spec_of(FilterName::FlateDecode);
    spec.params["Predictor"] = CosValue::integer(15);
    spec.params["Columns"] = CosValue::integer(2);
    spec.params["Colors"] = CosValue::integer(1);
    spec.params["BitsPerComponent"] = CosValue::integer(8);
    Bytes out = apply_filter(spec, flate_encode(filtered));
    CHECK(out == Bytes{10, 20, 15, 25, 16, 27});
}

TEST_CASE("TIFF predictor 2 round-trip by hand") {
    // one row of 4 single-component bytes stored as horizontal deltas
    Bytes diffed = {10, 5, 0, 251};
    FilterSpec spec = spec_of(FilterName::FlateDecode);
    spec.params["Predictor"] = CosValue::integer(2);
    spec.params["Columns"] = CosValue::integer(4);
    spec.params["Colors"] = CosValue::integer(1);
    spec.params["BitsPerComponent"] = CosValue::integer(8);
    Bytes out = apply_filter(spec, flate_encode(diffed));
    CHECK(out == Bytes{10, 15, 15, 10});
}

TEST_CASE("expansion cap stops decompression bombs") {
    Bytes huge(1 << 20, 0);
    DecodeLimits limits;
    limits.max_output = 1024;
    try {
        apply_filter(spec_of(FilterName::FlateDecode), flate_encode(huge), limits);
        FAIL("expected CorruptStream from the expansion cap");
    } catch (const PdfError& e) {
        CHECK(e.code() == ErrorCode::CorruptStream);
    }
}
