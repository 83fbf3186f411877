#include "filters.hpp"

#include <zlib.h>

#include <cstring>

namespace pdfrev {

namespace {

[[noreturn]] void corrupt(const std::string& msg) {
    throw PdfError(ErrorCode::CorruptStream, msg);
}

Bytes flate_decode(const Bytes& input, const DecodeLimits& limits) {
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) corrupt("inflateInit failed");
    struct Guard {
        z_stream* zs;
        ~Guard() { inflateEnd(zs); }
    } guard{&zs};

    Bytes out;
    zs.next_in = const_cast<Bytef*>(input.data());
    zs.avail_in = static_cast<uInt>(input.size());
    uint8_t buf[65536];
    while (true) {
        zs.next_out = buf;
        zs.avail_out = sizeof(buf);
        int rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END && rc != Z_BUF_ERROR)
            corrupt("inflate failed");
        size_t produced = sizeof(buf) - zs.avail_out;
        if (out.size() + produced > limits.max_output) corrupt("expansion cap");
        out.insert(out.end(), buf, buf + produced);
        if (rc == Z_STREAM_END) break;
        if (rc == Z_BUF_ERROR || (zs.avail_in == 0 && produced == 0)) {
            // truncated zlib stream: keep what decoded so far only if nothing came out
            if (out.empty()) corrupt("truncated deflate stream");
            break;
        }
    }
    return out;
}

Bytes ascii_hex_decode(const Bytes& input) {
    Bytes out;
    int hi = -1;
    for (uint8_t c : input) {
        if (c == '>') break;
        if (is_pdf_whitespace(c)) continue;
        int v;
        if (c >= '0' && c <= '9') v = c - '0';
        else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
        else corrupt("bad ASCIIHex digit");
        if (hi < 0) hi = v;
        else {
            out.push_back(static_cast<uint8_t>(hi * 16 + v));
            hi = -1;
        }
    }
    if (hi >= 0) out.push_back(static_cast<uint8_t>(hi * 16));
    return out;
}

Bytes ascii85_decode(const Bytes& input) {
    Bytes out;
    uint32_t group = 0;
    int count = 0;
    for (size_t i = 0; i < input.size(); ++i) {
        uint8_t c = input[i];
        if (is_pdf_whitespace(c)) continue;
        if (c == '~') break; // `~>` EOD
        if (c == 'z' && count == 0) {
            out.insert(out.end(), 4, 0);
            continue;
        }
        if (c < '!' || c > 'u') corrupt("bad ASCII85 character");
        group = group * 85 + (c - '!');
        if (++count == 5) {
            for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<uint8_t>(group >> s));
            group = 0;
            count = 0;
        }
    }
    if (count == 1) corrupt("bad ASCII85 group (single trailing char)");
    if (count > 1) {
        for (int i = count; i < 5; ++i) group = group * 85 + 84;
        for (int s = 24, emitted = 0; emitted < count - 1; s -= 8, ++emitted)
            out.push_back(static_cast<uint8_t>(group >> s));
    }
    return out;
}

Bytes run_length_decode(const Bytes& input) {
    Bytes out;
    size_t i = 0;
    while (i < input.size()) {
        uint8_t len = input[i++];
        if (len == 128) break; // EOD
        if (len < 128) {
            size_t n = static_cast<size_t>(len) + 1;
            if (i + n > input.size()) corrupt("truncated RunLength literal");
            out.insert(out.end(), input.begin() + i, input.begin() + i + n);
            i += n;
        } else {
            if (i >= input.size()) corrupt("truncated RunLength run");
            out.insert(out.end(), 257 - len, input[i++]);
        }
    }
    return out;
}

class BitReader {
public:
    explicit BitReader(const Bytes& data) : data_(data) {}
    // Reads `n` bits MSB-first; returns -1 at end of data.
    int read(int n) {
        while (bits_ < n) {
            if (pos_ >= data_.size()) return -1;
            acc_ = (acc_ << 8) | data_[pos_++];
            bits_ += 8;
        }
        bits_ -= n;
        int v = static_cast<int>((acc_ >> bits_) & ((1u << n) - 1));
        return v;
    }

private:
    const Bytes& data_;
    size_t pos_ = 0;
    uint32_t acc_ = 0;
    int bits_ = 0;
};

Bytes lzw_decode(const Bytes& input, int early_change, const DecodeLimits& limits) {
    constexpr int kClear = 256, kEod = 257;
    std::vector<Bytes> table;
    auto reset = [&]() {
        table.clear();
        table.reserve(4096);
        for (int i = 0; i < 256; ++i) table.push_back(Bytes{static_cast<uint8_t>(i)});
        table.push_back({}); // 256 clear
        table.push_back({}); // 257 EOD
    };
    reset();
    BitReader br(input);
    Bytes out;
    int width = 9;
    Bytes prev;
    while (true) {
        int code = br.read(width);
        if (code < 0 || code == kEod) break;
        if (code == kClear) {
            reset();
            width = 9;
            prev.clear();
            continue;
        }
        Bytes entry;
        if (code < static_cast<int>(table.size()) && code != kClear && code != kEod) {
            entry = table[code];
        } else if (code == static_cast<int>(table.size()) && !prev.empty()) {
            entry = prev;
            entry.push_back(prev[0]);
        } else {
            corrupt("bad LZW code");
        }
        if (out.size() + entry.size() > limits.max_output) corrupt("expansion cap");
        out.insert(out.end(), entry.begin(), entry.end());
        if (!prev.empty()) {
            Bytes add = prev;
            add.push_back(entry[0]);
            table.push_back(std::move(add));
        }
        prev = std::move(entry);
        // decoder trails the encoder's table by one entry at read time
        if (static_cast<int>(table.size()) + early_change + 1 >= (1 << width) && width < 12)
            ++width;
    }
    return out;
}

int dict_int(const CosDict& d, const std::string& key, int fallback) {
    auto it = d.find(key);
    if (it == d.end() || !it->second.is_integer()) return fallback;
    return static_cast<int>(it->second.as_integer());
}

Bytes apply_predictor(const Bytes& data, const CosDict& params) {
    int predictor = dict_int(params, "Predictor", 1);
    if (predictor <= 1) return data;
    int colors = dict_int(params, "Colors", 1);
    int bpc = dict_int(params, "BitsPerComponent", 8);
    int columns = dict_int(params, "Columns", 1);
    int bpp = std::max(1, colors * bpc / 8);
    size_t row_len = static_cast<size_t>((static_cast<int64_t>(columns) * colors * bpc + 7) / 8);

    if (predictor == 2) {
        // TIFF predictor, 8-bit components only
        if (bpc != 8) corrupt("unsupported TIFF predictor bit depth");
        Bytes out = data;
        for (size_t r = 0; r + row_len <= out.size(); r += row_len)
            for (size_t i = bpp; i < row_len; ++i)
                out[r + i] = static_cast<uint8_t>(out[r + i] + out[r + i - bpp]);
        return out;
    }
    if (predictor < 10) corrupt("unsupported predictor");

    // PNG predictors: each row prefixed with a filter-type byte
    size_t stride = row_len + 1;
    if (stride == 1 || data.size() % stride != 0) corrupt("predictor row size mismatch");
    size_t rows = data.size() / stride;
    Bytes out(rows * row_len);
    std::vector<uint8_t> prior(row_len, 0);
    for (size_t r = 0; r < rows; ++r) {
        uint8_t ft = data[r * stride];
        const uint8_t* src = data.data() + r * stride + 1;
        uint8_t* dst = out.data() + r * row_len;
        for (size_t i = 0; i < row_len; ++i) {
            int left = i >= static_cast<size_t>(bpp) ? dst[i - bpp] : 0;
            int up = prior[i];
            int ul = i >= static_cast<size_t>(bpp) ? prior[i - bpp] : 0;
            int x = src[i];
            switch (ft) {
                case 0: dst[i] = static_cast<uint8_t>(x); break;
                case 1: dst[i] = static_cast<uint8_t>(x + left); break;
                case 2: dst[i] = static_cast<uint8_t>(x + up); break;
                case 3: dst[i] = static_cast<uint8_t>(x + (left + up) / 2); break;
                case 4: {
                    int p = left + up - ul;
                    int pa = std::abs(p - left), pb = std::abs(p - up), pc = std::abs(p - ul);
                    int pred = (pa <= pb && pa <= pc) ? left : (pb <= pc ? up : ul);
                    dst[i] = static_cast<uint8_t>(x + pred);
                    break;
                }
                default: corrupt("bad PNG filter type");
            }
        }
        std::memcpy(prior.data(), dst, row_len);
    }
    return out;
}

} // namespace

FilterName filter_name_from(const std::string& name) {
    if (name == "FlateDecode" || name == "Fl") return FilterName::FlateDecode;
    if (name == "ASCIIHexDecode" || name == "AHx") return FilterName::ASCIIHexDecode;
    if (name == "ASCII85Decode" || name == "A85") return FilterName::ASCII85Decode;
    if (name == "RunLengthDecode" || name == "RL") return FilterName::RunLengthDecode;
    if (name == "LZWDecode" || name == "LZW") return FilterName::LZWDecode;
    if (name == "DCTDecode" || name == "DCT") return FilterName::DCTDecode;
    if (name == "JPXDecode") return FilterName::JPXDecode;
    if (name == "CCITTFaxDecode" || name == "CCF") return FilterName::CCITTFaxDecode;
    return FilterName::Other;
}

std::string filter_name_to_string(const FilterSpec& spec) {
    switch (spec.name) {
        case FilterName::FlateDecode: return "FlateDecode";
        case FilterName::ASCIIHexDecode: return "ASCIIHexDecode";
        case FilterName::ASCII85Decode: return "ASCII85Decode";
        case FilterName::RunLengthDecode: return "RunLengthDecode";
        case FilterName::LZWDecode: return "LZWDecode";
        case FilterName::DCTDecode: return "DCTDecode";
        case FilterName::JPXDecode: return "JPXDecode";
        case FilterName::CCITTFaxDecode: return "CCITTFaxDecode";
        case FilterName::Other: return spec.other_name;
    }
    return spec.other_name;
}

bool is_terminal_filter(FilterName name) {
    return name == FilterName::DCTDecode || name == FilterName::JPXDecode ||
           name == FilterName::CCITTFaxDecode;
}

Bytes apply_filter(const FilterSpec& spec, const Bytes& input, const DecodeLimits& limits) {
    switch (spec.name) {
        case FilterName::FlateDecode:
            return apply_predictor(flate_decode(input, limits), spec.params);
        case FilterName::ASCIIHexDecode: return ascii_hex_decode(input);
        case FilterName::ASCII85Decode: return ascii85_decode(input);
        case FilterName::RunLengthDecode: return run_length_decode(input);
        case FilterName::LZWDecode: {
            int early = 1;
            auto it = spec.params.find("EarlyChange");
            if (it != spec.params.end() && it->second.is_integer())
                early = static_cast<int>(it->second.as_integer());
            return apply_predictor(lzw_decode(input, early, limits), spec.params);
        }
        case FilterName::DCTDecode:
        case FilterName::JPXDecode:
        case FilterName::CCITTFaxDecode:
            throw PdfError(ErrorCode::UnknownFilter, "image codec is not decodable");
        case FilterName::Other:
            throw PdfError(ErrorCode::UnknownFilter, "unknown filter " + spec.other_name);
    }
    throw PdfError(ErrorCode::UnknownFilter, "unknown filter");
}

std::vector<FilterSpec> filter_chain(const CosDict& dict, const Resolver& resolver) {
    auto deref = [&](const CosValue& v) -> CosValue {
        if (v.is_reference() && resolver) return resolver(v.as_reference());
        return v;
    };

    std::vector<FilterSpec> chain;
    auto fit = dict.find("Filter");
    if (fit == dict.end()) return chain;
    CosValue filter = deref(fit->second);

    std::vector<CosValue> names;
    if (filter.is_name()) names.push_back(filter);
    else if (filter.is_array())
        for (const auto& f : filter.as_array()) names.push_back(deref(f));
    else if (!filter.is_null())
        throw PdfError(ErrorCode::UnknownFilter, "bad /Filter value");

    std::vector<CosValue> parms;
    auto pit = dict.find("DecodeParms");
    if (pit == dict.end()) pit = dict.find("DP");
    if (pit != dict.end()) {
        CosValue p = deref(pit->second);
        if (p.is_array())
            for (const auto& e : p.as_array()) parms.push_back(deref(e));
        else parms.push_back(p);
    }

    for (size_t i = 0; i < names.size(); ++i) {
        FilterSpec spec;
        if (!names[i].is_name()) throw PdfError(ErrorCode::UnknownFilter, "filter is not a name");
        spec.name = filter_name_from(names[i].as_name());
        if (spec.name == FilterName::Other) spec.other_name = names[i].as_name();
        if (i < parms.size() && parms[i].is_dict()) spec.params = parms[i].as_dict();
        chain.push_back(std::move(spec));
    }
    return chain;
}

DecodedStream decode_stream(const CosStream& stream, FileImage file, const Resolver& resolver,
                            const DecodeLimits& limits) {
    if (stream.raw.end() > file.size())
        throw PdfError(ErrorCode::CorruptStream, "stream span beyond end of file");
    DecodedStream out;
    out.data.assign(file.begin() + stream.raw.start, file.begin() + stream.raw.end());
    for (const FilterSpec& spec : filter_chain(stream.dict, resolver)) {
        if (is_terminal_filter(spec.name)) {
            out.terminal = spec;
            return out;
        }
        if (spec.name == FilterName::Other) {
            out.unknown_filter = true;
            out.terminal = spec;
            return out;
        }
        out.data = apply_filter(spec, out.data, limits);
    }
    return out;
}

Bytes flate_encode(const Bytes& input) {
    uLongf bound = compressBound(static_cast<uLong>(input.size()));
    Bytes out(bound);
    if (compress2(out.data(), &bound, input.data(), static_cast<uLong>(input.size()),
                  Z_DEFAULT_COMPRESSION) != Z_OK)
        corrupt("deflate failed");
    out.resize(bound);
    return out;
}

Bytes ascii_hex_encode(const Bytes& input) {
    static const char* hex = "0123456789ABCDEF";
    Bytes out;
    out.reserve(input.size() * 2 + 1);
    for (uint8_t c : input) {
        out.push_back(static_cast<uint8_t>(hex[c >> 4]));
        out.push_back(static_cast<uint8_t>(hex[c & 15]));
    }
    out.push_back('>');
    return out;
}

Bytes ascii85_encode(const Bytes& input) {
    Bytes out;
    size_t i = 0;
    while (i + 4 <= input.size()) {
        uint32_t g = (uint32_t(input[i]) << 24) | (uint32_t(input[i + 1]) << 16) |
                     (uint32_t(input[i + 2]) << 8) | input[i + 3];
        i += 4;
        if (g == 0) {
            out.push_back('z');
            continue;
        }
        char c[5];
        for (int k = 4; k >= 0; --k) {
            c[k] = static_cast<char>('!' + g % 85);
            g /= 85;
        }
        out.insert(out.end(), c, c + 5);
    }
    size_t rem = input.size() - i;
    if (rem > 0) {
        uint32_t g = 0;
        for (size_t k = 0; k < 4; ++k) g = (g << 8) | (i + k < input.size() ? input[i + k] : 0);
        char c[5];
        for (int k = 4; k >= 0; --k) {
            c[k] = static_cast<char>('!' + g % 85);
            g /= 85;
        }
        out.insert(out.end(), c, c + rem + 1);
    }
    out.push_back('~');
    out.push_back('>');
    return out;
}

Bytes run_length_encode(const Bytes& input) {
    Bytes out;
    size_t i = 0;
    while (i < input.size()) {
        size_t run = 1;
        while (i + run < input.size() && run < 128 && input[i + run] == input[i]) ++run;
        if (run >= 2) {
            out.push_back(static_cast<uint8_t>(257 - run));
            out.push_back(input[i]);
            i += run;
        } else {
            size_t lit = 1;
            while (i + lit < input.size() && lit < 128 &&
                   !(i + lit + 1 < input.size() && input[i + lit] == input[i + lit + 1]))
                ++lit;
            out.push_back(static_cast<uint8_t>(lit - 1));
            out.insert(out.end(), input.begin() + i, input.begin() + i + lit);
            i += lit;
        }
    }
    out.push_back(128);
    return out;
}

Bytes lzw_encode(const Bytes& input) {
    // Early-change convention: code width bumps one code before the table fills.
    std::map<Bytes, int> table;
    auto reset_table = [&]() {
        table.clear();
        for (int i = 0; i < 256; ++i) table[Bytes{static_cast<uint8_t>(i)}] = i;
    };
    reset_table();
    int next_code = 258;
    int width = 9;

    Bytes out;
    uint32_t acc = 0;
    int bits = 0;
    auto emit = [&](int code) {
        acc = (acc << width) | static_cast<uint32_t>(code);
        bits += width;
        while (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<uint8_t>((acc >> bits) & 0xFF));
        }
    };

    emit(256); // clear table
    Bytes cur;
    for (uint8_t c : input) {
        Bytes ext = cur;
        ext.push_back(c);
        auto it = table.find(ext);
        if (it != table.end()) {
            cur = std::move(ext);
            continue;
        }
        emit(table[cur]);
        table[ext] = next_code++;
        if (next_code + 1 >= (1 << width) && width < 12) ++width;
        if (next_code == 4096) {
            emit(256);
            reset_table();
            next_code = 258;
            width = 9;
        }
        cur = Bytes{c};
    }
    if (!cur.empty()) emit(table[cur]);
    emit(257); // EOD
    if (bits > 0) out.push_back(static_cast<uint8_t>((acc << (8 - bits)) & 0xFF));
    return out;
}

} // namespace pdfrev
