#include "serialize.hpp"

#include <cstdio>

namespace pdfrev {

std::string escape_literal_string(const Bytes& data) {
    std::string out = "(";
    for (uint8_t c : data) {
        if (c == '(' || c == ')' || c == '\\') {
            out.push_back('\\');
            out.push_back(static_cast<char>(c));
        } else if (c >= 0x20 && c < 0x7F) {
            out.push_back(static_cast<char>(c));
        } else {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\%03o", c);
            out += buf;
        }
    }
    out.push_back(')');
    return out;
}

std::string escape_name(const std::string& name) {
    std::string out = "/";
    for (uint8_t c : name) {
        if (is_regular_char(c) && c != '#' && c >= 0x21 && c <= 0x7E) {
            out.push_back(static_cast<char>(c));
        } else {
            char buf[4];
            std::snprintf(buf, sizeof(buf), "#%02X", c);
            out += buf;
        }
    }
    return out;
}

std::string serialize_value(const CosValue& v) {
    if (v.is_null()) return "null";
    if (v.is_bool()) return v.as_bool() ? "true" : "false";
    if (v.is_integer()) return std::to_string(v.as_integer());
    if (v.is_real()) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%g", v.as_real());
        return buf;
    }
    if (v.is_name()) return escape_name(v.as_name());
    if (v.is_string()) {
        const CosString& s = v.as_string();
        if (s.hex) {
            static const char* hex = "0123456789ABCDEF";
            std::string out = "<";
            for (uint8_t c : s.data) {
                out.push_back(hex[c >> 4]);
                out.push_back(hex[c & 15]);
            }
            out.push_back('>');
            return out;
        }
        return escape_literal_string(s.data);
    }
    if (v.is_array()) {
        std::string out = "[";
        bool first = true;
        for (const CosValue& e : v.as_array()) {
            if (!first) out.push_back(' ');
            out += serialize_value(e);
            first = false;
        }
        out.push_back(']');
        return out;
    }
    if (v.is_dict() || v.is_stream()) {
        const CosDict& d = v.is_dict() ? v.as_dict() : v.as_stream().dict;
        std::string out = "<<";
        for (const auto& [key, val] : d) {
            out += escape_name(key);
            out.push_back(' ');
            out += serialize_value(val);
            out.push_back(' ');
        }
        if (out.size() > 2) out.pop_back();
        out += ">>";
        return out;
    }
    if (v.is_reference()) {
        ObjectId id = v.as_reference();
        return std::to_string(id.number) + " " + std::to_string(id.generation) + " R";
    }
    return "null";
}

} // namespace pdfrev
