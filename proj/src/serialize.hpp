#ifndef PDFREV_SERIALIZE_HPP
#define PDFREV_SERIALIZE_HPP

#include <string>

#include "cos.hpp"

namespace pdfrev {

// Textual COS form; streams are not serializable here (only their dicts are).
std::string serialize_value(const CosValue& value);

std::string escape_literal_string(const Bytes& data);
std::string escape_name(const std::string& name);

} // namespace pdfrev

#endif
