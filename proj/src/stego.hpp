#ifndef PDFREV_STEGO_HPP
#define PDFREV_STEGO_HPP

#include <optional>
#include <string>
#include <vector>

#include "bytes.hpp"
#include "cos.hpp"
#include "revisions.hpp"

namespace pdfrev {

enum class HideTechnique {
    SupersededStream = 1, // payload in a compressed stream shadowed by a later update
    SlackInjection = 2,   // payload spliced between structures with offsets fixed up
};

struct PayloadLocator {
    HideTechnique technique = HideTechnique::SupersededStream;
    ByteSpan span{};                    // payload carrier bytes in the output file
    std::optional<ObjectId> object_id;  // carrier object, technique 1 only
};

// "technique:offset:length[:obj]" with technique 1 or 2.
std::string format_locator(const PayloadLocator& loc);
PayloadLocator parse_locator(const std::string& text);

struct HideResult {
    Bytes bytes;
    PayloadLocator locator;
};

HideResult hide_superseded(const Bytes& input, const Bytes& payload);

// `at` must sit strictly between two top-level structures of a non-final block;
// when absent the slack after the last superseded object in the oldest block is used.
HideResult hide_in_slack(const Bytes& input, const Bytes& payload,
                         std::optional<uint64_t> at = std::nullopt);

Bytes extract_payload(const Bytes& input, const PayloadLocator& locator);

enum class HiddenKind { UnaccountedSpan, UnreferencedStream, OrphanObject };

struct HiddenCandidate {
    HiddenKind kind = HiddenKind::UnaccountedSpan;
    ByteSpan span{};
    std::optional<ObjectId> object_id;
    double entropy = 0.0; // Shannon entropy of the span, bits per byte
    std::string note;
};

std::vector<HiddenCandidate> detect_hidden(const Document& doc);

double shannon_entropy(FileImage bytes);

} // namespace pdfrev

#endif
