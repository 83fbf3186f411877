#ifndef PDFREV_REPORT_HPP
#define PDFREV_REPORT_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "fixture.hpp"
#include "revisions.hpp"
#include "stego.hpp"

namespace pdfrev {

using Json = nlohmann::ordered_json;

constexpr const char* kToolVersion = "0.1.0";
constexpr int kSchemaVersion = 1;

// Common envelope: schema/tool versions, file facts, per-revision summaries.
Json base_report(const Document& doc, const std::string& command,
                 const std::string& input_path);

Json report_info(const Document& doc, const std::string& input_path);
Json report_text(const Document& doc, const std::string& input_path,
                 std::optional<size_t> rev); // nullopt = all revisions
Json report_diff(const Document& doc, const std::string& input_path, size_t from, size_t to);
Json report_shadows(const Document& doc, const std::string& input_path);
Json report_scan(const Document& doc, const std::string& input_path);
Json report_images(const Document& doc, const std::string& input_path,
                   std::optional<size_t> rev);
Json report_recover(const Document& doc, const std::string& input_path, size_t rev,
                    const std::string& method, uint64_t output_size);
Json report_hide(const Document& doc, const std::string& input_path, int technique,
                 const PayloadLocator& locator, uint64_t payload_size, uint64_t output_size);

Json manifest_to_json(const Manifest& manifest);

std::string dump_report(const Json& j);

} // namespace pdfrev

#endif
