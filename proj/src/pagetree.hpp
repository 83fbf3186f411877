#ifndef PDFREV_PAGETREE_HPP
#define PDFREV_PAGETREE_HPP

#include <optional>
#include <vector>

#include "revisions.hpp"

namespace pdfrev {

struct PageRef {
    size_t revision = 0;
    size_t page_index = 0;
    ObjectId page_object;
    std::vector<ObjectId> contents;
    CosValue resources; // resolved dict (inherited when absent on the leaf); Null when none
};

size_t page_count(const Document& doc, size_t rev);

std::vector<PageRef> pages(const Document& doc, size_t rev);

// All contents streams decoded and joined with a single space.
Bytes content_program(const Document& doc, size_t rev, const PageRef& page);

} // namespace pdfrev

#endif
