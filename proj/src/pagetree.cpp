#include "pagetree.hpp"

#include <set>

#include "filters.hpp"

namespace pdfrev {

namespace {

constexpr int kMaxTreeDepth = 64;

[[noreturn]] void broken(const std::string& msg) {
    throw PdfError(ErrorCode::BrokenPageTree, msg);
}

CosValue deref(const Document& doc, size_t rev, const CosValue& v) {
    if (v.is_reference()) return resolve(doc, rev, v.as_reference()).value;
    return v;
}

// Root /Pages node of the catalog for a revision.
CosValue pages_root(const Document& doc, size_t rev, ObjectId* root_id) {
    if (rev >= doc.revision_count()) broken("revision index out of range");
    const CosDict& trailer = doc.revisions[rev].trailer.dict;
    auto rit = trailer.find("Root");
    if (rit == trailer.end()) broken("trailer has no /Root");
    CosValue catalog = deref(doc, rev, rit->second);
    const CosValue* pages = catalog.dict_get("Pages");
    if (!pages) broken("catalog has no /Pages");
    if (pages->is_reference() && root_id) *root_id = pages->as_reference();
    CosValue node = deref(doc, rev, *pages);
    if (!node.is_dict()) broken("/Pages is not a dictionary");
    return node;
}

void walk(const Document& doc, size_t rev, const CosValue& node, ObjectId node_id,
          int depth, std::set<uint32_t>& visited, std::vector<PageRef>& out,
          const std::vector<std::pair<ObjectId, CosValue>>& ancestors) {
    if (depth > kMaxTreeDepth) broken("page tree too deep");
    if (!node.is_dict()) broken("page tree node is not a dictionary");

    const CosValue* type = node.dict_get("Type");
    bool is_leaf = type && type->is_name() && type->as_name() == "Page";
    if (!is_leaf && !(type && type->is_name() && type->as_name() == "Pages")) {
        // untyped nodes: treat presence of /Kids as an interior node
        is_leaf = node.dict_get("Kids") == nullptr;
    }

    if (is_leaf) {
        PageRef page;
        page.revision = rev;
        page.page_index = out.size();
        page.page_object = node_id;
        if (const CosValue* contents = node.dict_get("Contents")) {
            CosValue c = *contents;
            if (c.is_reference()) {
                page.contents.push_back(c.as_reference());
            } else if (c.is_array()) {
                for (const auto& e : c.as_array())
                    if (e.is_reference()) page.contents.push_back(e.as_reference());
            }
        }
        // /Resources inherited through the parent chain
        const CosValue* res = node.dict_get("Resources");
        if (!res) {
            for (auto it = ancestors.rbegin(); it != ancestors.rend(); ++it) {
                res = it->second.dict_get("Resources");
                if (res) break;
            }
        }
        page.resources = res ? deref(doc, rev, *res) : CosValue::null();
        out.push_back(std::move(page));
        return;
    }

    const CosValue* kids = node.dict_get("Kids");
    if (!kids) broken("interior page tree node has no /Kids");
    CosValue kids_v = deref(doc, rev, *kids);
    if (!kids_v.is_array()) broken("/Kids is not an array");

    auto next_ancestors = ancestors;
    next_ancestors.emplace_back(node_id, node);
    for (const CosValue& kid : kids_v.as_array()) {
        ObjectId kid_id{};
        CosValue kid_node = kid;
        if (kid.is_reference()) {
            kid_id = kid.as_reference();
            if (!visited.insert(kid_id.number).second) broken("cyclic /Kids");
            kid_node = resolve(doc, rev, kid_id).value;
        }
        walk(doc, rev, kid_node, kid_id, depth + 1, visited, out, next_ancestors);
    }
}

} // namespace

std::vector<PageRef> pages(const Document& doc, size_t rev) {
    ObjectId root_id{};
    CosValue root = pages_root(doc, rev, &root_id);
    std::vector<PageRef> out;
    std::set<uint32_t> visited{root_id.number};
    try {
        walk(doc, rev, root, root_id, 0, visited, out, {});
    } catch (const PdfError& e) {
        if (e.code() == ErrorCode::BrokenPageTree) throw;
        broken(std::string("page tree walk failed: ") + e.what());
    }
    return out;
}

size_t page_count(const Document& doc, size_t rev) { return pages(doc, rev).size(); }

Bytes content_program(const Document& doc, size_t rev, const PageRef& page) {
    Bytes out;
    bool first = true;
    for (ObjectId id : page.contents) {
        Resolved r = resolve(doc, rev, id);
        if (!r.value.is_stream())
            throw PdfError(ErrorCode::BrokenPageTree,
                           "page " + std::to_string(page.page_index) + " /Contents object " +
                               std::to_string(id.number) + " is not a stream");
        DecodedStream decoded =
            decode_stream(r.value.as_stream(), doc.image(), make_resolver(doc, rev));
        if (!first) out.push_back(' ');
        out.insert(out.end(), decoded.data.begin(), decoded.data.end());
        first = false;
    }
    return out;
}

} // namespace pdfrev
