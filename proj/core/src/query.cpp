#include "signac/query.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>

#include "signac/errors.hpp"

namespace signac {
namespace {

struct OpInfo {
    std::string_view text;
    CmpOp op;
};

constexpr OpInfo kOps[] = {
    {"$eq", CmpOp::eq},   {"$ne", CmpOp::ne},   {"$gt", CmpOp::gt},
    {"$gte", CmpOp::gte}, {"$lt", CmpOp::lt},   {"$lte", CmpOp::lte},
    {"$in", CmpOp::in},   {"$nin", CmpOp::nin}, {"$exists", CmpOp::exists},
};

std::optional<CmpOp> op_from_text(std::string_view text) {
    for (const auto& info : kOps) {
        if (info.text == text) return info.op;
    }
    return std::nullopt;
}

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw FilterParseError("filter error at '" + path + "': " + message);
}

void check_path(const std::string& path) {
    if (path.empty()) fail(path, "empty key path");
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = path.find('.', start);
        const std::string_view seg =
            std::string_view(path).substr(start, dot == std::string::npos ? path.size() - start
                                                                          : dot - start);
        if (seg.empty()) fail(path, "empty path segment");
        if (seg.front() == '$') fail(path, "operator '" + std::string(seg) + "' not in final position");
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
}

CmpNode checked_cmp(std::string path, CmpOp op, Value operand) {
    check_path(path);
    switch (op) {
        case CmpOp::in:
        case CmpOp::nin:
            if (!operand.is_array()) fail(path, "operand of $in/$nin must be an array");
            break;
        case CmpOp::exists:
            if (!operand.is_boolean()) fail(path, "operand of $exists must be a boolean");
            break;
        case CmpOp::gt:
        case CmpOp::gte:
        case CmpOp::lt:
        case CmpOp::lte:
            if (!operand.is_number() && !operand.is_string()) {
                fail(path, "ordering operand must be a number or a string");
            }
            break;
        default:
            break;
    }
    return CmpNode{std::move(path), op, std::move(operand)};
}

// Splits a trailing ".$op" (or a whole-key "$op") off a filter key.
std::pair<std::string, std::optional<std::string>> split_op_suffix(const std::string& key) {
    const std::size_t dot = key.rfind('.');
    const std::string last = dot == std::string::npos ? key : key.substr(dot + 1);
    if (!last.empty() && last.front() == '$') {
        const std::string head = dot == std::string::npos ? std::string() : key.substr(0, dot);
        return {head, last};
    }
    return {key, std::nullopt};
}

std::vector<FilterExpr> parse_clause_list(const std::string& label, const Value& val) {
    if (!val.is_array() || val.empty()) {
        fail(label, "operand must be a non-empty array of filter documents");
    }
    std::vector<FilterExpr> children;
    children.reserve(val.size());
    for (const auto& item : val) {
        children.push_back(parse_filter(item));
    }
    return children;
}

// Numeric-aware ordering; nullopt when the two values are not comparable
// (cross-type pairings other than int/float).
std::optional<std::partial_ordering> order_values(const Value& a, const Value& b) {
    const bool a_int = a.is_number_integer() || a.is_number_unsigned();
    const bool b_int = b.is_number_integer() || b.is_number_unsigned();
    if (a_int && b_int) {
        if (a.is_number_unsigned() && b.is_number_unsigned()) {
            return a.get<std::uint64_t>() <=> b.get<std::uint64_t>();
        }
        if (a.is_number_unsigned()) {
            const std::int64_t bi = b.get<std::int64_t>();
            if (bi < 0) return std::partial_ordering::greater;
            return a.get<std::uint64_t>() <=> static_cast<std::uint64_t>(bi);
        }
        if (b.is_number_unsigned()) {
            const std::int64_t ai = a.get<std::int64_t>();
            if (ai < 0) return std::partial_ordering::less;
            return static_cast<std::uint64_t>(ai) <=> b.get<std::uint64_t>();
        }
        return a.get<std::int64_t>() <=> b.get<std::int64_t>();
    }
    if (a.is_number() && b.is_number()) {
        return a.get<double>() <=> b.get<double>();
    }
    if (a.is_string() && b.is_string()) {
        const auto c = a.get_ref<const std::string&>().compare(b.get_ref<const std::string&>());
        if (c < 0) return std::partial_ordering::less;
        if (c > 0) return std::partial_ordering::greater;
        return std::partial_ordering::equivalent;
    }
    return std::nullopt;
}

// nlohmann's operator== already bridges integer and float values.
bool value_equal(const Value& a, const Value& b) { return a == b; }

bool contains_value(const Value& array, const Value& v) {
    return std::any_of(array.begin(), array.end(),
                       [&](const Value& item) { return value_equal(item, v); });
}

bool eval_cmp(const CmpNode& cmp, const Value& doc) {
    const Value* v = lookup_path(doc, cmp.path);
    switch (cmp.op) {
        case CmpOp::eq:
            return v != nullptr && value_equal(*v, cmp.operand);
        case CmpOp::ne:
            return v == nullptr || !value_equal(*v, cmp.operand);
        case CmpOp::gt:
        case CmpOp::gte:
        case CmpOp::lt:
        case CmpOp::lte: {
            if (v == nullptr) return false;
            const auto ord = order_values(*v, cmp.operand);
            if (!ord) return false;
            switch (cmp.op) {
                case CmpOp::gt: return *ord == std::partial_ordering::greater;
                case CmpOp::gte: return *ord != std::partial_ordering::less;
                case CmpOp::lt: return *ord == std::partial_ordering::less;
                default: return *ord != std::partial_ordering::greater;
            }
        }
        case CmpOp::in:
            return v != nullptr && contains_value(cmp.operand, *v);
        case CmpOp::nin:
            return v == nullptr || !contains_value(cmp.operand, *v);
        case CmpOp::exists:
            return (v != nullptr) == cmp.operand.get<bool>();
    }
    return false;
}

void collect_paths(const FilterExpr& expr, std::vector<std::string>& out) {
    if (const auto* cmp = std::get_if<CmpNode>(&expr.node)) {
        out.push_back(cmp->path);
    } else if (const auto* a = std::get_if<AndNode>(&expr.node)) {
        for (const auto& c : a->children) collect_paths(c, out);
    } else if (const auto* o = std::get_if<OrNode>(&expr.node)) {
        for (const auto& c : o->children) collect_paths(c, out);
    } else if (const auto* n = std::get_if<NotNode>(&expr.node)) {
        collect_paths(*n->child, out);
    }
}

}  // namespace

std::string_view to_string(CmpOp op) {
    for (const auto& info : kOps) {
        if (info.op == op) return info.text;
    }
    return "$eq";
}

FilterExpr make_cmp(std::string path, CmpOp op, Value operand) {
    return FilterExpr{checked_cmp(std::move(path), op, std::move(operand))};
}

FilterExpr make_and(std::vector<FilterExpr> children) {
    if (children.empty()) throw FilterParseError("$and requires a non-empty clause list");
    if (children.size() == 1) return std::move(children.front());
    return FilterExpr{AndNode{std::move(children)}};
}

FilterExpr make_or(std::vector<FilterExpr> children) {
    if (children.empty()) throw FilterParseError("$or requires a non-empty clause list");
    if (children.size() == 1) return std::move(children.front());
    return FilterExpr{OrNode{std::move(children)}};
}

FilterExpr make_not(FilterExpr child) {
    return FilterExpr{NotNode{std::make_shared<const FilterExpr>(std::move(child))}};
}

bool filter_equal(const FilterExpr& a, const FilterExpr& b) {
    if (a.node.index() != b.node.index()) return false;
    if (const auto* ca = std::get_if<CmpNode>(&a.node)) {
        const auto& cb = std::get<CmpNode>(b.node);
        return ca->path == cb.path && ca->op == cb.op && ca->operand == cb.operand;
    }
    if (const auto* aa = std::get_if<AndNode>(&a.node)) {
        const auto& ab = std::get<AndNode>(b.node);
        return std::equal(aa->children.begin(), aa->children.end(), ab.children.begin(),
                          ab.children.end(), filter_equal);
    }
    if (const auto* oa = std::get_if<OrNode>(&a.node)) {
        const auto& ob = std::get<OrNode>(b.node);
        return std::equal(oa->children.begin(), oa->children.end(), ob.children.begin(),
                          ob.children.end(), filter_equal);
    }
    const auto& na = std::get<NotNode>(a.node);
    const auto& nb = std::get<NotNode>(b.node);
    return filter_equal(*na.child, *nb.child);
}

FilterExpr parse_filter(const Value& doc) {
    if (!doc.is_object()) {
        throw FilterParseError("filter must be a JSON object");
    }
    if (doc.empty()) {
        throw FilterParseError(
            "empty filter document; express 'match everything' by omitting the filter");
    }
    std::vector<FilterExpr> clauses;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const std::string& key = it.key();
        const Value& val = it.value();
        if (key == "$and") {
            clauses.push_back(FilterExpr{AndNode{parse_clause_list(key, val)}});
        } else if (key == "$or") {
            clauses.push_back(FilterExpr{OrNode{parse_clause_list(key, val)}});
        } else if (key == "$not") {
            if (!val.is_object()) fail(key, "operand of $not must be a filter document");
            clauses.push_back(make_not(parse_filter(val)));
        } else if (!key.empty() && key.front() == '$') {
            fail(key, "unknown operator '" + key + "'");
        } else {
            auto [path, suffix] = split_op_suffix(key);
            if (suffix) {
                const auto op = op_from_text(*suffix);
                if (!op) fail(key, "unknown operator '" + *suffix + "'");
                clauses.push_back(FilterExpr{checked_cmp(path, *op, val)});
                continue;
            }
            bool any_ops = false;
            bool all_ops = true;
            if (val.is_object()) {
                for (auto kv = val.begin(); kv != val.end(); ++kv) {
                    const bool is_op = !kv.key().empty() && kv.key().front() == '$';
                    any_ops = any_ops || is_op;
                    all_ops = all_ops && is_op;
                }
            }
            if (val.is_object() && !val.empty() && all_ops) {
                for (auto kv = val.begin(); kv != val.end(); ++kv) {
                    const auto op = op_from_text(kv.key());
                    if (!op) fail(key + "." + kv.key(), "unknown operator '" + kv.key() + "'");
                    clauses.push_back(FilterExpr{checked_cmp(path, *op, kv.value())});
                }
            } else if (val.is_object() && any_ops) {
                fail(key, "cannot mix operators and plain keys in one operand");
            } else {
                clauses.push_back(FilterExpr{checked_cmp(path, CmpOp::eq, val)});
            }
        }
    }
    return make_and(std::move(clauses));
}

std::optional<FilterExpr> parse_cli_tokens(const std::vector<std::string>& tokens) {
    if (tokens.empty()) return std::nullopt;
    if (tokens.size() == 1) {
        Value doc = Value::parse(tokens.front(), nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw FilterParseError(
                "a single filter token must be a JSON document; otherwise pass path/value pairs");
        }
        if (doc.empty()) return std::nullopt;
        return parse_filter(doc);
    }
    if (tokens.size() % 2 != 0) {
        throw FilterParseError("filter tokens must form path/value pairs (got an odd count)");
    }
    std::vector<FilterExpr> clauses;
    for (std::size_t i = 0; i < tokens.size(); i += 2) {
        auto [path, suffix] = split_op_suffix(tokens[i]);
        CmpOp op = CmpOp::eq;
        if (suffix) {
            const auto parsed = op_from_text(*suffix);
            if (!parsed) fail(tokens[i], "unknown operator suffix '" + *suffix + "'");
            op = *parsed;
        }
        Value operand = Value::parse(tokens[i + 1], nullptr, false);
        if (operand.is_discarded()) {
            operand = tokens[i + 1];  // plain-string fallback
        }
        clauses.push_back(FilterExpr{checked_cmp(path, op, std::move(operand))});
    }
    return make_and(std::move(clauses));
}

Value print_filter(const FilterExpr& expr) {
    if (const auto* cmp = std::get_if<CmpNode>(&expr.node)) {
        Value out = Value::object();
        out[cmp->path] = Value{{std::string(to_string(cmp->op)), cmp->operand}};
        return out;
    }
    if (const auto* a = std::get_if<AndNode>(&expr.node)) {
        Value list = Value::array();
        for (const auto& c : a->children) list.push_back(print_filter(c));
        return Value{{"$and", list}};
    }
    if (const auto* o = std::get_if<OrNode>(&expr.node)) {
        Value list = Value::array();
        for (const auto& c : o->children) list.push_back(print_filter(c));
        return Value{{"$or", list}};
    }
    const auto& n = std::get<NotNode>(expr.node);
    return Value{{"$not", print_filter(*n.child)}};
}

const Value* lookup_path(const Value& doc, std::string_view dotted_path) {
    const Value* cur = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted_path.find('.', start);
        const std::string_view seg = dotted_path.substr(
            start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        if (seg.empty() || !cur->is_object()) return nullptr;
        const auto it = cur->find(std::string(seg));
        if (it == cur->end()) return nullptr;
        cur = &*it;
        if (dot == std::string_view::npos) return cur;
        start = dot + 1;
    }
}

bool matches(const FilterExpr& expr, const Value& doc) {
    if (const auto* cmp = std::get_if<CmpNode>(&expr.node)) {
        return eval_cmp(*cmp, doc);
    }
    if (const auto* a = std::get_if<AndNode>(&expr.node)) {
        return std::all_of(a->children.begin(), a->children.end(),
                           [&](const FilterExpr& c) { return matches(c, doc); });
    }
    if (const auto* o = std::get_if<OrNode>(&expr.node)) {
        return std::any_of(o->children.begin(), o->children.end(),
                           [&](const FilterExpr& c) { return matches(c, doc); });
    }
    return !matches(*std::get<NotNode>(expr.node).child, doc);
}

bool references_document(const FilterExpr& expr) {
    std::vector<std::string> paths;
    collect_paths(expr, paths);
    return std::any_of(paths.begin(), paths.end(), [](const std::string& p) {
        return p == "doc" || p.rfind("doc.", 0) == 0;
    });
}

}  // namespace signac
