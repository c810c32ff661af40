#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "signac/value.hpp"

namespace signac {

// Filter AST for the MongoDB-subset query language.
//
//   {"p.$gt": 1.0}                        -> Cmp(p, gt, 1.0)
//   {"kT": 1.0}                           -> Cmp(kT, eq, 1.0)
//   {"$or": [{"p": 0.1}, {"p.$gte": 10}]} -> Or(...)
//
// Expressions are immutable values, safe to copy and share across threads.

enum class CmpOp { eq, ne, gt, gte, lt, lte, in, nin, exists };

std::string_view to_string(CmpOp op);  // "$eq", "$gt", ...

struct FilterExpr;

struct CmpNode {
    std::string path;  // dotted key path
    CmpOp op;
    Value operand;
};

struct AndNode {
    std::vector<FilterExpr> children;  // non-empty
};

struct OrNode {
    std::vector<FilterExpr> children;  // non-empty
};

struct NotNode {
    std::shared_ptr<const FilterExpr> child;
};

struct FilterExpr {
    std::variant<CmpNode, AndNode, OrNode, NotNode> node;
};

FilterExpr make_cmp(std::string path, CmpOp op, Value operand);
FilterExpr make_and(std::vector<FilterExpr> children);
FilterExpr make_or(std::vector<FilterExpr> children);
FilterExpr make_not(FilterExpr child);

// Structural equality; operands compare with the numeric bridge (1 == 1.0).
bool filter_equal(const FilterExpr& a, const FilterExpr& b);

// Parses a filter document. Bare "key: value" pairs are equality
// comparisons, "key.$op" and nested {"$op": operand} forms select
// operators, "$and"/"$or"/"$not" build logical nodes, and multiple
// top-level entries combine as a conjunction. Malformed input (unknown
// $-operator, empty $and/$or, wrong operand shape, empty document) raises
// FilterParseError naming the offending path.
FilterExpr parse_filter(const Value& doc);

// Parses the CLI token form: alternating "path[.$op] value" pairs (values
// parsed as JSON with a fallback to plain strings), or one JSON filter
// document. Returns nullopt (match everything) for an empty token list or
// an empty document.
std::optional<FilterExpr> parse_cli_tokens(const std::vector<std::string>& tokens);

// Canonical printer; its output reparses to a structurally equal
// expression. Comparisons always print in the explicit operator form.
Value print_filter(const FilterExpr& expr);

// Splits on "." and descends through nested mappings. Returns nullptr when
// any segment is missing or a non-mapping value is hit (arrays are not
// indexable).
const Value* lookup_path(const Value& doc, std::string_view dotted_path);

// Evaluates a filter against a mapping. Total: never throws, never touches
// the filesystem.
//   - eq/ne use structural equality with the numeric bridge; ne is true
//     when the path is missing.
//   - gt/gte/lt/lte order numbers with numbers and strings with strings;
//     any other pairing, or a missing value, is false.
//   - in/nin test membership; nin is true when the path is missing.
//   - exists tests path presence against its boolean operand.
bool matches(const FilterExpr& expr, const Value& doc);

// True when any comparison path addresses the job document namespace
// ("doc" or "doc.<...>"); lets callers skip document reads otherwise.
bool references_document(const FilterExpr& expr);

}  // namespace signac
