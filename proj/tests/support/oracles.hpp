#pragma once

// Independent re-implementations used as test oracles. These deliberately
// avoid the code paths of the library: the serializer derives shortest
// float digits by printf-precision search instead of std::to_chars, sorts
// keys with std::set instead of the library's sort, and the query
// evaluator implements the documented semantics from scratch.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <set>
#include <string>

#include "signac/query.hpp"
#include "signac/value.hpp"

namespace testsupport {

// --------------------------------------------------------------------------
// Reference canonical serializer

inline std::string oracle_float_text(double d) {
    if (d == 0.0) return std::signbit(d) ? "-0.0" : "0.0";
    char buf[64];
    for (int digits = 1; digits <= 17; ++digits) {
        std::snprintf(buf, sizeof buf, "%.*e", digits - 1, d);
        if (std::strtod(buf, nullptr) == d) break;
    }
    const std::string text(buf);
    const bool negative = text[0] == '-';
    std::string mantissa;
    const std::size_t epos = text.find('e');
    for (std::size_t i = negative ? 1 : 0; i < epos; ++i) {
        if (text[i] != '.') mantissa.push_back(text[i]);
    }
    const int exp = std::atoi(text.c_str() + epos + 1);
    const int n = static_cast<int>(mantissa.size());

    std::string out;
    if (negative) out.push_back('-');
    if (exp >= -4 && exp <= 15) {
        if (exp >= n - 1) {
            out += mantissa;
            out.append(static_cast<std::size_t>(exp - n + 1), '0');
            out += ".0";
        } else if (exp >= 0) {
            out += mantissa.substr(0, static_cast<std::size_t>(exp + 1));
            out += ".";
            out += mantissa.substr(static_cast<std::size_t>(exp + 1));
        } else {
            out += "0.";
            out.append(static_cast<std::size_t>(-exp - 1), '0');
            out += mantissa;
        }
    } else {
        out += mantissa.substr(0, 1);
        if (n > 1) {
            out += ".";
            out += mantissa.substr(1);
        }
        out += "e" + std::to_string(exp);
    }
    return out;
}

inline void oracle_escape(const std::string& s, std::string& out) {
    out.push_back('"');
    for (unsigned char c : s) {
        if (c == '"') {
            out += "\\\"";
        } else if (c == '\\') {
            out += "\\\\";
        } else if (c == '\b') {
            out += "\\b";
        } else if (c == '\t') {
            out += "\\t";
        } else if (c == '\n') {
            out += "\\n";
        } else if (c == '\f') {
            out += "\\f";
        } else if (c == '\r') {
            out += "\\r";
        } else if (c < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            out += buf;
        } else {
            out.push_back(static_cast<char>(c));
        }
    }
    out.push_back('"');
}

template <class JsonT>
void oracle_write(const JsonT& v, std::string& out) {
    if (v.is_null()) {
        out += "null";
    } else if (v.is_boolean()) {
        out += v.template get<bool>() ? "true" : "false";
    } else if (v.is_number_unsigned()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%" PRIu64,
                      static_cast<std::uint64_t>(v.template get<std::uint64_t>()));
        out += buf;
    } else if (v.is_number_integer()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%" PRId64,
                      static_cast<std::int64_t>(v.template get<std::int64_t>()));
        out += buf;
    } else if (v.is_number_float()) {
        out += oracle_float_text(v.template get<double>());
    } else if (v.is_string()) {
        oracle_escape(v.template get<std::string>(), out);
    } else if (v.is_array()) {
        out.push_back('[');
        bool first = true;
        for (const auto& item : v) {
            if (!first) out.push_back(',');
            first = false;
            oracle_write(item, out);
        }
        out.push_back(']');
    } else {
        std::set<std::string> keys;
        for (auto it = v.begin(); it != v.end(); ++it) keys.insert(it.key());
        out.push_back('{');
        bool first = true;
        for (const auto& key : keys) {
            if (!first) out.push_back(',');
            first = false;
            oracle_escape(key, out);
            out.push_back(':');
            oracle_write(v.at(key), out);
        }
        out.push_back('}');
    }
}

template <class JsonT>
std::string oracle_canonical(const JsonT& v) {
    std::string out;
    oracle_write(v, out);
    return out;
}

// --------------------------------------------------------------------------
// Brute-force query evaluator

inline const signac::Value* oracle_lookup(const signac::Value& doc, const std::string& path) {
    const signac::Value* cur = &doc;
    std::size_t begin = 0;
    while (begin <= path.size()) {
        const std::size_t dot = path.find('.', begin);
        const std::string seg =
            path.substr(begin, dot == std::string::npos ? std::string::npos : dot - begin);
        if (seg.empty() || !cur->is_object() || !cur->contains(seg)) return nullptr;
        cur = &cur->at(seg);
        if (dot == std::string::npos) return cur;
        begin = dot + 1;
    }
    return nullptr;
}

inline bool oracle_value_eq(const signac::Value& a, const signac::Value& b) {
    if (a.is_number() && b.is_number()) {
        const bool a_int = a.is_number_integer() || a.is_number_unsigned();
        const bool b_int = b.is_number_integer() || b.is_number_unsigned();
        if (a_int && b_int) {
            if (a.is_number_unsigned() != b.is_number_unsigned()) {
                if (a.is_number_unsigned()) {
                    return b.get<std::int64_t>() >= 0 &&
                           a.get<std::uint64_t>() ==
                               static_cast<std::uint64_t>(b.get<std::int64_t>());
                }
                return a.get<std::int64_t>() >= 0 &&
                       static_cast<std::uint64_t>(a.get<std::int64_t>()) == b.get<std::uint64_t>();
            }
            if (a.is_number_unsigned()) return a.get<std::uint64_t>() == b.get<std::uint64_t>();
            return a.get<std::int64_t>() == b.get<std::int64_t>();
        }
        return static_cast<long double>(a.get<double>()) ==
               static_cast<long double>(b.get<double>());
    }
    if (a.is_array() && b.is_array()) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!oracle_value_eq(a[i], b[i])) return false;
        }
        return true;
    }
    if (a.is_object() && b.is_object()) {
        if (a.size() != b.size()) return false;
        for (auto it = a.begin(); it != a.end(); ++it) {
            if (!b.contains(it.key()) || !oracle_value_eq(it.value(), b.at(it.key()))) return false;
        }
        return true;
    }
    if (a.is_string() && b.is_string()) return a.get<std::string>() == b.get<std::string>();
    if (a.is_boolean() && b.is_boolean()) return a.get<bool>() == b.get<bool>();
    return a.is_null() && b.is_null();
}

// -1 less, 0 equal, +1 greater, -2 not comparable
inline int oracle_order(const signac::Value& a, const signac::Value& b) {
    const bool a_int = a.is_number_integer() || a.is_number_unsigned();
    const bool b_int = b.is_number_integer() || b.is_number_unsigned();
    if (a_int && b_int) {
        // exact integer comparison, sign-aware
        if (a.is_number_unsigned() && !b.is_number_unsigned() && b.get<std::int64_t>() < 0) {
            return 1;
        }
        if (!a.is_number_unsigned() && a.get<std::int64_t>() < 0 && b.is_number_unsigned()) {
            return -1;
        }
        if (a.is_number_unsigned() || b.is_number_unsigned()) {
            const std::uint64_t x = a.is_number_unsigned()
                                        ? a.get<std::uint64_t>()
                                        : static_cast<std::uint64_t>(a.get<std::int64_t>());
            const std::uint64_t y = b.is_number_unsigned()
                                        ? b.get<std::uint64_t>()
                                        : static_cast<std::uint64_t>(b.get<std::int64_t>());
            return x < y ? -1 : (x > y ? 1 : 0);
        }
        const std::int64_t x = a.get<std::int64_t>();
        const std::int64_t y = b.get<std::int64_t>();
        return x < y ? -1 : (x > y ? 1 : 0);
    }
    if (a.is_number() && b.is_number()) {
        const double x = a.get<double>();
        const double y = b.get<double>();
        if (x < y) return -1;
        if (x > y) return 1;
        return 0;
    }
    if (a.is_string() && b.is_string()) {
        const int c = a.get<std::string>().compare(b.get<std::string>());
        return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    return -2;
}

inline bool oracle_matches(const signac::FilterExpr& expr, const signac::Value& doc) {
    using signac::AndNode;
    using signac::CmpNode;
    using signac::CmpOp;
    using signac::NotNode;
    using signac::OrNode;

    if (const auto* cmp = std::get_if<CmpNode>(&expr.node)) {
        const signac::Value* v = oracle_lookup(doc, cmp->path);
        switch (cmp->op) {
            case CmpOp::eq:
                return v != nullptr && oracle_value_eq(*v, cmp->operand);
            case CmpOp::ne:
                return v == nullptr || !oracle_value_eq(*v, cmp->operand);
            case CmpOp::gt:
                return v != nullptr && oracle_order(*v, cmp->operand) == 1;
            case CmpOp::gte: {
                if (v == nullptr) return false;
                const int o = oracle_order(*v, cmp->operand);
                return o == 0 || o == 1;
            }
            case CmpOp::lt:
                return v != nullptr && oracle_order(*v, cmp->operand) == -1;
            case CmpOp::lte: {
                if (v == nullptr) return false;
                const int o = oracle_order(*v, cmp->operand);
                return o == 0 || o == -1;
            }
            case CmpOp::in: {
                if (v == nullptr) return false;
                for (const auto& item : cmp->operand) {
                    if (oracle_value_eq(item, *v)) return true;
                }
                return false;
            }
            case CmpOp::nin: {
                if (v == nullptr) return true;
                for (const auto& item : cmp->operand) {
                    if (oracle_value_eq(item, *v)) return false;
                }
                return true;
            }
            case CmpOp::exists:
                return (v != nullptr) == cmp->operand.get<bool>();
        }
        return false;
    }
    if (const auto* a = std::get_if<AndNode>(&expr.node)) {
        for (const auto& c : a->children) {
            if (!oracle_matches(c, doc)) return false;
        }
        return true;
    }
    if (const auto* o = std::get_if<OrNode>(&expr.node)) {
        for (const auto& c : o->children) {
            if (oracle_matches(c, doc)) return true;
        }
        return false;
    }
    return !oracle_matches(*std::get<NotNode>(expr.node).child, doc);
}

}  // namespace testsupport
