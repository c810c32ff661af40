#include "signac/canonical.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <utility>

#include "signac/errors.hpp"
#include "signac/statepoint.hpp"

namespace signac {
namespace {

// Shortest round-trip digits and decimal exponent, extracted from the
// scientific form of std::to_chars ("d[.ddd]e±EE").
struct DecimalParts {
    bool negative = false;
    std::string digits;  // significant digits, no separator, no trailing zeros
    int exponent = 0;    // value = digits[0].digits[1..] * 10^exponent
};

DecimalParts decompose(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
    std::string_view text(buf, static_cast<std::size_t>(res.ptr - buf));

    DecimalParts parts;
    std::size_t pos = 0;
    if (text[pos] == '-') {
        parts.negative = true;
        ++pos;
    }
    const std::size_t epos = text.find('e', pos);
    for (std::size_t i = pos; i < epos; ++i) {
        if (text[i] != '.') parts.digits.push_back(text[i]);
    }
    std::size_t expstart = epos + 1;
    int sign = 1;
    if (text[expstart] == '+') {
        ++expstart;
    } else if (text[expstart] == '-') {
        sign = -1;
        ++expstart;
    }
    int magnitude = 0;
    std::from_chars(text.data() + expstart, text.data() + text.size(), magnitude);
    parts.exponent = sign * magnitude;
    return parts;
}

void append_escaped(const std::string& s, std::string& out) {
    static constexpr char hex[] = "0123456789abcdef";
    out.push_back('"');
    for (unsigned char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\b': out += "\\b"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\f': out += "\\f"; break;
            case '\r': out += "\\r"; break;
            default:
                if (c < 0x20) {
                    out += "\\u00";
                    out.push_back(hex[c >> 4]);
                    out.push_back(hex[c & 0xf]);
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    out.push_back('"');
}

template <class JsonT>
void write_canonical(const JsonT& v, std::string& out) {
    using value_t = typename JsonT::value_t;
    switch (v.type()) {
        case value_t::null:
            out += "null";
            break;
        case value_t::boolean:
            out += v.template get<bool>() ? "true" : "false";
            break;
        case value_t::number_integer: {
            char buf[32];
            auto res = std::to_chars(buf, buf + sizeof buf, v.template get<std::int64_t>());
            out.append(buf, res.ptr);
            break;
        }
        case value_t::number_unsigned: {
            char buf[32];
            auto res = std::to_chars(buf, buf + sizeof buf, v.template get<std::uint64_t>());
            out.append(buf, res.ptr);
            break;
        }
        case value_t::number_float:
            out += canonical_float_text(v.template get<double>());
            break;
        case value_t::string:
            append_escaped(v.template get_ref<const std::string&>(), out);
            break;
        case value_t::array: {
            out.push_back('[');
            bool first = true;
            for (const auto& item : v) {
                if (!std::exchange(first, false)) out.push_back(',');
                write_canonical(item, out);
            }
            out.push_back(']');
            break;
        }
        case value_t::object: {
            std::vector<std::pair<std::string_view, const JsonT*>> entries;
            entries.reserve(v.size());
            for (auto it = v.begin(); it != v.end(); ++it) {
                entries.emplace_back(it.key(), &it.value());
            }
            std::sort(entries.begin(), entries.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            out.push_back('{');
            bool first = true;
            for (const auto& [key, child] : entries) {
                if (!std::exchange(first, false)) out.push_back(',');
                append_escaped(std::string(key), out);
                out.push_back(':');
                write_canonical(*child, out);
            }
            out.push_back('}');
            break;
        }
        default:
            throw ValidationError("state point contains a non-JSON value");
    }
}

template <class JsonT>
std::string canonicalize_impl(const JsonT& statepoint) {
    auto violations = validate_statepoint(statepoint);
    if (!violations.empty()) {
        std::string msg = "cannot canonicalize invalid state point:";
        for (const auto& v : violations) {
            msg += " [" + (v.path.empty() ? std::string("<root>") : v.path) + "] " + v.message + ";";
        }
        throw ValidationError(msg);
    }
    std::string out;
    out.reserve(64);
    write_canonical(statepoint, out);
    return out;
}

}  // namespace

std::string canonical_float_text(double value) {
    if (!std::isfinite(value)) {
        throw ValidationError("non-finite float is not representable in JSON");
    }
    if (value == 0.0) {
        return std::signbit(value) ? "-0.0" : "0.0";
    }
    const DecimalParts parts = decompose(value);
    const std::string& d = parts.digits;
    const int n = static_cast<int>(d.size());
    const int e = parts.exponent;

    std::string out;
    if (parts.negative) out.push_back('-');
    if (e >= -4 && e <= 15) {
        if (e >= n - 1) {
            out += d;
            out.append(static_cast<std::size_t>(e - (n - 1)), '0');
            out += ".0";
        } else if (e >= 0) {
            out.append(d, 0, static_cast<std::size_t>(e + 1));
            out.push_back('.');
            out.append(d, static_cast<std::size_t>(e + 1), std::string::npos);
        } else {
            out += "0.";
            out.append(static_cast<std::size_t>(-e - 1), '0');
            out += d;
        }
    } else {
        out.push_back(d[0]);
        if (n > 1) {
            out.push_back('.');
            out.append(d, 1, std::string::npos);
        }
        out.push_back('e');
        out += std::to_string(e);
    }
    return out;
}

std::string canonicalize(const Value& statepoint) { return canonicalize_impl(statepoint); }
std::string canonicalize(const OrderedValue& statepoint) { return canonicalize_impl(statepoint); }

}  // namespace signac
