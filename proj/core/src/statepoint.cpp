#include "signac/statepoint.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>

#include "signac/canonical.hpp"
#include "signac/errors.hpp"

namespace signac {
namespace {

std::string join_path(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
}

template <class JsonT>
void collect_violations(const JsonT& v, const std::string& path, std::vector<Violation>& out) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it) {
            const std::string& key = it.key();
            if (key.empty()) {
                out.push_back({path, "empty key"});
            } else if (key.find('.') != std::string::npos) {
                out.push_back({join_path(path, key), "key contains '.' (reserved for query paths)"});
            }
            collect_violations(it.value(), join_path(path, key), out);
        }
    } else if (v.is_array()) {
        for (const auto& item : v) {
            collect_violations(item, path, out);
        }
    } else if (v.is_number_float()) {
        if (!std::isfinite(v.template get<double>())) {
            out.push_back({path, "non-finite float (NaN/Inf) is not representable in JSON"});
        }
    } else if (v.is_binary() || v.is_discarded()) {
        out.push_back({path, "not a JSON value"});
    }
}

template <class JsonT>
std::vector<Violation> validate_impl(const JsonT& statepoint) {
    std::vector<Violation> out;
    if (!statepoint.is_object()) {
        out.push_back({"", "state point root must be a mapping"});
        return out;
    }
    collect_violations(statepoint, "", out);
    return out;
}

std::string sha256_trunc128_hex(std::string_view bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len < 16) {
        throw Error("SHA-256 digest computation failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(32);
    for (int i = 0; i < 16; ++i) {
        out.push_back(hex[digest[static_cast<std::size_t>(i)] >> 4]);
        out.push_back(hex[digest[static_cast<std::size_t>(i)] & 0xf]);
    }
    return out;
}

}  // namespace

std::vector<Violation> validate_statepoint(const Value& statepoint) {
    return validate_impl(statepoint);
}

std::vector<Violation> validate_statepoint(const OrderedValue& statepoint) {
    return validate_impl(statepoint);
}

JobId JobId::parse(std::string_view text) {
    if (!is_valid(text)) {
        throw ValidationError("not a job id (expected 32 lowercase hex chars): '" +
                              std::string(text) + "'");
    }
    return JobId(std::string(text));
}

bool JobId::is_valid(std::string_view text) {
    if (text.size() != 32) return false;
    for (char c : text) {
        const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
        if (!ok) return false;
    }
    return true;
}

JobId compute_id(const Value& statepoint) {
    return JobId(sha256_trunc128_hex(canonicalize(statepoint)));
}

JobId compute_id(const OrderedValue& statepoint) {
    return JobId(sha256_trunc128_hex(canonicalize(statepoint)));
}

}  // namespace signac
