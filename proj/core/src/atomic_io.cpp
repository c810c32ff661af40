#include "signac/atomic_io.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <string>
#include <system_error>

#include "signac/errors.hpp"

namespace signac {
namespace {

std::string errno_text() { return std::strerror(errno); }

// Unique temporary sibling name; process id plus a process-local counter is
// enough because the rename target is always in the same directory.
std::filesystem::path temp_sibling(const std::filesystem::path& path) {
    static std::atomic<unsigned long> counter{0};
    const unsigned long n = counter.fetch_add(1, std::memory_order_relaxed);
    return path.parent_path() /
           ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()) + "." +
            std::to_string(n));
}

void write_all_fsync(const std::filesystem::path& path, const std::string& data) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_EXCL, 0644);
    if (fd < 0) {
        throw IoError("cannot create temporary file " + path.string() + ": " + errno_text());
    }
    std::size_t written = 0;
    while (written < data.size()) {
        const ssize_t n = ::write(fd, data.data() + written, data.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            const std::string msg = errno_text();
            ::close(fd);
            ::unlink(path.c_str());
            throw IoError("write to " + path.string() + " failed: " + msg);
        }
        written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0) {
        const std::string msg = errno_text();
        ::close(fd);
        ::unlink(path.c_str());
        throw IoError("fsync of " + path.string() + " failed: " + msg);
    }
    ::close(fd);
}

}  // namespace

void write_document_atomic(const std::filesystem::path& path, const Value& doc,
                           const WriteFaultHook& fault_hook) {
    const std::filesystem::path tmp = temp_sibling(path);
    write_all_fsync(tmp, doc.dump(4) + "\n");

    if (fault_hook) {
        try {
            fault_hook();
        } catch (...) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw;
        }
    }

    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw IoError("atomic rename onto " + path.string() + " failed: " + ec.message());
    }
}

std::optional<Value> read_document(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.is_open()) {
        if (std::filesystem::exists(path)) {
            throw IoError("cannot open " + path.string() + " for reading");
        }
        return std::nullopt;
    }
    Value doc = Value::parse(in, nullptr, false);
    if (doc.is_discarded()) {
        throw CorruptionError("malformed JSON in " + path.string());
    }
    return doc;
}

const Value* document_lookup(const Value& doc, std::string_view dotted_key) {
    const Value* cur = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted_key.find('.', start);
        const std::string_view seg = dotted_key.substr(
            start, dot == std::string_view::npos ? std::string_view::npos : dot - start);
        if (seg.empty() || !cur->is_object()) return nullptr;
        const auto it = cur->find(std::string(seg));
        if (it == cur->end()) return nullptr;
        cur = &*it;
        if (dot == std::string_view::npos) return cur;
        start = dot + 1;
    }
}

void document_set(Value& doc, std::string_view dotted_key, Value value) {
    if (!doc.is_object()) {
        throw ValidationError("document root must be a mapping");
    }
    Value* cur = &doc;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted_key.find('.', start);
        const std::string seg(dotted_key.substr(
            start, dot == std::string_view::npos ? std::string_view::npos : dot - start));
        if (seg.empty()) {
            throw ValidationError("empty key segment in '" + std::string(dotted_key) + "'");
        }
        if (dot == std::string_view::npos) {
            (*cur)[seg] = std::move(value);
            return;
        }
        Value& next = (*cur)[seg];
        if (next.is_null()) next = Value::object();
        if (!next.is_object()) {
            throw ValidationError("cannot descend through non-mapping value at '" + seg + "'");
        }
        cur = &next;
        start = dot + 1;
    }
}

}  // namespace signac
