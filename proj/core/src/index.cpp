#include "signac/index.hpp"

#include <fnmatch.h>

#include <algorithm>

#include "signac/errors.hpp"

namespace signac::index {

namespace fs = std::filesystem;

namespace {

bool is_reserved(const std::string& relative_name) {
    return relative_name == kStatepointFileName || relative_name == kDocumentFileName;
}

bool glob_match(const std::string& pattern, const std::string& name) {
    return ::fnmatch(pattern.c_str(), name.c_str(), 0) == 0;
}

}  // namespace

Value IndexRecord::to_json() const {
    Value files_json = Value::array();
    for (const auto& f : files) {
        files_json.push_back({{"name", f.name}, {"size", f.size}, {"format", f.format}});
    }
    return Value{
        {"_id", id.str()},
        {"statepoint", statepoint},
        {"root", root.string()},
        {"files", files_json},
        {"document", document},
    };
}

IndexRecord IndexRecord::from_json(const Value& v) {
    IndexRecord record;
    record.id = JobId::parse(v.at("_id").get<std::string>());
    record.statepoint = v.at("statepoint");
    record.root = fs::path(v.at("root").get<std::string>());
    for (const auto& f : v.at("files")) {
        record.files.push_back(
            {f.at("name").get<std::string>(), f.at("size").get<std::uint64_t>(),
             f.at("format").get<std::string>()});
    }
    record.document = v.at("document");
    return record;
}

std::vector<IndexRecord> crawl_workspace(const Project& project,
                                         const std::vector<FormatRule>& rules) {
    std::vector<IndexRecord> records;
    for (const auto& job : project.all_jobs()) {
        IndexRecord record;
        record.id = job.id();
        record.statepoint = job.statepoint();
        record.root = job.workspace_path();
        record.document = job.document();

        std::vector<std::string> names;
        for (const auto& entry : fs::recursive_directory_iterator(job.workspace_path())) {
            if (!entry.is_regular_file()) continue;
            const std::string rel =
                entry.path().lexically_relative(job.workspace_path()).generic_string();
            if (is_reserved(rel)) continue;
            names.push_back(rel);
        }
        std::sort(names.begin(), names.end());

        for (const auto& rel : names) {
            const fs::path full = job.workspace_path() / rel;
            FileEntry file{rel, 0, "File"};
            std::error_code ec;
            const auto size = fs::file_size(full, ec);
            if (!ec) file.size = size;

            for (const auto& rule : rules) {
                if (!glob_match(rule.pattern, rel)) continue;
                file.format = rule.format_label;
                if (rule.extractor) {
                    try {
                        Value derived = rule.extractor(full);
                        if (!record.document.contains("derived")) {
                            record.document["derived"] = Value::object();
                        }
                        for (auto it = derived.begin(); it != derived.end(); ++it) {
                            record.document["derived"][it.key()] = it.value();
                        }
                    } catch (const std::exception& e) {
                        record.document["derived"]["errors"][rel] = e.what();
                    }
                }
                break;  // first matching rule wins
            }
            record.files.push_back(std::move(file));
        }
        records.push_back(std::move(record));
    }
    return records;
}

void NdjsonSink::write(const IndexRecord& record) {
    out_ << record.to_json().dump() << '\n';
    if (!out_) {
        throw IoError("NDJSON sink write failed");
    }
}

void NdjsonSink::flush() {
    out_.flush();
    if (!out_) {
        throw IoError("NDJSON sink flush failed");
    }
}

ExportResult export_records(const std::vector<IndexRecord>& records, ExportSink& sink) {
    ExportResult result;
    try {
        for (const auto& record : records) {
            sink.write(record);
            ++result.written;
        }
        sink.flush();
    } catch (const std::exception& e) {
        result.error = e.what();
    }
    return result;
}

std::filesystem::path fetch(const IndexRecord& record, std::string_view name) {
    const auto it = std::find_if(record.files.begin(), record.files.end(),
                                 [&](const FileEntry& f) { return f.name == name; });
    if (it == record.files.end()) {
        throw Error("file '" + std::string(name) + "' is not listed in the record for " +
                    record.id.str());
    }
    const fs::path full = record.root / it->name;
    if (!fs::is_regular_file(full)) {
        throw StaleIndexError("indexed file has vanished: " + full.string());
    }
    return full;
}

Value query_view(const IndexRecord& record) {
    Value view = record.statepoint;
    view["doc"] = record.document;
    return view;
}

}  // namespace signac::index
