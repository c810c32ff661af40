#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "signac/project.hpp"
#include "signac/value.hpp"

namespace signac::index {

struct FileEntry {
    std::string name;  // relative to the record root
    std::uint64_t size = 0;
    std::string format;
};

// One crawler-emitted document: everything needed to find, interpret and
// access one job's data.
struct IndexRecord {
    JobId id;
    Value statepoint;
    std::filesystem::path root;  // absolute job directory at crawl time
    std::vector<FileEntry> files;
    Value document;

    // Export schema: {_id, statepoint, root, files, document}.
    Value to_json() const;
    static IndexRecord from_json(const Value& v);
};

// Deep-indexing hook: files matching `pattern` (fnmatch glob on the
// relative name) get `format_label`; when an extractor is set, its output
// mapping is merged into the record's document under "derived".
struct FormatRule {
    std::string pattern;
    std::string format_label;
    std::function<Value(const std::filesystem::path&)> extractor;  // may be empty
};

// One record per initialized job, ascending by id. Lists every regular
// file below the job directory except the two reserved metadata files;
// the first matching rule labels a file, default label "File". Extractor
// failures are recorded under document["derived"]["errors"][<name>] and
// the crawl continues. Read-only: never writes into the workspace.
std::vector<IndexRecord> crawl_workspace(const Project& project,
                                         const std::vector<FormatRule>& rules = {});

class ExportSink {
public:
    virtual ~ExportSink() = default;
    virtual void write(const IndexRecord& record) = 0;
    virtual void flush() = 0;
};

// Newline-delimited JSON, one record per line. The canonical interchange
// format: loadable by any document database, greppable by humans.
class NdjsonSink final : public ExportSink {
public:
    explicit NdjsonSink(std::ostream& out) : out_(out) {}
    void write(const IndexRecord& record) override;
    void flush() override;

private:
    std::ostream& out_;
};

class MemorySink final : public ExportSink {
public:
    void write(const IndexRecord& record) override { records_.push_back(record); }
    void flush() override {}
    const std::vector<IndexRecord>& records() const { return records_; }

private:
    std::vector<IndexRecord> records_;
};

struct ExportResult {
    std::size_t written = 0;
    std::optional<std::string> error;  // set when a sink write aborted the export
};

// Writes every record, then flushes. A sink failure aborts the export and
// reports how many records made it.
ExportResult export_records(const std::vector<IndexRecord>& records, ExportSink& sink);

// Absolute path of a file listed in a record. Raises StaleIndexError when
// the file has vanished since the crawl, and Error when the name was never
// part of the record.
std::filesystem::path fetch(const IndexRecord& record, std::string_view name);

// The query view of a record: state point keys plus the document under
// "doc", mirroring Project::find_jobs semantics.
Value query_view(const IndexRecord& record);

}  // namespace signac::index
