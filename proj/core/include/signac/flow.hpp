#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "signac/project.hpp"
#include "signac/value.hpp"

namespace signac::flow {

// ---------------------------------------------------------------------------
// Conditions

// A named, total predicate over a job. Missing files, absent documents or
// type mismatches evaluate to false, never to an error.
struct Condition {
    std::string name;
    std::function<bool(const Job&)> predicate;

    bool operator()(const Job& job) const;
};

Condition file_exists(std::string filename);
Condition doc_key_exists(std::string key);
Condition doc_gte(std::string key, double threshold);
Condition doc_eq(std::string key, Value expected);
Condition always();
Condition never();

// Named user-registered predicates, resolvable from workflow definition
// files alongside the built-in vocabulary.
class ConditionRegistry {
public:
    void add(Condition condition);
    const Condition* find(std::string_view name) const;

private:
    std::vector<Condition> conditions_;
};

// Parses one condition spec string:
//   file_exists:NAME | doc_key_exists:KEY | doc_gte:KEY:NUMBER |
//   doc_eq:KEY:JSON | always | never | a name found in `registry`
Condition parse_condition(const std::string& spec, const ConditionRegistry* registry = nullptr);

// ---------------------------------------------------------------------------
// Operations

// A named command acting on one job. The command template may reference
// {job.id}, {job.ws} and {job.sp.<dotted path>}.
struct OperationDef {
    std::string name;
    std::string cmd;
    std::vector<Condition> pre;
    std::vector<Condition> post;
};

// Substitutes template placeholders with job-specific text (numbers render
// in canonical form). Unresolvable placeholders raise TemplateError naming
// the offender; non-placeholder braces pass through untouched.
std::string render_cmd(const OperationDef& op, const Job& job);

// The atomic unit of execution and submission: one operation paired with
// one job.
struct JobOperation {
    JobId job_id;
    std::string op_name;

    std::string jo_id() const { return job_id.str() + "-" + op_name; }
};

// ---------------------------------------------------------------------------
// Schedulers and script generation

enum class SchedulerStatus { unknown, queued, active, completed, failed };

std::string_view to_string(SchedulerStatus status);
SchedulerStatus scheduler_status_from_string(std::string_view text);

enum class BundleMode { serial, parallel };

struct BundleMember {
    JobOperation jo;
    std::string command;             // rendered, ready for the shell
    std::filesystem::path workdir;   // job workspace; empty = run in place
};

// Job-operations packaged into one cluster submission.
struct Bundle {
    std::vector<BundleMember> members;  // non-empty, distinct jo_ids
    BundleMode mode = BundleMode::serial;
};

// A scheduler dialect is data: a directive prefix plus a table mapping
// generic resource keys to directive text. Adding a dialect never touches
// engine logic.
struct ScriptDialect {
    std::string name;
    std::string directive_prefix;  // "#SBATCH", "#PBS", ...
    // resource key -> directive format; "{}" is replaced by the value
    std::vector<std::pair<std::string, std::string>> directives;
};

const ScriptDialect& slurm_dialect();
const ScriptDialect& torque_dialect();
const ScriptDialect& simulated_dialect();

// Renders one POSIX shell submission script: shebang, one directive line
// per resource, then the member commands (serial: sequential lines;
// parallel: backgrounded with a trailing `wait`). Pure function of its
// arguments; a resource key without a directive raises ScriptError.
std::string generate_script(const Bundle& bundle, const ScriptDialect& dialect,
                            const std::map<std::string, std::string>& resources = {});

class Scheduler {
public:
    virtual ~Scheduler() = default;
    virtual std::string name() const = 0;
    virtual const ScriptDialect& dialect() const = 0;
    // Submits a script; returns the cluster job id. Throws on rejection.
    virtual std::string submit(const Bundle& bundle, const std::string& script) = 0;
    virtual SchedulerStatus status(const std::string& jo_id) const = 0;
};

// In-memory scheduler for tests and local experimentation. Submitted
// job-operations start `queued`; tests drive transitions explicitly.
class SimulatedScheduler final : public Scheduler {
public:
    std::string name() const override { return "simulated"; }
    const ScriptDialect& dialect() const override { return simulated_dialect(); }
    std::string submit(const Bundle& bundle, const std::string& script) override;
    SchedulerStatus status(const std::string& jo_id) const override;

    // Test controls: queued -> active -> completed (or the scripted
    // outcome registered for that jo_id).
    void advance();
    void advance(const std::string& jo_id);
    void set_outcome(const std::string& jo_id, SchedulerStatus outcome);
    void set_status(const std::string& jo_id, SchedulerStatus status);
    // When set, submit() throws after `accept_limit` accepted bundles.
    void set_accept_limit(std::size_t limit) { accept_limit_ = limit; }

    const std::vector<std::string>& submitted_scripts() const { return scripts_; }

private:
    std::size_t next_id_ = 1;
    std::optional<std::size_t> accept_limit_;
    std::map<std::string, SchedulerStatus> statuses_;
    std::map<std::string, SchedulerStatus> outcomes_;
    std::vector<std::string> scripts_;
};

// Script-generation-only schedulers: submit() spools the script into a
// directory for manual submission and reports the job-operation as
// `unknown` thereafter (no live cluster interaction).
class SpoolingScheduler : public Scheduler {
public:
    SpoolingScheduler(std::string name, const ScriptDialect& dialect,
                      std::filesystem::path spool_dir);
    std::string name() const override { return name_; }
    const ScriptDialect& dialect() const override { return dialect_; }
    std::string submit(const Bundle& bundle, const std::string& script) override;
    SchedulerStatus status(const std::string&) const override {
        return SchedulerStatus::unknown;
    }

private:
    std::string name_;
    const ScriptDialect& dialect_;
    std::filesystem::path spool_dir_;
    std::size_t next_id_ = 1;
};

class SlurmTemplate final : public SpoolingScheduler {
public:
    explicit SlurmTemplate(std::filesystem::path spool_dir)
        : SpoolingScheduler("slurm", slurm_dialect(), std::move(spool_dir)) {}
};

class TorqueTemplate final : public SpoolingScheduler {
public:
    explicit TorqueTemplate(std::filesystem::path spool_dir)
        : SpoolingScheduler("torque", torque_dialect(), std::move(spool_dir)) {}
};

// One probe: if `binary` is found on PATH, `make` builds the scheduler.
struct SchedulerProbe {
    std::string binary;
    std::function<std::unique_ptr<Scheduler>()> make;
};

std::vector<SchedulerProbe> default_probe_table(const std::filesystem::path& spool_dir);

// Constructs a scheduler by name ("simulated", "slurm", "torque").
std::unique_ptr<Scheduler> make_scheduler(std::string_view name,
                                          const std::filesystem::path& spool_dir);

// An explicit override wins; otherwise the first probe whose binary exists
// on PATH; otherwise the simulated fallback. Never fails.
std::unique_ptr<Scheduler> detect_scheduler(
    const std::vector<SchedulerProbe>& probes,
    const std::optional<std::string>& override_name = std::nullopt,
    const std::filesystem::path& spool_dir = ".");

// ---------------------------------------------------------------------------
// Workflow engine

struct RunOptions {
    std::vector<std::string> op_names;  // restrict to these operations; empty = all
    bool pretend = false;               // print commands, execute nothing
    bool to_completion = false;         // loop until no operation is eligible
    int parallelism = 1;                // concurrent child processes (distinct jobs)
    std::ostream* echo = nullptr;       // pretend/trace output target
};

struct Execution {
    std::string jo_id;
    std::string command;
    int exit_code = 0;
    bool executed = false;  // false in pretend mode
};

struct RunReport {
    std::vector<Execution> executions;
    bool cycle_guard_tripped = false;

    std::size_t failures() const;
};

struct SubmitOptions {
    std::size_t bundle_size = 1;
    BundleMode mode = BundleMode::serial;
    std::map<std::string, std::string> resources;
    std::vector<std::string> op_names;  // restrict; empty = all
};

struct SubmitReport {
    std::vector<std::string> cluster_job_ids;
    std::size_t submitted_pairs = 0;
    std::size_t skipped_pairs = 0;  // already queued or active
    std::optional<std::string> error;
};

// Per-(job, operation) workflow state.
enum class OpState { completed, eligible, blocked };

std::string_view to_string(OpState state);

struct StatusRow {
    JobId job_id;
    std::string op_name;
    OpState state = OpState::blocked;
    SchedulerStatus scheduler_status = SchedulerStatus::unknown;
};

struct StatusTable {
    std::vector<StatusRow> rows;  // ascending job id, definition order within

    // {job_id: {op_name: {state, scheduler_status}}}
    Value to_json() const;
    std::string to_text() const;
};

// A workflow over a project: an ordered list of operations with pre/post
// conditions. Several WorkflowProjects may drive one data space.
class WorkflowProject {
public:
    explicit WorkflowProject(Project project);

    void add_operation(OperationDef op);
    const std::vector<OperationDef>& operations() const { return operations_; }
    const Project& project() const { return project_; }

    // all(pre) && !all(post). An operation with an empty post list is
    // never considered complete: it stays eligible whenever its
    // pre-conditions hold (see status()).
    bool eligible(const OperationDef& op, const Job& job) const;
    bool completed(const OperationDef& op, const Job& job) const;

    // Eligible operations in definition order.
    std::vector<const OperationDef*> next_operations(const Job& job) const;

    // Executes (or prints) the first eligible operation per job per pass,
    // each as a /bin/sh child with the job workspace as working directory.
    // Child failures are recorded, not thrown. With to_completion, passes
    // repeat until a fixed point, bounded by num_ops * num_jobs
    // executions.
    RunReport run(const RunOptions& options = {});

    // Collects eligible job-operations not already queued or active,
    // groups them into bundles, generates one script per bundle and
    // submits each. The jo_id -> cluster id mapping lands in the status
    // store so repeated submission is a no-op while pairs are in flight.
    SubmitReport submit(Scheduler& scheduler, const SubmitOptions& options = {});

    // Workflow state of every (job, operation) pair, joined with recorded
    // scheduler statuses (refreshed through `scheduler` when given).
    StatusTable status(const Scheduler* scheduler = nullptr) const;

private:
    Project project_;
    std::vector<OperationDef> operations_;
};

// ---------------------------------------------------------------------------
// Status store: "<root>/.flow_status.json", written atomically.

struct StatusEntry {
    std::string cluster_job_id;
    SchedulerStatus last_status = SchedulerStatus::unknown;
};

class StatusStore {
public:
    static StatusStore load(const Project& project);
    void save(const Project& project) const;

    std::optional<StatusEntry> get(const std::string& jo_id) const;
    void set(const std::string& jo_id, StatusEntry entry);

private:
    std::map<std::string, StatusEntry> entries_;
};

// ---------------------------------------------------------------------------
// Declarative workflow files (the CLI surface):
// {"operations": [{"name", "cmd", "pre": [spec...], "post": [spec...]}]}
WorkflowProject load_workflow_file(Project project, const std::filesystem::path& file,
                                   const ConditionRegistry* registry = nullptr);

inline constexpr std::string_view kWorkflowFileName = "signac_workflow.json";
inline constexpr std::string_view kStatusStoreFileName = ".flow_status.json";
inline constexpr std::string_view kScriptSpoolDirName = ".flow_scripts";

}  // namespace signac::flow
