#include "signac/flow.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "signac/atomic_io.hpp"
#include "signac/canonical.hpp"
#include "signac/errors.hpp"

namespace signac::flow {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Conditions

bool Condition::operator()(const Job& job) const {
    if (!predicate) return false;
    try {
        return predicate(job);
    } catch (...) {
        return false;  // conditions are total: anything unreadable is "not met"
    }
}

Condition file_exists(std::string filename) {
    return {"file_exists:" + filename,
            [filename](const Job& job) { return job.isfile(filename); }};
}

Condition doc_key_exists(std::string key) {
    return {"doc_key_exists:" + key,
            [key](const Job& job) { return job.document_value(key).has_value(); }};
}

Condition doc_gte(std::string key, double threshold) {
    return {"doc_gte:" + key + ":" + canonical_float_text(threshold),
            [key, threshold](const Job& job) {
                const auto v = job.document_value(key);
                return v && v->is_number() && v->get<double>() >= threshold;
            }};
}

Condition doc_eq(std::string key, Value expected) {
    return {"doc_eq:" + key + ":" + expected.dump(),
            [key, expected](const Job& job) {
                const auto v = job.document_value(key);
                return v && *v == expected;
            }};
}

Condition always() {
    return {"always", [](const Job&) { return true; }};
}

Condition never() {
    return {"never", [](const Job&) { return false; }};
}

void ConditionRegistry::add(Condition condition) {
    if (condition.name.empty()) {
        throw Error("registered conditions must be named");
    }
    conditions_.push_back(std::move(condition));
}

const Condition* ConditionRegistry::find(std::string_view name) const {
    for (const auto& c : conditions_) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

Condition parse_condition(const std::string& spec, const ConditionRegistry* registry) {
    if (spec == "always") return always();
    if (spec == "never") return never();

    const auto colon = spec.find(':');
    const std::string kind = colon == std::string::npos ? spec : spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? std::string() : spec.substr(colon + 1);

    if (kind == "file_exists") {
        if (rest.empty()) throw ParseError("file_exists condition needs a file name: '" + spec + "'");
        return file_exists(rest);
    }
    if (kind == "doc_key_exists") {
        if (rest.empty()) throw ParseError("doc_key_exists condition needs a key: '" + spec + "'");
        return doc_key_exists(rest);
    }
    if (kind == "doc_gte") {
        const auto sep = rest.find(':');
        if (sep == std::string::npos) {
            throw ParseError("doc_gte condition needs KEY:NUMBER: '" + spec + "'");
        }
        const std::string key = rest.substr(0, sep);
        const std::string number = rest.substr(sep + 1);
        try {
            std::size_t consumed = 0;
            const double threshold = std::stod(number, &consumed);
            if (consumed != number.size()) throw std::invalid_argument(number);
            return doc_gte(key, threshold);
        } catch (const std::exception&) {
            throw ParseError("doc_gte threshold is not a number: '" + spec + "'");
        }
    }
    if (kind == "doc_eq") {
        const auto sep = rest.find(':');
        if (sep == std::string::npos) {
            throw ParseError("doc_eq condition needs KEY:JSON: '" + spec + "'");
        }
        const std::string key = rest.substr(0, sep);
        Value expected = Value::parse(rest.substr(sep + 1), nullptr, false);
        if (expected.is_discarded()) {
            throw ParseError("doc_eq value is not valid JSON: '" + spec + "'");
        }
        return doc_eq(key, std::move(expected));
    }
    if (registry != nullptr) {
        if (const Condition* c = registry->find(spec)) return *c;
    }
    throw ParseError("unknown condition spec '" + spec + "'");
}

// ---------------------------------------------------------------------------
// Command templates

namespace {

std::string render_scalar(const Value& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_float()) return canonical_float_text(v.get<double>());
    return v.dump();  // integers, bools, null, arrays, objects
}

}  // namespace

std::string render_cmd(const OperationDef& op, const Job& job) {
    const std::string& tpl = op.cmd;
    std::string out;
    out.reserve(tpl.size() + 32);
    std::size_t i = 0;
    while (i < tpl.size()) {
        if (tpl[i] != '{') {
            out.push_back(tpl[i++]);
            continue;
        }
        const std::size_t close = tpl.find('}', i);
        const std::string token =
            close == std::string::npos ? std::string() : tpl.substr(i + 1, close - i - 1);
        if (close == std::string::npos || token.rfind("job.", 0) != 0) {
            out.push_back(tpl[i++]);  // not a placeholder; copy the brace through
            continue;
        }
        if (token == "job.id") {
            out += job.id().str();
        } else if (token == "job.ws") {
            out += job.workspace_path().string();
        } else if (token.rfind("job.sp.", 0) == 0) {
            const std::string path = token.substr(7);
            const Value* v = lookup_path(job.statepoint(), path);
            if (v == nullptr) {
                throw TemplateError("unresolvable placeholder '{" + token + "}' in operation '" +
                                    op.name + "'");
            }
            out += render_scalar(*v);
        } else {
            throw TemplateError("unknown placeholder '{" + token + "}' in operation '" + op.name +
                                "'");
        }
        i = close + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dialects and script generation

std::string_view to_string(SchedulerStatus status) {
    switch (status) {
        case SchedulerStatus::queued: return "queued";
        case SchedulerStatus::active: return "active";
        case SchedulerStatus::completed: return "completed";
        case SchedulerStatus::failed: return "failed";
        default: return "unknown";
    }
}

SchedulerStatus scheduler_status_from_string(std::string_view text) {
    if (text == "queued") return SchedulerStatus::queued;
    if (text == "active") return SchedulerStatus::active;
    if (text == "completed") return SchedulerStatus::completed;
    if (text == "failed") return SchedulerStatus::failed;
    return SchedulerStatus::unknown;
}

const ScriptDialect& slurm_dialect() {
    static const ScriptDialect dialect{
        "slurm",
        "#SBATCH",
        {
            {"job_name", "--job-name={}"},
            {"nodes", "--nodes={}"},
            {"ntasks", "--ntasks={}"},
            {"walltime", "--time={}"},
            {"partition", "--partition={}"},
            {"memory", "--mem={}"},
            {"output", "--output={}"},
        },
    };
    return dialect;
}

const ScriptDialect& torque_dialect() {
    static const ScriptDialect dialect{
        "torque",
        "#PBS",
        {
            {"job_name", "-N {}"},
            {"nodes", "-l nodes={}"},
            {"ntasks", "-l procs={}"},
            {"walltime", "-l walltime={}"},
            {"partition", "-q {}"},
            {"memory", "-l mem={}"},
            {"output", "-o {}"},
        },
    };
    return dialect;
}

const ScriptDialect& simulated_dialect() {
    static const ScriptDialect dialect{
        "simulated",
        "#",
        {
            {"job_name", "job_name={}"},
            {"nodes", "nodes={}"},
            {"ntasks", "ntasks={}"},
            {"walltime", "walltime={}"},
            {"partition", "partition={}"},
            {"memory", "memory={}"},
            {"output", "output={}"},
        },
    };
    return dialect;
}

namespace {

// POSIX single-quote quoting; embedded quotes via the '\'' splice.
std::string shell_quote(const std::string& text) {
    std::string out = "'";
    for (char c : text) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('\'');
    return out;
}

}  // namespace

std::string generate_script(const Bundle& bundle, const ScriptDialect& dialect,
                            const std::map<std::string, std::string>& resources) {
    if (bundle.members.empty()) {
        throw ScriptError("cannot generate a script for an empty bundle");
    }
    std::string out = "#!/bin/bash\n";
    for (const auto& [key, value] : resources) {
        const auto it = std::find_if(dialect.directives.begin(), dialect.directives.end(),
                                     [&](const auto& d) { return d.first == key; });
        if (it == dialect.directives.end()) {
            throw ScriptError("resource '" + key + "' is not supported by the " + dialect.name +
                              " dialect");
        }
        std::string directive = it->second;
        const auto pos = directive.find("{}");
        if (pos != std::string::npos) directive.replace(pos, 2, value);
        out += dialect.directive_prefix + " " + directive + "\n";
    }
    out += "\n";
    for (const auto& member : bundle.members) {
        // each member executes in its job workspace, one line per member
        std::string line = member.command;
        if (!member.workdir.empty()) {
            line = "( cd " + shell_quote(member.workdir.string()) + " && " + member.command + " )";
        }
        out += line;
        if (bundle.mode == BundleMode::parallel) out += " &";
        out += "\n";
    }
    if (bundle.mode == BundleMode::parallel) {
        out += "wait\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// Schedulers

std::string SimulatedScheduler::submit(const Bundle& bundle, const std::string& script) {
    if (accept_limit_ && scripts_.size() >= *accept_limit_) {
        throw Error("simulated scheduler rejected the submission (accept limit reached)");
    }
    const std::string cluster_id = "sim-" + std::to_string(next_id_++);
    for (const auto& member : bundle.members) {
        statuses_[member.jo.jo_id()] = SchedulerStatus::queued;
    }
    scripts_.push_back(script);
    return cluster_id;
}

SchedulerStatus SimulatedScheduler::status(const std::string& jo_id) const {
    const auto it = statuses_.find(jo_id);
    return it == statuses_.end() ? SchedulerStatus::unknown : it->second;
}

void SimulatedScheduler::advance() {
    for (auto& [jo_id, status] : statuses_) {
        if (status == SchedulerStatus::queued) {
            status = SchedulerStatus::active;
        } else if (status == SchedulerStatus::active) {
            const auto it = outcomes_.find(jo_id);
            status = it == outcomes_.end() ? SchedulerStatus::completed : it->second;
        }
    }
}

void SimulatedScheduler::advance(const std::string& jo_id) {
    const auto it = statuses_.find(jo_id);
    if (it == statuses_.end()) return;
    if (it->second == SchedulerStatus::queued) {
        it->second = SchedulerStatus::active;
    } else if (it->second == SchedulerStatus::active) {
        const auto out = outcomes_.find(jo_id);
        it->second = out == outcomes_.end() ? SchedulerStatus::completed : out->second;
    }
}

void SimulatedScheduler::set_outcome(const std::string& jo_id, SchedulerStatus outcome) {
    outcomes_[jo_id] = outcome;
}

void SimulatedScheduler::set_status(const std::string& jo_id, SchedulerStatus status) {
    statuses_[jo_id] = status;
}

SpoolingScheduler::SpoolingScheduler(std::string name, const ScriptDialect& dialect,
                                     fs::path spool_dir)
    : name_(std::move(name)), dialect_(dialect), spool_dir_(std::move(spool_dir)) {}

std::string SpoolingScheduler::submit(const Bundle&, const std::string& script) {
    std::error_code ec;
    fs::create_directories(spool_dir_, ec);
    if (ec) {
        throw IoError("cannot create script spool directory " + spool_dir_.string());
    }
    std::string cluster_id;
    fs::path target;
    do {
        cluster_id = name_ + "-" + std::to_string(next_id_++);
        target = spool_dir_ / (cluster_id + ".sh");
    } while (fs::exists(target));
    std::ofstream out(target);
    if (!out.is_open()) {
        throw IoError("cannot write submission script " + target.string());
    }
    out << script;
    return cluster_id;
}

namespace {

bool binary_on_path(const std::string& binary) {
    const char* path_env = std::getenv("PATH");
    if (path_env == nullptr) return false;
    std::stringstream stream(path_env);
    std::string dir;
    while (std::getline(stream, dir, ':')) {
        if (dir.empty()) continue;
        std::error_code ec;
        const fs::path candidate = fs::path(dir) / binary;
        if (fs::is_regular_file(candidate, ec) &&
            ::access(candidate.c_str(), X_OK) == 0) {
            return true;
        }
    }
    return false;
}

}  // namespace

std::vector<SchedulerProbe> default_probe_table(const fs::path& spool_dir) {
    return {
        {"sbatch", [spool_dir] { return std::make_unique<SlurmTemplate>(spool_dir); }},
        {"qsub", [spool_dir] { return std::make_unique<TorqueTemplate>(spool_dir); }},
    };
}

std::unique_ptr<Scheduler> make_scheduler(std::string_view name, const fs::path& spool_dir) {
    if (name == "simulated") return std::make_unique<SimulatedScheduler>();
    if (name == "slurm") return std::make_unique<SlurmTemplate>(spool_dir);
    if (name == "torque") return std::make_unique<TorqueTemplate>(spool_dir);
    throw ParseError("unknown scheduler '" + std::string(name) + "'");
}

std::unique_ptr<Scheduler> detect_scheduler(const std::vector<SchedulerProbe>& probes,
                                            const std::optional<std::string>& override_name,
                                            const fs::path& spool_dir) {
    if (override_name) {
        return make_scheduler(*override_name, spool_dir);
    }
    for (const auto& probe : probes) {
        if (binary_on_path(probe.binary)) {
            return probe.make();
        }
    }
    return std::make_unique<SimulatedScheduler>();
}

// ---------------------------------------------------------------------------
// Status store

StatusStore StatusStore::load(const Project& project) {
    StatusStore store;
    const auto doc = read_document(project.root() / kStatusStoreFileName);
    if (doc && doc->is_object()) {
        for (auto it = doc->begin(); it != doc->end(); ++it) {
            StatusEntry entry;
            entry.cluster_job_id = it.value().value("cluster_job_id", "");
            entry.last_status =
                scheduler_status_from_string(it.value().value("last_status", "unknown"));
            store.entries_[it.key()] = std::move(entry);
        }
    }
    return store;
}

void StatusStore::save(const Project& project) const {
    Value doc = Value::object();
    for (const auto& [jo_id, entry] : entries_) {
        doc[jo_id] = {
            {"cluster_job_id", entry.cluster_job_id},
            {"last_status", std::string(to_string(entry.last_status))},
        };
    }
    write_document_atomic(project.root() / kStatusStoreFileName, doc);
}

std::optional<StatusEntry> StatusStore::get(const std::string& jo_id) const {
    const auto it = entries_.find(jo_id);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void StatusStore::set(const std::string& jo_id, StatusEntry entry) {
    entries_[jo_id] = std::move(entry);
}

// ---------------------------------------------------------------------------
// Workflow engine

WorkflowProject::WorkflowProject(Project project) : project_(std::move(project)) {}

void WorkflowProject::add_operation(OperationDef op) {
    if (op.name.empty()) {
        throw Error("operation name must be non-empty");
    }
    const bool duplicate = std::any_of(operations_.begin(), operations_.end(),
                                       [&](const OperationDef& o) { return o.name == op.name; });
    if (duplicate) {
        throw Error("operation '" + op.name + "' is already defined");
    }
    operations_.push_back(std::move(op));
}

bool WorkflowProject::eligible(const OperationDef& op, const Job& job) const {
    const bool pre_met = std::all_of(op.pre.begin(), op.pre.end(),
                                     [&](const Condition& c) { return c(job); });
    if (!pre_met) return false;
    // Empty post list: never complete, re-eligible whenever pre holds.
    if (op.post.empty()) return true;
    return !std::all_of(op.post.begin(), op.post.end(),
                        [&](const Condition& c) { return c(job); });
}

bool WorkflowProject::completed(const OperationDef& op, const Job& job) const {
    if (op.post.empty()) return false;
    return std::all_of(op.post.begin(), op.post.end(),
                       [&](const Condition& c) { return c(job); });
}

std::vector<const OperationDef*> WorkflowProject::next_operations(const Job& job) const {
    std::vector<const OperationDef*> out;
    for (const auto& op : operations_) {
        if (eligible(op, job)) out.push_back(&op);
    }
    return out;
}

namespace {

pid_t spawn_shell(const std::string& command, const fs::path& workdir) {
    const pid_t pid = ::fork();
    if (pid < 0) {
        throw IoError("fork failed");
    }
    if (pid == 0) {
        if (::chdir(workdir.c_str()) != 0) _exit(126);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }
    return pid;
}

int wait_exit_code(pid_t pid) {
    int status = 0;
    while (::waitpid(pid, &status, 0) < 0) {
        if (errno != EINTR) throw IoError("waitpid failed");
    }
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    if (WIFSIGNALED(status)) return 128 + WTERMSIG(status);
    return -1;
}

struct PlannedTask {
    Job job;
    const OperationDef* op;
    std::string command;
};

void check_known_ops(const std::vector<OperationDef>& operations,
                     const std::vector<std::string>& names) {
    for (const auto& name : names) {
        const bool known = std::any_of(operations.begin(), operations.end(),
                                       [&](const OperationDef& o) { return o.name == name; });
        if (!known) {
            throw Error("unknown operation '" + name + "'");
        }
    }
}

}  // namespace

std::size_t RunReport::failures() const {
    return static_cast<std::size_t>(
        std::count_if(executions.begin(), executions.end(),
                      [](const Execution& e) { return e.executed && e.exit_code != 0; }));
}

RunReport WorkflowProject::run(const RunOptions& options) {
    check_known_ops(operations_, options.op_names);
    const auto restricted = [&](const OperationDef& op) {
        return options.op_names.empty() ||
               std::find(options.op_names.begin(), options.op_names.end(), op.name) !=
                   options.op_names.end();
    };

    RunReport report;
    const std::vector<Job> jobs = project_.find_jobs();
    const std::size_t budget = operations_.size() * jobs.size();
    std::size_t executed_total = 0;

    while (true) {
        // Plan: the first eligible (restricted) operation per job.
        std::vector<PlannedTask> plan;
        for (const auto& job : jobs) {
            for (const auto& op : operations_) {
                if (!restricted(op)) continue;
                if (!eligible(op, job)) continue;
                plan.push_back({job, &op, render_cmd(op, job)});
                break;
            }
        }
        if (plan.empty()) break;

        if (options.pretend) {
            for (const auto& task : plan) {
                if (options.echo != nullptr) *options.echo << task.command << "\n";
                report.executions.push_back(
                    {JobOperation{task.job.id(), task.op->name}.jo_id(), task.command, 0, false});
            }
            break;  // nothing changes in pretend mode; one pass shows it all
        }

        std::size_t executed_this_pass = 0;
        if (options.parallelism <= 1) {
            for (const auto& task : plan) {
                if (executed_total >= budget && options.to_completion) break;
                // conditions may have changed since planning
                if (!eligible(*task.op, task.job)) continue;
                const int code = wait_exit_code(spawn_shell(task.command, task.job.workspace_path()));
                report.executions.push_back(
                    {JobOperation{task.job.id(), task.op->name}.jo_id(), task.command, code, true});
                ++executed_this_pass;
                ++executed_total;
            }
        } else {
            std::map<pid_t, std::size_t> running;
            std::size_t next = 0;
            while (next < plan.size() || !running.empty()) {
                while (running.size() < static_cast<std::size_t>(options.parallelism) &&
                       next < plan.size() && (executed_total + running.size()) < budget) {
                    running[spawn_shell(plan[next].command, plan[next].job.workspace_path())] = next;
                    ++next;
                }
                if (running.empty()) break;
                int status = 0;
                const pid_t pid = ::waitpid(-1, &status, 0);
                const auto it = running.find(pid);
                if (it == running.end()) continue;
                const PlannedTask& task = plan[it->second];
                int code = -1;
                if (WIFEXITED(status)) code = WEXITSTATUS(status);
                else if (WIFSIGNALED(status)) code = 128 + WTERMSIG(status);
                report.executions.push_back(
                    {JobOperation{task.job.id(), task.op->name}.jo_id(), task.command, code, true});
                running.erase(it);
                ++executed_this_pass;
                ++executed_total;
            }
        }

        if (!options.to_completion) break;
        if (executed_this_pass == 0) break;
        if (executed_total >= budget) {
            // One verification pass: are operations still eligible?
            bool still_eligible = false;
            for (const auto& job : jobs) {
                for (const auto& op : operations_) {
                    if (restricted(op) && eligible(op, job)) {
                        still_eligible = true;
                        break;
                    }
                }
                if (still_eligible) break;
            }
            report.cycle_guard_tripped = still_eligible;
            break;
        }
    }
    return report;
}

SubmitReport WorkflowProject::submit(Scheduler& scheduler, const SubmitOptions& options) {
    if (options.bundle_size == 0) {
        throw Error("bundle size must be at least 1");
    }
    check_known_ops(operations_, options.op_names);
    const auto restricted = [&](const OperationDef& op) {
        return options.op_names.empty() ||
               std::find(options.op_names.begin(), options.op_names.end(), op.name) !=
                   options.op_names.end();
    };

    StatusStore store = StatusStore::load(project_);
    SubmitReport report;

    std::vector<BundleMember> pending;
    for (const auto& job : project_.find_jobs()) {
        for (const OperationDef* op : next_operations(job)) {
            if (!restricted(*op)) continue;
            const JobOperation jo{job.id(), op->name};
            SchedulerStatus effective = scheduler.status(jo.jo_id());
            if (effective == SchedulerStatus::unknown) {
                if (const auto entry = store.get(jo.jo_id())) {
                    effective = entry->last_status;
                }
            }
            if (effective == SchedulerStatus::queued || effective == SchedulerStatus::active) {
                ++report.skipped_pairs;
                continue;
            }
            pending.push_back({jo, render_cmd(*op, job), job.workspace_path()});
        }
    }

    for (std::size_t begin = 0; begin < pending.size(); begin += options.bundle_size) {
        const std::size_t end = std::min(begin + options.bundle_size, pending.size());
        Bundle bundle{{pending.begin() + static_cast<std::ptrdiff_t>(begin),
                       pending.begin() + static_cast<std::ptrdiff_t>(end)},
                      options.mode};
        const std::string script = generate_script(bundle, scheduler.dialect(), options.resources);
        std::string cluster_id;
        try {
            cluster_id = scheduler.submit(bundle, script);
        } catch (const std::exception& e) {
            report.error = e.what();  // partial submission; what went out stays out
            break;
        }
        for (const auto& member : bundle.members) {
            store.set(member.jo.jo_id(), {cluster_id, SchedulerStatus::queued});
        }
        report.cluster_job_ids.push_back(cluster_id);
        report.submitted_pairs += bundle.members.size();
    }

    store.save(project_);
    return report;
}

StatusTable WorkflowProject::status(const Scheduler* scheduler) const {
    const StatusStore store = StatusStore::load(project_);
    StatusTable table;
    for (const auto& job : project_.find_jobs()) {
        for (const auto& op : operations_) {
            StatusRow row;
            row.job_id = job.id();
            row.op_name = op.name;
            if (completed(op, job)) {
                row.state = OpState::completed;
            } else if (eligible(op, job)) {
                row.state = OpState::eligible;
            } else {
                row.state = OpState::blocked;
            }
            const std::string jo_id = JobOperation{job.id(), op.name}.jo_id();
            if (const auto entry = store.get(jo_id)) {
                row.scheduler_status = entry->last_status;
            }
            if (scheduler != nullptr) {
                const SchedulerStatus live = scheduler->status(jo_id);
                if (live != SchedulerStatus::unknown) {
                    row.scheduler_status = live;
                }
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

std::string_view to_string(OpState state) {
    switch (state) {
        case OpState::completed: return "completed";
        case OpState::eligible: return "eligible";
        default: return "blocked";
    }
}

Value StatusTable::to_json() const {
    Value out = Value::object();
    for (const auto& row : rows) {
        out[row.job_id.str()][row.op_name] = {
            {"state", std::string(to_string(row.state))},
            {"scheduler_status", std::string(to_string(row.scheduler_status))},
        };
    }
    return out;
}

std::string StatusTable::to_text() const {
    const std::array<std::string, 4> header = {"job", "operation", "state", "scheduler"};
    std::array<std::size_t, 4> width = {header[0].size(), header[1].size(), header[2].size(),
                                        header[3].size()};
    for (const auto& row : rows) {
        width[0] = std::max(width[0], row.job_id.str().size());
        width[1] = std::max(width[1], row.op_name.size());
        width[2] = std::max(width[2], to_string(row.state).size());
        width[3] = std::max(width[3], to_string(row.scheduler_status).size());
    }
    std::ostringstream out;
    const auto emit = [&](std::string_view a, std::string_view b, std::string_view c,
                          std::string_view d) {
        out << std::left << std::setw(static_cast<int>(width[0]) + 2) << a
            << std::setw(static_cast<int>(width[1]) + 2) << b
            << std::setw(static_cast<int>(width[2]) + 2) << c << d << "\n";
    };
    emit(header[0], header[1], header[2], header[3]);
    for (const auto& row : rows) {
        emit(row.job_id.str(), row.op_name, to_string(row.state),
             to_string(row.scheduler_status));
    }
    return out.str();
}

WorkflowProject load_workflow_file(Project project, const fs::path& file,
                                   const ConditionRegistry* registry) {
    if (!fs::exists(file)) {
        throw IoError("workflow file not found: " + file.string());
    }
    const auto doc = read_document(file);
    if (!doc || !doc->is_object() || !doc->contains("operations") ||
        !(*doc)["operations"].is_array()) {
        throw ParseError("workflow file must be a JSON object with an 'operations' array: " +
                         file.string());
    }
    WorkflowProject wf(std::move(project));
    for (const auto& item : (*doc)["operations"]) {
        if (!item.is_object() || !item.contains("name") || !item["name"].is_string() ||
            !item.contains("cmd") || !item["cmd"].is_string()) {
            throw ParseError("each workflow operation needs string fields 'name' and 'cmd'");
        }
        OperationDef op;
        op.name = item["name"].get<std::string>();
        op.cmd = item["cmd"].get<std::string>();
        for (const char* field : {"pre", "post"}) {
            if (!item.contains(field)) continue;
            if (!item[field].is_array()) {
                throw ParseError("operation '" + op.name + "': '" + field +
                                 "' must be an array of condition specs");
            }
            for (const auto& spec : item[field]) {
                if (!spec.is_string()) {
                    throw ParseError("operation '" + op.name + "': condition specs are strings");
                }
                Condition c = parse_condition(spec.get<std::string>(), registry);
                (field == std::string_view("pre") ? op.pre : op.post).push_back(std::move(c));
            }
        }
        try {
            wf.add_operation(std::move(op));
        } catch (const Error& e) {
            throw ParseError(std::string(e.what()) + " in " + file.string());
        }
    }
    return wf;
}

}  // namespace signac::flow
