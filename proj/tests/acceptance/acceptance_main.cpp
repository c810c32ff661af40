// Acceptance suite: end-to-end checks over the full stack, one criterion
// per run block, each with a hard wall-clock limit. Prints one PASS/FAIL
// line per criterion; the exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "signac/atomic_io.hpp"
#include "signac/bench.hpp"
#include "signac/canonical.hpp"
#include "signac/errors.hpp"
#include "signac/flow.hpp"
#include "signac/index.hpp"
#include "signac/project.hpp"
#include "signac/query.hpp"
#include "support/oracles.hpp"
#include "support/proc.hpp"
#include "support/random_data.hpp"
#include "support/temp_dir.hpp"

using namespace signac;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

const std::string kSignac = SIGNAC_CLI_PATH;
const std::string kIdg = IDG_PATH;

struct Failure {
    std::string message;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw Failure{message};
}

// --------------------------------------------------------------------------
// 1. Canonical identity

void criterion_canonical_identity() {
    Rng rng(20240601);

    // 10,000 state points, 5 key-order shuffles each: identical ids
    for (int i = 0; i < 10000; ++i) {
        const Value sp = random_statepoint(rng);
        const JobId reference = compute_id(sp);
        for (int s = 0; s < 5; ++s) {
            const auto shuffled = OrderedValue::parse(shuffled_json_text(sp, rng));
            require(compute_id(shuffled) == reference,
                    "key-order shuffle changed the id of " + sp.dump());
        }
    }

    // zero collisions across 10^5 distinct state points
    std::set<std::string> bodies;
    std::set<std::string> ids;
    int distinct = 0;
    while (distinct < 100000) {
        Value sp = random_statepoint(rng);
        sp["n"] = distinct;  // force distinctness without losing variety
        const std::string body = canonicalize(sp);
        if (!bodies.insert(body).second) continue;
        ++distinct;
        require(ids.insert(compute_id(sp).str()).second,
                "id collision between distinct state points at " + body);
    }
}

// --------------------------------------------------------------------------
// 2. Query oracle equivalence

void criterion_query_oracle() {
    Rng rng(777000);
    std::vector<Value> docs;
    docs.reserve(1000);
    for (int i = 0; i < 1000; ++i) docs.push_back(random_statepoint(rng));

    std::vector<FilterExpr> filters;
    filters.reserve(200);
    for (int i = 0; i < 200; ++i) filters.push_back(random_filter(rng, 2));

    for (const auto& filter : filters) {
        for (const auto& doc : docs) {
            if (matches(filter, doc) != oracle_matches(filter, doc)) {
                throw Failure{"matches() disagrees with the oracle on doc " + doc.dump() +
                              " filter " + print_filter(filter).dump()};
            }
        }
    }
}

// --------------------------------------------------------------------------
// 3. Ideal gas reproduction (documents + find)

void criterion_ideal_gas() {
    TempDir dir;
    require(run_cmd(shq(kSignac) + " init IdealGasEOS", dir.path()).exit_code == 0,
            "project init failed");
    for (const std::string p : {"0.1", "1.0", "10.0"}) {
        const std::string sp = R"({"p": )" + p + R"(, "N": 1000, "kT": 1.0})";
        require(run_cmd(shq(kSignac) + " job -c " + shq(sp), dir.path()).exit_code == 0,
                "job init failed for p=" + p);
    }

    // one operation: compute V = N*kT/p into the job document
    Value wf = Value::object();
    wf["operations"] = Value::array();
    wf["operations"].push_back(
        {{"name", "compute_volume"},
         {"cmd", shq(kSignac) + " document {job.id} set V \"$(" + shq(kIdg) +
                     " {job.sp.N} {job.sp.kT} {job.sp.p})\""},
         {"post", {"doc_key_exists:V"}}});
    write_document_atomic(dir / "signac_workflow.json", wf);

    const auto run = run_cmd(shq(kSignac) + " run --to-completion", dir.path());
    require(run.exit_code == 0, "run --to-completion failed: " + run.err);

    const Project project = Project::open(dir.path());
    require(project.num_jobs() == 3, "expected 3 jobs");
    for (const auto& job : project.all_jobs()) {
        const double p = job.statepoint()["p"].get<double>();
        const double expected = 1000.0 * 1.0 / p;  // N * kT / p
        const auto v = job.document_value("V");
        require(v.has_value(), "document V missing for p=" + std::to_string(p));
        require(v->is_number(), "document V is not a number");
        require(v->get<double>() == expected,
                "V=" + v->dump() + " but expected " + std::to_string(expected));
    }

    const auto found = run_cmd(shq(kSignac) + " find 'p.$gt' 1.0", dir.path());
    require(found.exit_code == 0, "find failed");
    const auto lines = lines_of(found.out);
    require(lines.size() == 1, "find p.$gt 1.0 printed " + std::to_string(lines.size()) +
                                   " ids, expected exactly 1");
    require(lines[0] == compute_id(Value::parse(R"({"p":10.0,"N":1000,"kT":1.0})")).str(),
            "find selected the wrong job");
}

// --------------------------------------------------------------------------
// 4. CLI tool integration (bash script around idg)

void criterion_cli_integration() {
    const auto volume = run_cmd(shq(kIdg) + " 1000 2.0 1.0", fs::temp_directory_path());
    require(volume.out == "2000.0\n", "idg output mismatch: got '" + volume.out + "'");

    TempDir dir;
    require(run_cmd(shq(kSignac) + " init IdealGasEOS", dir.path()).exit_code == 0,
            "init failed");

    const std::string script =
        "#!/bin/bash\n"
        "N=1000\n"
        "kT=1.0\n"
        "for p in 0.1 1.0 10.0; do\n"
        "  SP=\"{\\\"N\\\": $N, \\\"kT\\\": $kT, \\\"p\\\": $p}\"\n"
        "  WS=`" + kSignac + " job -wc \"$SP\"`\n"
        "  " + kIdg + " $N $kT $p > $WS/V.txt\n"
        "done\n";
    std::ofstream(dir / "run.sh") << script;

    const auto run = run_cmd("sh run.sh", dir.path());
    require(run.exit_code == 0, "bash workflow failed: " + run.err);

    const Project project = Project::open(dir.path());
    require(project.num_jobs() == 3, "expected 3 jobs after the bash workflow");
    for (const auto& job : project.all_jobs()) {
        require(job.isfile("V.txt"), "V.txt missing in " + job.workspace_path().string());
        std::ifstream in(job.fn("V.txt"));
        double v = 0;
        in >> v;
        const double p = job.statepoint()["p"].get<double>();
        const double expected = 1000.0 * 1.0 / p;
        require(v == expected, "V.txt holds " + std::to_string(v) + ", expected " +
                                   std::to_string(expected));
    }
}

// --------------------------------------------------------------------------
// 5. Workflow semantics

void criterion_workflow_semantics() {
    TempDir dir;
    Project project = Project::init("LJ-EOS", dir.path());
    for (const double kt : {0.1, 1.0, 2.0}) {
        Value sp = Value::parse(R"({"seed": 42})");
        sp["kT"] = kt;
        project.open_job(sp).init();
    }
    flow::WorkflowProject wf(project);
    const Job probe = project.all_jobs().front();

    // exhaustive eligibility truth table: all(pre) && !all(post)
    const auto from_bool = [](bool b) { return b ? flow::always() : flow::never(); };
    for (int npre = 0; npre <= 3; ++npre) {
        for (int npost = 1; npost <= 3; ++npost) {
            for (int bits = 0; bits < (1 << (npre + npost)); ++bits) {
                flow::OperationDef op{"t", "true", {}, {}};
                bool all_pre = true;
                bool all_post = true;
                for (int i = 0; i < npre; ++i) {
                    const bool truth = (bits >> i) & 1;
                    all_pre = all_pre && truth;
                    op.pre.push_back(from_bool(truth));
                }
                for (int i = 0; i < npost; ++i) {
                    const bool truth = (bits >> (npre + i)) & 1;
                    all_post = all_post && truth;
                    op.post.push_back(from_bool(truth));
                }
                require(wf.eligible(op, probe) == (all_pre && !all_post),
                        "eligibility formula violated at pre=" + std::to_string(npre) +
                            " post=" + std::to_string(npost) + " bits=" + std::to_string(bits));
            }
        }
    }
    // documented empty-post rule: eligible iff all(pre), never completed
    for (int npre = 0; npre <= 3; ++npre) {
        for (int bits = 0; bits < (1 << npre); ++bits) {
            flow::OperationDef op{"t", "true", {}, {}};
            bool all_pre = true;
            for (int i = 0; i < npre; ++i) {
                const bool truth = (bits >> i) & 1;
                all_pre = all_pre && truth;
                op.pre.push_back(from_bool(truth));
            }
            require(wf.eligible(op, probe) == all_pre, "empty-post eligibility rule violated");
            require(!wf.completed(op, probe), "empty-post operations never complete");
        }
    }

    // the two-operation setup -> simulate workflow converges in order
    wf.add_operation({"setup", "touch init.gsd", {}, {flow::file_exists("init.gsd")}});
    wf.add_operation({"simulate",
                      "touch trajectory.gsd",
                      {flow::file_exists("init.gsd")},
                      {flow::file_exists("trajectory.gsd")}});
    flow::RunOptions options;
    options.to_completion = true;
    const flow::RunReport report = wf.run(options);
    require(!report.cycle_guard_tripped, "two-step workflow tripped the cycle guard");
    require(report.executions.size() == 6, "expected 6 executions, got " +
                                               std::to_string(report.executions.size()));
    std::map<std::string, std::pair<int, int>> order;
    for (int i = 0; i < static_cast<int>(report.executions.size()); ++i) {
        const auto& jo = report.executions[static_cast<std::size_t>(i)].jo_id;
        const auto dash = jo.find('-');
        if (jo.substr(dash + 1) == "setup") {
            order[jo.substr(0, dash)].first = i;
        } else {
            order[jo.substr(0, dash)].second = i;
        }
    }
    require(order.size() == 3, "executions did not cover all jobs");
    for (const auto& [job_id, idx] : order) {
        require(idx.first < idx.second, "simulate ran before setup for " + job_id);
    }
    for (const auto& job : project.all_jobs()) {
        require(wf.next_operations(job).empty(), "workflow did not converge");
    }

    // no-resubmission guard
    fs::create_directories(dir / "p2");
    Project project2 = Project::init("Resubmit", dir / "p2");
    for (int i = 0; i < 3; ++i) {
        Value sp = Value::object();
        sp["i"] = i;
        project2.open_job(sp).init();
    }
    flow::WorkflowProject wf2(project2);
    wf2.add_operation({"work", "true", {}, {flow::file_exists("done.txt")}});
    flow::SimulatedScheduler scheduler;
    const auto first = wf2.submit(scheduler);
    require(first.submitted_pairs == 3, "expected 3 submissions");
    const auto second = wf2.submit(scheduler);
    require(second.submitted_pairs == 0,
            "resubmission guard failed: " + std::to_string(second.submitted_pairs));
    require(second.skipped_pairs == 3, "expected 3 skipped pairs");
}

// --------------------------------------------------------------------------
// 6. Scaling

void criterion_scaling() {
    TempDir dir;
    bench::BenchmarkConfig config;  // the ~1 kB metadata fixture
    config.sizes = {100, 1000, 10000};
    config.repetitions = 3;
    config.seed = 90210;

    for (const auto n : config.sizes) {
        bench::generate_corpus(config, n, bench::corpus_dir(dir.path(), n));
    }
    const auto report = bench::run_benchmarks(config, dir.path());
    const auto verdict = bench::assert_scaling(report, {});  // defaults: 5x const, 3x linear
    if (!verdict.pass) {
        std::string msg = "scaling assertion failed:";
        for (const auto& f : verdict.failures) msg += "\n    " + f;
        msg += "\n    report: " + report.to_json().dump();
        throw Failure{msg};
    }
}

// --------------------------------------------------------------------------
// 7. Index/search equivalence

void criterion_index_equivalence() {
    TempDir dir;
    Project project = Project::init("Equiv", dir.path());
    Rng rng(5401);
    for (int i = 0; i < 1000; ++i) {
        Value sp = random_statepoint(rng);
        sp["uniq"] = i;
        const Job job = project.open_job(sp);
        job.init();
        if (i % 3 == 0) job.set_document_value("score", rng.uniform(0, 100));
    }
    require(project.num_jobs() == 1000, "corpus construction failed");

    std::ostringstream ndjson;
    index::NdjsonSink sink(ndjson);
    const auto exported = index::export_records(index::crawl_workspace(project), sink);
    require(exported.written == 1000 && !exported.error, "export failed");

    std::vector<index::IndexRecord> records;
    for (const auto& line : lines_of(ndjson.str())) {
        records.push_back(index::IndexRecord::from_json(Value::parse(line)));
    }

    for (int f = 0; f < 50; ++f) {
        // mix plain filters with document-addressing ones
        FilterExpr filter = (f % 5 == 4)
                                ? make_and({random_filter(rng, 1),
                                            make_cmp("doc.score", CmpOp::gte, rng.uniform(0, 100))})
                                : random_filter(rng, 2);
        std::set<std::string> from_records;
        for (const auto& record : records) {
            if (matches(filter, index::query_view(record))) {
                from_records.insert(record.id.str());
            }
        }
        std::set<std::string> from_project;
        for (const auto& job : project.find_jobs(filter)) {
            from_project.insert(job.id().str());
        }
        require(from_records == from_project,
                "id sets diverged for filter " + print_filter(filter).dump());
    }
}

// --------------------------------------------------------------------------
// 8. Crash safety

void criterion_crash_safety() {
    TempDir dir;
    Project project = Project::init("Crashes", dir.path());
    Rng rng(111);

    struct InjectedCrash {};
    for (int trial = 0; trial < 100; ++trial) {
        Value sp = Value::object();
        sp["trial"] = trial;
        const Job job = project.open_job(sp);
        const Value original = random_statepoint(rng);
        job.set_document(original);

        const fs::path doc_path = job.workspace_path() / "signac_job_document.json";
        std::ifstream before_in(doc_path, std::ios::binary);
        std::ostringstream before;
        before << before_in.rdbuf();
        before_in.close();

        bool thrown = false;
        try {
            write_document_atomic(doc_path, random_statepoint(rng),
                                  [] { throw InjectedCrash{}; });
        } catch (const InjectedCrash&) {
            thrown = true;
        }
        require(thrown, "fault hook did not fire");

        std::ifstream after_in(doc_path, std::ios::binary);
        std::ostringstream after;
        after << after_in.rdbuf();
        require(after.str() == before.str(),
                "interrupted write corrupted the document in trial " + std::to_string(trial));
    }

    // tree scan: no lock files anywhere, ever
    std::size_t scanned = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir.path())) {
        ++scanned;
        std::string name = entry.path().filename().string();
        std::transform(name.begin(), name.end(), name.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        require(name.find("lock") == std::string::npos,
                "lock-like file found: " + entry.path().string());
    }
    require(scanned > 100, "tree scan looks too small to be real");
}

// --------------------------------------------------------------------------

struct Criterion {
    int number;
    std::string name;
    double limit_seconds;
    std::function<void()> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "canonical identity", 30, criterion_canonical_identity},
        {2, "query oracle equivalence", 60, criterion_query_oracle},
        {3, "ideal gas reproduction", 5, criterion_ideal_gas},
        {4, "CLI tool integration", 5, criterion_cli_integration},
        {5, "workflow semantics", 10, criterion_workflow_semantics},
        {6, "scaling", 600, criterion_scaling},
        {7, "index/search equivalence", 60, criterion_index_equivalence},
        {8, "crash safety", 30, criterion_crash_safety},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        const auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            criterion.body();
        } catch (const Failure& f) {
            error = f.message;
        } catch (const std::exception& e) {
            error = std::string("unexpected exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (error.empty() && elapsed > criterion.limit_seconds) {
            error = "runtime limit exceeded";
        }
        const bool pass = error.empty();
        if (!pass) ++failures;
        std::printf("%s  criterion %d: %s (%.1fs, limit %.0fs)\n", pass ? "PASS" : "FAIL",
                    criterion.number, criterion.name.c_str(), elapsed,
                    criterion.limit_seconds);
        if (!pass) {
            std::printf("      %s\n", error.c_str());
        }
        std::fflush(stdout);
    }
    return failures;
}
