#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "shtukalab/job.hpp"
#include "shtukalab/selftest.hpp"

namespace {

using namespace shtukalab;

struct CommonOpts {
    std::string job_path;
    bool machine = false;
    bool expect_iso = false;
    std::uint64_t seed = 1;
    std::uint64_t cap = 0;
    std::uint32_t ext_degree = 0;
    std::vector<std::uint64_t> exponents;
    std::uint32_t p = 0, r = 0;
};

Job load_job(const CommonOpts& o, const std::string& cmd) {
    Job job;
    if (!o.job_path.empty()) {
        std::ifstream in(o.job_path);
        if (!in) fail(Errc::SyntaxError, "cannot open job file " + o.job_path);
        std::ostringstream ss;
        ss << in.rdbuf();
        job = parse_spec(ss.str());
        if (job.cmd.empty()) job.cmd = cmd;
        if (job.cmd != cmd) job.cmd = cmd; // command-line verb wins
    } else {
        job.cmd = cmd;
        if (o.p && o.r) {
            // inline sseries/lisa mode: only (p, r) matter; pick the
            // deterministic internal modulus for the field handle
            job.field = o.r == 1 ? Fq::create(o.p, 1, 1, {0, 1}) : make_extension_field(o.p, o.r, 1);
        }
    }
    if (o.expect_iso) job.opts.expect_iso = true;
    if (o.seed != 1) job.opts.seed = o.seed;
    if (o.cap) job.opts.cap = o.cap;
    if (o.ext_degree) job.opts.ext_degree = o.ext_degree;
    if (!o.exponents.empty()) job.opts.exponents = o.exponents;
    return job;
}

int run_command(const CommonOpts& o, const std::string& cmd) {
    try {
        Job job = load_job(o, cmd);
        Report rep = run(job);
        std::cout << render(rep, o.machine);
        return rep.exit_code;
    } catch (const Error& e) {
        if (o.machine) {
            std::cout << "cmd=" << cmd << "\n"
                      << "error.code=" << errc_name(e.code()) << "\n"
                      << "error.what=" << e.what() << "\n"
                      << "status=error\n";
        } else {
            std::cerr << "error: " << e.what() << " (command " << cmd << ")\n";
        }
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"shtukalab: exact computations with finite F_q-shtukas and group schemes with F_q-action"};
    app.require_subcommand(1);

    CommonOpts o;
    const char* verbs[] = {"expand",  "drinfeld",   "dieudonne", "roundtrip", "adjoint",  "balance",
                           "quasibalance", "sseries", "lisa",      "classify",  "pointcount", "selftest"};
    std::string chosen;
    for (const char* v : verbs) {
        CLI::App* sub = app.add_subcommand(v, "");
        sub->add_option("--job", o.job_path, "job file (JSON)");
        sub->add_flag("--machine", o.machine, "machine-readable output only");
        sub->add_flag("--expect-iso", o.expect_iso, "exit nonzero unless the verdict is an isomorphism");
        sub->add_option("--seed", o.seed, "seed for randomized suites");
        sub->add_option("--cap", o.cap, "dimension cap override");
        sub->add_option("--m", o.ext_degree, "extension degree (pointcount)");
        sub->add_option("--exponents", o.exponents, "inline exponent list (sseries/lisa)")->delimiter(',');
        sub->add_option("--p", o.p, "inline prime (sseries/lisa without a job file)");
        sub->add_option("--r", o.r, "inline r with q = p^r (sseries/lisa)");
        sub->callback([&chosen, v] { chosen = v; });
    }

    CLI11_PARSE(app, argc, argv);
    return run_command(o, chosen);
}
