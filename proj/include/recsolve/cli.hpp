#pragma once

// Command-line front end. `solve` handles one recurrence, `batch` a stanza
// file (blank-line separated; first line the recurrence, then `init:` /
// `mode:` lines), emitting one JSON object per stanza. Output is exact and
// deterministic: identical invocations print identical bytes.
//
// Exit codes: 0 solved and verified, 1 usage or parse error, 2 unsolved,
// 3 verification failure (result still printed with a warning).

#include "recsolve/recsolve.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace recsolve {

namespace cli_detail {

using ordered_json = nlohmann::ordered_json;

struct Request {
    std::string recurrence;
    std::string init;
    std::string mode = "auto";
    std::string format = "text";
    long verify_horizon = 64;
    long table = 0;
    std::string root_width = "1/1000";
};

struct Outcome {
    int exit_code = 0;
    Solution solution;
};

inline SolveOptions make_options(const Request& req) {
    SolveOptions opts;
    if (req.mode == "exact") opts.mode = SolveOptions::Mode::Exact;
    else if (req.mode == "bounds") opts.mode = SolveOptions::Mode::Bounds;
    else if (req.mode == "auto") opts.mode = SolveOptions::Mode::Auto;
    else throw Error(Err::DomainError, "mode must be auto, exact or bounds");
    opts.verify_horizon = req.verify_horizon;
    opts.root_width = Rat::from_string(req.root_width);
    if (opts.root_width.sign() <= 0) throw Error(Err::DomainError, "root width must be positive");
    return opts;
}

inline ordered_json solution_json(const Solution& s) {
    ordered_json j;
    j["classification"] = s.classification;
    switch (s.kind) {
        case Solution::Kind::Exact:
            j["status"] = "exact";
            j["closed_form"] = render(s.exact);
            break;
        case Solution::Kind::Bounds:
            j["status"] = "bounds";
            j["lower"] = render(s.lower);
            j["upper"] = render(s.upper);
            break;
        case Solution::Kind::Unsolved:
            j["status"] = "unsolved";
            j["reason"] = s.reason;
            break;
    }
    j["domain"] = s.domain;
    j["assumptions"] = s.assumptions;
    j["verification"] = {{"checked_up_to", s.verification.checked_up_to},
                         {"ok", s.verification.ok}};
    return j;
}

inline void print_text(const Solution& s, std::ostream& out) {
    out << "classification: " << s.classification << "\n";
    switch (s.kind) {
        case Solution::Kind::Exact:
            out << "exact: " << render(s.exact) << "\n";
            break;
        case Solution::Kind::Bounds:
            out << "lower: " << render(s.lower) << "\n";
            out << "upper: " << render(s.upper) << "\n";
            break;
        case Solution::Kind::Unsolved:
            out << "unsolved: " << s.reason << "\n";
            break;
    }
    if (!s.domain.empty()) out << "domain: " << s.domain << "\n";
    for (const auto& a : s.assumptions) out << "assuming: " << a << "\n";
    if (s.kind != Solution::Kind::Unsolved) {
        out << "verified: " << (s.verification.ok ? "yes" : "NO") << " ("
            << s.verification.method << ", up to " << s.verification.checked_up_to << ")\n";
    }
}

inline void print_table(const ParsedRecurrence& parsed, const InitialConditions& ics, long N,
                        std::ostream& out) {
    if (std::holds_alternative<RecurrenceSystem>(parsed)) {
        const auto& sys = std::get<RecurrenceSystem>(parsed);
        auto seqs = iterate_oracle_system(sys, ics, N);
        for (long n = 0; n <= N; ++n) {
            out << n;
            for (const auto& eq : sys.eqs) {
                const OracleSeq& s = seqs.at(eq.unknown);
                out << "\t" << (s.vals.empty() ? render(s.sym[n]) : s.vals[n].to_string());
            }
            out << "\n";
        }
        return;
    }
    const auto& spec = std::get<RecurrenceSpec>(parsed);
    if (spec.multivariate())
        throw Error(Err::Unsupported, "--table prints univariate sequences only");
    if (spec.divisor) {
        long maxk = 0;
        Rat n(1);
        while (n * spec.divisor->beta <= Rat(N)) {
            n = n * spec.divisor->beta;
            ++maxk;
        }
        for (const auto& [nn, v] : iterate_oracle_dc(spec, ics, maxk))
            out << nn << "\t" << v.to_string() << "\n";
        return;
    }
    OracleSeq seq = iterate_oracle(spec, ics, N);
    for (long n = seq.base; n <= N; ++n) out << n << "\t" << seq.at(n).to_string() << "\n";
}

inline Outcome run_one(const Request& req, std::ostream& out, std::ostream& err) {
    Outcome oc;
    ParsedRecurrence parsed = parse_recurrence(req.recurrence);
    InitialConditions ics = parse_initial_conditions(req.init);
    SolveOptions opts = make_options(req);
    Solution s = solve(parsed, ics, opts);
    oc.solution = s;
    if (req.format == "json") {
        out << solution_json(s).dump() << "\n";
    } else {
        print_text(s, out);
    }
    if (req.table > 0) print_table(parsed, ics, req.table, out);
    if (s.kind == Solution::Kind::Unsolved) oc.exit_code = 2;
    else if (!s.verification.ok) {
        err << "warning: verification failed\n";
        oc.exit_code = 3;
    }
    return oc;
}

inline std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline int run_batch(const std::string& path, const Request& defaults, std::ostream& out,
                     std::ostream& err) {
    std::ifstream in(path);
    if (!in) {
        err << "error: cannot open '" << path << "'\n";
        return 1;
    }
    std::vector<std::vector<std::string>> stanzas;
    std::vector<std::string> cur;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty()) {
            if (!cur.empty()) stanzas.push_back(std::move(cur));
            cur.clear();
        } else if (t[0] != '#') {
            cur.push_back(t);
        }
    }
    if (!cur.empty()) stanzas.push_back(std::move(cur));

    int worst = 0;
    for (const auto& st : stanzas) {
        Request req = defaults;
        req.format = "json";
        req.recurrence = st.front();
        for (std::size_t i = 1; i < st.size(); ++i) {
            const std::string& l = st[i];
            auto starts = [&](const char* p) { return l.rfind(p, 0) == 0; };
            if (starts("init:")) req.init = trim(l.substr(5));
            else if (starts("mode:")) req.mode = trim(l.substr(5));
            else {
                err << "error: bad stanza line '" << l << "'\n";
                return 1;
            }
        }
        try {
            Outcome oc = run_one(req, out, err);
            worst = std::max(worst, oc.exit_code);
        } catch (const Error& e) {
            ordered_json j;
            j["status"] = "error";
            j["error"] = e.what();
            out << j.dump() << "\n";
            worst = std::max(worst, 1);
        }
    }
    return worst;
}

}  // namespace cli_detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact recurrence solving, bounding and verification"};
    app.require_subcommand(1);

    cli_detail::Request req;
    std::string batch_path;

    CLI::App* sc_solve = app.add_subcommand("solve", "solve one recurrence");
    sc_solve->add_option("recurrence", req.recurrence, "recurrence, e.g. \"x(n)=2*x(n-1)+1\"")
        ->required();
    sc_solve->add_option("--init", req.init, "initial conditions, e.g. \"x(0)=0;x(1)=1\"");
    sc_solve->add_option("--mode", req.mode, "auto|exact|bounds (default auto)");
    sc_solve->add_option("--format", req.format, "text|json (default text)");
    sc_solve->add_option("--verify", req.verify_horizon, "oracle check horizon (default 64)");
    sc_solve->add_option("--table", req.table, "print n, x(n) rows up to N");
    sc_solve->add_option("--root-width", req.root_width, "root enclosure width p/q (default 1/1000)");

    CLI::App* sc_batch = app.add_subcommand("batch", "solve a stanza file, JSON line per stanza");
    sc_batch->add_option("file", batch_path, "stanza file")->required();
    sc_batch->add_option("--mode", req.mode, "default mode for stanzas");
    sc_batch->add_option("--verify", req.verify_horizon, "oracle check horizon");
    sc_batch->add_option("--root-width", req.root_width, "root enclosure width p/q");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (sc_batch->parsed()) return cli_detail::run_batch(batch_path, req, out, err);
        if (req.format != "text" && req.format != "json") {
            err << "usage error: format must be text or json\n";
            return 1;
        }
        return cli_detail::run_one(req, out, err).exit_code;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const SurdMixError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace recsolve
