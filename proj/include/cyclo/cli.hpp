#pragma once

// Command-line surface: per-prime and range sweeps, report emission, and the
// verification harness.
//
// Exit codes: 0 all checks pass, 1 mathematical check failed, 2 usage or
// range error, 3 input validation rejection.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "cyclo/report.hpp"

namespace cyclo::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_math = 1,
    exit_usage = 2,
    exit_validation = 3,
};

constexpr u64 prime_cap = u64(1) << 14;  // keeps the O(p^2) sweeps under a second per prime

struct GlobalOpts {
    std::string format = "text";  // json | csv | text
    std::string out_path;
    u64 seed = 0;
    u32 precision = 0;  // 0 = command default; otherwise in [2, 8]
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
};

namespace detail {

inline int emit(const GlobalOpts& g, std::ostream& out, const std::string& text, int code) {
    if (!g.out_path.empty()) {
        std::ofstream f(g.out_path, std::ios::binary);
        if (!f) throw std::invalid_argument("cannot open output path: " + g.out_path);
        f << text;
    } else {
        out << text;
    }
    return code;
}

inline std::pair<u64, u64> parse_range(const std::string& s) {
    const auto pos = s.find(':');
    if (pos == std::string::npos)
        throw std::invalid_argument("range must be LO:HI");
    const u64 lo = std::stoull(s.substr(0, pos));
    const u64 hi = std::stoull(s.substr(pos + 1));
    if (lo > hi) throw std::invalid_argument("range must satisfy LO <= HI");
    return {lo, hi};
}

inline std::string dump(const report::ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

inline int cmd_irregular(const GlobalOpts& g, const std::string& range, std::ostream& out) {
    const auto [lo, hi] = detail::parse_range(range);
    if (hi >= prime_cap)
        throw std::invalid_argument("range cap exceeded: hi must be < 2^14");
    const auto primes = verify::primes_in(std::max<u64>(lo, 3), hi);
    auto rows = verify::parallel_map_ordered(primes, g.jobs, [](const u64& p) {
        return irregularity_report(PowerTable::make(p, primitive_root(p)));
    });

    std::ostringstream os;
    if (g.format == "json") {
        auto j = report::envelope("irregular", 0, g.seed);
        j["range"] = {lo, hi};
        auto arr = report::ordered_json::array();
        for (const auto& r : rows) arr.push_back(report::to_json(r));
        j["rows"] = arr;
        os << detail::dump(j);
    } else if (g.format == "csv") {
        os << "p,i_p,indices,minus_eigenvalues\n";
        for (const auto& r : rows)
            os << r.p << ',' << r.i_p << ',' << report::join(r.irregular) << ','
               << report::join(r.minus_eigenvalues) << '\n';
    } else {
        for (const auto& r : rows)
            os << "p=" << r.p << " u=" << r.u << " i_p=" << r.i_p << " indices=["
               << report::join(r.irregular, ",") << "] minus=["
               << report::join(r.minus_eigenvalues, ",") << "]\n";
    }
    return detail::emit(g, out, os.str(), exit_ok);
}

inline int cmd_annihilator(const GlobalOpts& g, u64 p, const std::vector<u64>& mus,
                           std::vector<std::string> splits, bool vandiver, bool no_exclusions,
                           std::ostream& out, std::ostream& err) {
    if (!is_prime(p) || p < 5) throw std::invalid_argument("annihilator: need a prime >= 5");
    const auto t = PowerTable::make(p, primitive_root(p));
    ExclusionOptions opts;
    opts.vandiver = vandiver;
    if (no_exclusions) opts = ExclusionOptions{false, false, false, false};
    const auto vr = validate_eigenvalue_set(t, mus, opts);
    if (!vr.ok()) {
        for (const auto& rej : vr.rejections)
            err << "rejected mu=" << rej.mu << " rule=" << rej.rule << "\n";
        return exit_validation;
    }
    const EigenSet& m = *vr.set;

    std::vector<std::pair<u64, u64>> dg;
    if (splits.empty()) {
        for (u64 d = 1; d < p; ++d)
            if ((p - 1) % d == 0 && std::gcd(d, (p - 1) / d) == 1)
                dg.emplace_back(d, (p - 1) / d);
    } else {
        for (const auto& s : splits) {
            const auto [d, gg] = detail::parse_range(s);  // same "d:g" syntax
            dg.emplace_back(d, gg);
        }
    }

    bool all_pass = true;
    std::ostringstream os;
    auto j = report::envelope("annihilator", 0, g.seed);
    j["p"] = p;
    j["u"] = t.u;
    j["mu"] = m.mus();
    j["r1"] = m.r1();
    j["min_poly"] = FpPoly::from_roots(p, m.mus()).c;
    auto arr = report::ordered_json::array();

    if (g.format == "text") {
        os << "p=" << p << " u=" << t.u << " M={" << report::join(m.mus(), ",")
           << "} r1=" << m.r1() << "\n";
        os << "P_r1 coeffs: [" << report::join(FpPoly::from_roots(p, m.mus()).c, ",") << "]\n";
    }
    for (auto [d, gg] : dg) {
        const auto rp = rank_inequality_report(m, d, gg);
        all_pass = all_pass && rp.all();
        auto jr = report::to_json(rp);
        jr["induced_poly"] = induced_min_poly(m, d).c;
        arr.push_back(std::move(jr));
        if (g.format == "text") {
            os << "split d=" << d << " g=" << gg << ": r_d=" << rp.rd << " r_g=" << rp.rg
               << " sandwich_d=" << (rp.sandwich_d ? "ok" : "FAIL")
               << " sandwich_g=" << (rp.sandwich_g ? "ok" : "FAIL")
               << " product=" << (rp.product ? "ok" : "FAIL")
               << " collapse=" << (rp.collapse ? "ok" : "FAIL") << "\n";
            os << "P_{r_" << d << "}(U^" << d << ") coeffs: ["
               << report::join(induced_min_poly(m, d).c, ",") << "]\n";
        }
    }
    if (g.format == "json" || g.format == "csv") {
        j["splittings"] = arr;
        j["pass"] = all_pass;
        os.str("");
        os << detail::dump(j);
    } else {
        os << (all_pass ? "all inequalities hold\n" : "INEQUALITY VIOLATED\n");
    }
    return detail::emit(g, out, os.str(), all_pass ? exit_ok : exit_math);
}

inline int cmd_singular(const GlobalOpts& g, u64 p, u64 m, u64 gamma, std::ostream& out) {
    if (!is_prime(p) || p < 5) throw std::invalid_argument("singular: need a prime >= 5");
    const u32 a = g.precision ? g.precision : 2;
    const LambdaRing R(p, a);
    const auto t = PowerTable::make(p, primitive_root(p));
    const auto cand = synthesize_closed_form(R, t, m, gamma % p, a);
    const auto rec = gamma_recurrence(t, m, gamma % p);
    const bool agree =
        R.reduce_precision(assemble_from_gammas(R, t, rec, a), 1) ==
        R.reduce_precision(cand.element, 1);
    const auto an = analyze_valuation(R, t, cand);

    std::ostringstream os;
    if (g.format == "json") {
        auto j = report::envelope("singular", a, g.seed);
        j["p"] = p;
        j["u"] = t.u;
        j["m"] = m;
        j["mu"] = cand.mu;
        j["gamma"] = gamma % p;
        if (an.nu) j["v"] = *an.nu;
        else j["v"] = nullptr;
        j["primary_at_p"] = an.primary_at_p;
        j["primary_at_p_plus_1"] = an.primary_at_p1;
        j["residue_law_ok"] = an.residue_law_ok;
        j["recurrence_agreement"] = agree;
        j["candidate"] = to_text(cand);
        os << detail::dump(j);
    } else {
        os << "p=" << p << " u=" << t.u << " m=" << m << " mu=" << cand.mu
           << " gamma=" << gamma % p << "\n";
        os << report::valuation_text(an.nu, R.valuation_cap(a)) << "\n";
        os << "classification: " << (an.primary_at_p ? "singular primary" : "singular not primary")
           << " at threshold p; " << (an.primary_at_p1 ? "primary" : "not primary")
           << " at threshold p+1\n";
        os << "closed-form/recurrence agreement: " << (agree ? "ok" : "FAIL") << "\n";
        os << to_text(cand);
    }
    return detail::emit(g, out, os.str(), agree && an.residue_law_ok ? exit_ok : exit_math);
}

inline int cmd_units(const GlobalOpts& g, u64 p, u64 rp_plus, std::ostream& out) {
    SurveyConfig cfg;
    if (g.precision) cfg.precision = g.precision;
    cfg.assumed_rp_plus = rp_plus;
    const auto rep = unit_survey(p, cfg);  // throws invalid_argument for bad p

    std::ostringstream os;
    if (g.format == "json") {
        auto j = report::envelope("units", rep.precision, g.seed);
        j["report"] = report::to_json(rep);
        os << detail::dump(j);
    } else if (g.format == "csv") {
        os << "p,two_n,v,a_level,primary\n";
        for (const auto& c : rep.components) {
            os << rep.p << ',' << 2 * c.n << ',';
            if (c.v) os << *c.v;
            os << ',';
            if (c.a_level) os << *c.a_level;
            os << ',' << (c.primary ? 1 : 0) << '\n';
        }
    } else {
        os << "p=" << rep.p << " u=" << rep.u << " precision=" << rep.precision
           << " i_p=" << rep.i_p << " irregular=[" << report::join(rep.irregular, ",") << "]\n";
        const LambdaRing R(rep.p, rep.precision);
        for (const auto& c : rep.components) {
            os << "2n=" << 2 * c.n << " mu=" << c.mu << " "
               << report::valuation_text(c.v, u64(c.precision) * (rep.p - 1));
            if (c.a_level) os << " a=" << *c.a_level;
            os << (c.primary ? " PRIMARY" : " not-primary");
            if (c.locally_trivial) os << " locally-trivial";
            if (!c.residue_ok) os << " RESIDUE-LAW-VIOLATION";
            os << "\n";
        }
        os << "rho1=" << rep.rho1_local << " primary={"
           << report::join(rep.primary_index_set, ",") << "} bounds="
           << (rep.bounds.all() ? "pass" : "FAIL") << (rep.ok ? " ok" : " ANOMALIES") << "\n";
        for (const auto& a : rep.anomalies) os << "anomaly: " << a << "\n";
    }
    return detail::emit(g, out, os.str(), rep.ok ? exit_ok : exit_math);
}

inline int cmd_verify(const GlobalOpts& g, const std::string& range,
                      std::vector<std::string> suites, bool inject_fault, std::ostream& out) {
    const auto [lo, hi] = detail::parse_range(range);
    if (hi >= prime_cap) throw std::invalid_argument("range cap exceeded: hi must be < 2^14");
    if (suites.empty())
        suites = {"annihilator", "bernoulli", "lambda", "singular", "units"};
    verify::Options vo;
    vo.lo = lo;
    vo.hi = hi;
    vo.precision = g.precision;
    vo.seed = g.seed ? g.seed : 1;
    vo.jobs = g.jobs;
    vo.inject_fault = inject_fault;
    const auto results = verify::run_suites(suites, vo);

    bool all = true;
    u64 checks = 0;
    for (const auto& r : results) {
        all = all && r.passed();
        checks += r.checks;
    }

    std::ostringstream os;
    if (g.format == "json") {
        auto j = report::envelope("verify", g.precision, vo.seed);
        j["range"] = {lo, hi};
        auto arr = report::ordered_json::array();
        for (const auto& r : results) arr.push_back(report::to_json(r));
        j["suites"] = arr;
        j["checks"] = checks;
        j["pass"] = all;
        os << detail::dump(j);
    } else {
        for (const auto& r : results) {
            os << "suite " << r.suite << ": " << r.checks << " checks, " << r.failures
               << " failures  " << (r.passed() ? "PASS" : "FAIL") << "\n";
            if (!r.first_counterexample.empty())
                os << "counterexample: " << r.first_counterexample << "\n";
        }
        os << (all ? "all suites passed" : "verification FAILED") << " (" << checks
           << " checks)\n";
    }
    return detail::emit(g, out, os.str(), all ? exit_ok : exit_math);
}

/// Parses and dispatches. Arguments exclude the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"pi-adic congruence laboratory for the p-th cyclotomic field"};
    app.name("cyclolab");

    GlobalOpts g;
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"json", "csv", "text"}))
        ->capture_default_str();
    app.add_option("--out", g.out_path, "write output to a file");
    app.add_option("--seed", g.seed, "seed for randomized property sampling");
    auto* prec_opt =
        app.add_option("--precision", g.precision, "coefficient precision a (p-adic digits); "
                                                   "CYCLOLAB_PRECISION sets the default")
            ->check(CLI::Range(2u, 8u));
    app.add_option("--jobs", g.jobs, "worker threads for range sweeps");

    std::string range = "5:31";
    u64 prime = 0, m = 0, gamma = 1, rp_plus = 0;
    std::vector<u64> mus;
    std::vector<std::string> splits, suites;
    bool vandiver = false, no_exclusions = false, inject_fault = false;

    auto* irr = app.add_subcommand("irregular", "irregular indices and minus eigenvalues over a prime range");
    irr->fallthrough();
    irr->add_option("--range", range, "prime range LO:HI")->required();

    auto* ann = app.add_subcommand("annihilator", "annihilator polynomials and rank inequalities");
    ann->fallthrough();
    ann->add_option("--prime", prime, "prime p")->required();
    ann->add_option("--mu", mus, "eigenvalue set M")->required()->delimiter(',');
    ann->add_option("--split", splits, "coprime splitting d:g (repeatable; default all)");
    ann->add_flag("--vandiver", vandiver, "also exclude mu with mu^{(p-1)/2} = 1");
    ann->add_flag("--no-exclusions", no_exclusions, "disable all eigenvalue exclusion rules");

    auto* sing = app.add_subcommand("singular", "closed-form singular candidate and classification");
    sing->fallthrough();
    sing->add_option("--prime", prime, "prime p")->required();
    sing->add_option("--m", m, "half-index m; the eigenvalue is u^{2m+1}")->required();
    sing->add_option("--gamma", gamma, "free scalar gamma in [1, p)");

    auto* un = app.add_subcommand("units", "cyclotomic unit eigencomponent survey for one prime");
    un->fallthrough();
    un->add_option("--prime", prime, "prime p")->required();
    un->add_option("--rp-plus", rp_plus, "assumed r_p^+ for the bound checks (default 0)");

    auto* ver = app.add_subcommand("verify", "run invariant suites over a prime range");
    ver->fallthrough();
    ver->add_option("--range", range, "prime range LO:HI")->capture_default_str();
    ver->add_option("--suites", suites, "suites to run")->delimiter(',');
    ver->add_flag("--inject-fault", inject_fault,
                  "corrupt the reference lambda-reduction constant (harness self-test)");

    app.require_subcommand(1);

    std::vector<const char*> argv;
    argv.push_back("cyclolab");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return exit_ok;
        }
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    if (prec_opt->count() == 0) {
        if (const char* env = std::getenv("CYCLOLAB_PRECISION")) {
            char* end = nullptr;
            const long v = std::strtol(env, &end, 10);
            if (end == env || *end != '\0' || v < 2 || v > 8) {
                err << "error: CYCLOLAB_PRECISION must be an integer in [2, 8]\n";
                return exit_usage;
            }
            g.precision = static_cast<u32>(v);
        }
    }

    try {
        if (irr->parsed()) return cmd_irregular(g, range, out);
        if (ann->parsed())
            return cmd_annihilator(g, prime, mus, splits, vandiver, no_exclusions, out, err);
        if (sing->parsed()) return cmd_singular(g, prime, m, gamma, out);
        if (un->parsed()) return cmd_units(g, prime, rp_plus, out);
        if (ver->parsed()) return cmd_verify(g, range, suites, inject_fault, out);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_math;
    }
    return exit_usage;
}

}  // namespace cyclo::cli
