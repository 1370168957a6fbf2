#include "csrr/runner.hpp"

#include <array>
#include <atomic>
#include <random>
#include <thread>

namespace csrr {

std::vector<Report> parallel_reports(
    std::size_t count, const std::function<Report(std::size_t)>& fn) {
    std::vector<std::optional<Report>> slots(count);
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, 8);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                slots[i] = fn(i);
            } catch (const std::exception& e) {
                Report rep;
                rep.check = "internal-error";
                rep.status = Report::Status::Fail;
                rep.detail = e.what();
                slots[i] = std::move(rep);
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::vector<Report> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

LogConnection sample_grid_connection(std::size_t rank, std::size_t delta,
                                     std::uint64_t seed) {
    std::vector<std::pair<std::string, VarKind>> vars;
    for (std::size_t i = 1; i <= delta; ++i)
        vars.emplace_back("a" + std::to_string(i), VarKind::BasePoint);
    vars.emplace_back("z", VarKind::Fiber);
    vars.emplace_back("t1", VarKind::Param);
    vars.emplace_back("t2", VarKind::Param);
    auto u = VarUniverse::make(std::move(vars));
    auto g = GenUniverse::make(u);

    std::mt19937_64 rng(seed * 0x2545F4914F6CDD1Dull + 0x9E3779B97F4A7C15ull);
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    auto rq = [&]() { return rat(num(rng), den(rng)); };

    std::vector<PointSpec> points;
    for (std::size_t i = 0; i < delta; ++i) points.push_back(PointSpec::symbol(i));
    std::vector<MatForm> residues;
    for (std::size_t nu = 0; nu < delta; ++nu) {
        MatForm a(g, rank, rank);
        for (std::size_t i = 0; i < rank; ++i)
            for (std::size_t j = 0; j < rank; ++j)
                a.at(i, j) = Form::from_rat(g, rq());
        residues.push_back(a);
    }
    MatForm phi(g, rank, rank);
    std::size_t t1 = u->require("t1"), t2 = u->require("t2");
    for (std::size_t i = 0; i < rank; ++i)
        for (std::size_t j = 0; j < rank; ++j) {
            Form e = Form::zero(g);
            if (rng() % 2)
                e += Form::term(g, {static_cast<std::uint32_t>(g->gen_of_var(t1))},
                                RatFun::constant(u, rq()) * RatFun::variable(u, t2));
            if (rng() % 2)
                e += Form::term(g, {static_cast<std::uint32_t>(g->gen_of_var(t2))},
                                RatFun::constant(u, rq()));
            phi.at(i, j) = e;
        }
    return LogConnection(g, rank, std::move(points), std::move(residues),
                         std::move(phi));
}

namespace {

const LogConnection& require_connection(const ProblemFile& p) {
    if (!p.connection)
        throw InputError("this command needs a \"connection\" block");
    return *p.connection;
}

Report basic_report(const LogConnection& c) {
    Report rep;
    ReportTimer timer(rep);
    rep.check = "check-basic";
    rep.param("N", std::to_string(c.rank()));
    rep.param("delta", std::to_string(c.delta()));
    auto v = c.check_basic();
    rep.status = v.basic ? Report::Status::Pass : Report::Status::Fail;
    if (!v.basic) rep.witness = v.witness;
    return rep;
}

std::vector<Report> cs_reports(const LogConnection& c, int max_n) {
    std::vector<Report> out;
    std::vector<CsClass> newtons;
    for (int n = 1; n <= max_n; ++n) {
        Report rep;
        ReportTimer timer(rep);
        rep.check = "cs-class";
        rep.param("p", std::to_string(n));
        rep.param("kind", "newton");
        rep.param("modulus", "literal");
        CsClass cls = c.nw_bundle(n);
        newtons.push_back(cls);
        rep.witness = cls.rep;
        rep.status = Report::Status::Pass;
        out.push_back(std::move(rep));
    }
    for (int n = 1; n <= max_n; ++n) {
        Report rep;
        ReportTimer timer(rep);
        rep.check = "cs-class";
        rep.param("p", std::to_string(n));
        rep.param("kind", "chern");
        CsClass w = chern_from_newton(newtons, n);
        rep.param("modulus",
                  w.modulus == CsClass::Modulus::Literal ? "literal" : "mod-exact");
        rep.witness = w.rep;
        rep.status = Report::Status::Pass;
        out.push_back(std::move(rep));
    }
    return out;
}

std::vector<Report> gm_reports(const LogConnection& c) {
    std::vector<Report> out;
    auto gm = c.gm_data();
    auto push = [&](const std::string& name, const MatForm& m) {
        Report rep;
        rep.check = "gm-data";
        rep.param("component", name);
        rep.param("rows", std::to_string(m.rows()));
        rep.param("cols", std::to_string(m.cols()));
        rep.detail = matform_to_json(m).dump();
        rep.status = Report::Status::Pass;
        out.push_back(std::move(rep));
    };
    push("phi_gm", gm.phi_gm);
    for (std::size_t tau = 0; tau < gm.psi.size(); ++tau)
        push("psi" + std::to_string(tau + 1), gm.psi[tau]);
    push("b", gm.b);
    push("nabla_rel", gm.nabla_rel);
    return out;
}

std::vector<Report> verify_rr_reports(const ProblemFile& p, const RunOptions& o) {
    if (!o.symbolic && !o.numeric)
        throw InputError("verify-rr needs --symbolic and/or --numeric");
    NumericConfig cfg = p.numeric;
    if (o.seed) cfg.seed = *o.seed;
    if (o.tol) cfg.tol = *o.tol;
    std::vector<Report> out;
    if (o.grid) {
        auto [max_n_rank, max_delta, max_deg] = *o.grid;
        struct Instance {
            std::size_t rank, delta;
            int deg;
            std::uint64_t seed;
        };
        std::vector<Instance> grid;
        for (int rank = 1; rank <= max_n_rank; ++rank)
            for (int delta = 1; delta <= max_delta; ++delta)
                for (int deg = 1; deg <= max_deg; ++deg)
                    for (int s = 0; s < o.grid_seeds; ++s)
                        grid.push_back({static_cast<std::size_t>(rank),
                                        static_cast<std::size_t>(delta), deg,
                                        cfg.seed + static_cast<std::uint64_t>(s)});
        auto run_one = [&](std::size_t i) {
            const Instance& inst = grid[i];
            LogConnection c =
                sample_grid_connection(inst.rank, inst.delta, inst.seed);
            Report rep = o.symbolic ? verify_rr_symbolic(c, inst.deg) : Report{};
            if (o.symbolic && o.numeric && rep.passed()) {
                NumericConfig ncfg = cfg;
                ncfg.seed = inst.seed;
                Report nrep = verify_rr_numeric(c, inst.deg, ncfg);
                if (!nrep.passed()) return nrep;
            } else if (!o.symbolic && o.numeric) {
                NumericConfig ncfg = cfg;
                ncfg.seed = inst.seed;
                rep = verify_rr_numeric(c, inst.deg, ncfg);
            }
            rep.seed = inst.seed;
            return rep;
        };
        return parallel_reports(grid.size(), run_one);
    }
    const LogConnection& c = require_connection(p);
    if (o.symbolic) out.push_back(verify_rr_symbolic(c, o.n));
    if (o.numeric) out.push_back(verify_rr_numeric(c, o.n, cfg));
    if (out.empty())
        throw InputError("verify-rr needs --symbolic and/or --numeric");
    return out;
}

std::vector<Report> identity_reports(const ProblemFile& p, const RunOptions& o) {
    std::vector<Report> out;
    // Connection-bound families only run by default when a connection is
    // present; asking for them explicitly without one is an input error.
    bool with_connection = p.connection.has_value();
    if (o.lemma == "4.6" || o.lemma.empty()) {
        for (int r = 1; r <= o.resolvent_vars; ++r)
            out.push_back(check_dlog_resolvent_identity(static_cast<std::size_t>(r)));
    }
    if (o.lemma == "4.3" || (o.lemma.empty() && with_connection)) {
        const LogConnection& c = require_connection(p);
        auto gm = c.gm_data();
        for (int len = 1; len <= o.word_length; ++len) {
            for (int mask = 0; mask < (1 << len); ++mask) {
                Report rep;
                ReportTimer timer(rep);
                rep.check = "trace-word";
                std::string w;
                std::vector<bool> word;
                for (int k = 0; k < len; ++k) {
                    bool dB = (mask >> k) & 1;
                    word.push_back(dB);
                    w += dB ? "dB." : "B.";
                }
                w.pop_back();
                rep.param("word", w);
                auto chk = check_trace_word(gm, word);
                rep.status =
                    chk.pass ? Report::Status::Pass : Report::Status::Fail;
                if (!chk.pass) rep.witness = chk.difference;
                out.push_back(std::move(rep));
            }
        }
    }
    if (o.lemma == "4.5" || o.lemma == "4.4" ||
        (o.lemma.empty() && with_connection)) {
        const LogConnection& c = require_connection(p);
        NumericConfig cfg = p.numeric;
        if (o.seed) cfg.seed = *o.seed;
        if (o.tol) cfg.tol = *o.tol;
        bool all_symbolic = true;
        for (const auto& pt : c.points()) all_symbolic &= pt.symbolic();
        if (all_symbolic) {
            for (std::size_t mask = 1; mask < (1ull << c.delta()); ++mask) {
                std::vector<std::size_t> J;
                for (std::size_t nu = 0; nu < c.delta(); ++nu)
                    if (mask & (1ull << nu)) J.push_back(nu + 1);
                out.push_back(verify_root_sum_identities(c, J, cfg));
            }
        }
    }
    return out;
}

// Randomized search for basic-curvature families: samples residue tuples
// (constant matrices, and matrices with entries depending on the points)
// and records every basic hit together with whether the residues commute
// pairwise.  A search, not a classification: it reports what it finds.
std::vector<Report> search_basic_reports(const RunOptions& o) {
    std::array<int, 3> grid = o.grid.value_or(std::array<int, 3>{2, 2, 0});
    std::size_t rank = static_cast<std::size_t>(std::max(1, grid[0]));
    std::size_t delta = static_cast<std::size_t>(std::max(2, grid[1]));
    std::uint64_t seed0 = o.seed.value_or(1);

    auto reports = parallel_reports(
        static_cast<std::size_t>(o.trials), [&](std::size_t i) -> Report {
            Report rep;
            ReportTimer timer(rep);
            rep.check = "search-basic";
            rep.seed = seed0 + i;
            std::mt19937_64 rng(seed0 + i);
            std::uniform_int_distribution<int> num(-3, 3);

            std::vector<std::pair<std::string, VarKind>> vars;
            for (std::size_t k = 1; k <= delta; ++k)
                vars.emplace_back("a" + std::to_string(k), VarKind::BasePoint);
            vars.emplace_back("z", VarKind::Fiber);
            vars.emplace_back("t1", VarKind::Param);
            vars.emplace_back("t2", VarKind::Param);
            auto u = VarUniverse::make(std::move(vars));
            auto g = GenUniverse::make(u);

            // Three family shapes: raw constant tuples, tuples with
            // point-dependent entries, and conjugates of diagonal tuples
            // (the known commuting solutions, as a control group).
            int family = static_cast<int>(i % 3);
            std::vector<PointSpec> points;
            for (std::size_t k = 0; k < delta; ++k)
                points.push_back(PointSpec::symbol(k));
            std::vector<MatForm> residues;
            if (family == 2) {
                // unit-lower times unit-upper: invertible by construction
                MatForm lower = MatForm::identity(g, rank);
                MatForm upper = MatForm::identity(g, rank);
                for (std::size_t r = 0; r < rank; ++r)
                    for (std::size_t c = 0; c < rank; ++c) {
                        if (r > c && rng() % 2)
                            lower.at(r, c) = Form::from_rat(g, rat(num(rng)));
                        if (r < c && rng() % 2)
                            upper.at(r, c) = Form::from_rat(g, rat(num(rng)));
                    }
                MatForm conj = lower * upper;
                MatForm conj_inv = conj.scalar_inverse();
                for (std::size_t nu = 0; nu < delta; ++nu) {
                    MatForm d(g, rank, rank);
                    for (std::size_t r = 0; r < rank; ++r)
                        d.at(r, r) = Form::from_rat(g, rat(num(rng)));
                    residues.push_back(conj * d * conj_inv);
                }
            } else {
                for (std::size_t nu = 0; nu < delta; ++nu) {
                    MatForm a(g, rank, rank);
                    for (std::size_t r = 0; r < rank; ++r)
                        for (std::size_t c = 0; c < rank; ++c) {
                            RatFun entry = RatFun::constant(u, rat(num(rng)));
                            if (family == 1 && rng() % 3 == 0)
                                entry = entry * (RatFun::variable(u, 0) -
                                                 RatFun::variable(u, 1));
                            a.at(r, c) = Form::scalar(g, entry);
                        }
                    residues.push_back(a);
                }
            }
            LogConnection c(g, rank, points, residues, MatForm(g, rank, rank));
            auto v = c.check_basic();
            rep.param("N", std::to_string(rank));
            rep.param("delta", std::to_string(delta));
            rep.param("family", family == 0   ? "constant"
                                : family == 1 ? "point-dependent"
                                              : "conjugated-diagonal");
            rep.param("basic", v.basic ? "true" : "false");
            if (v.basic) {
                bool commuting = true;
                for (std::size_t a1 = 0; a1 < delta && commuting; ++a1)
                    for (std::size_t a2 = a1 + 1; a2 < delta && commuting; ++a2)
                        commuting = (c.residue(a1) * c.residue(a2) -
                                     c.residue(a2) * c.residue(a1))
                                        .is_zero();
                rep.param("residues_commute", commuting ? "true" : "false");
            }
            rep.status = Report::Status::Pass;
            return rep;
        });
    // Keep only the hits, plus one summary line.
    std::vector<Report> out;
    int hits = 0, noncommuting = 0;
    for (auto& r : reports) {
        bool basic = false, commute = true;
        for (const auto& [k, v] : r.params) {
            if (k == "basic" && v == "true") basic = true;
            if (k == "residues_commute" && v == "false") commute = false;
        }
        if (basic) {
            ++hits;
            if (!commute) ++noncommuting;
            out.push_back(std::move(r));
        }
    }
    Report summary;
    summary.check = "search-basic-summary";
    summary.seed = seed0;
    summary.param("trials", std::to_string(o.trials));
    summary.param("basic_hits", std::to_string(hits));
    summary.param("noncommuting_hits", std::to_string(noncommuting));
    summary.status = Report::Status::Pass;
    out.push_back(std::move(summary));
    return out;
}

std::vector<Report> selftest_reports(const ProblemFile& p, const RunOptions& o) {
    NumericConfig cfg = p.numeric;
    if (o.seed) cfg.seed = *o.seed;
    std::array<int, 3> grid = o.grid.value_or(std::array<int, 3>{2, 3, 2});

    struct Task {
        std::string kind;
        std::size_t rank, delta;
        int deg;
        std::uint64_t seed;
    };
    std::vector<Task> tasks;
    for (int rank = 1; rank <= grid[0]; ++rank)
        for (int delta = 1; delta <= grid[1]; ++delta)
            for (int s = 0; s < 5; ++s) {
                for (int deg = 1; deg <= grid[2]; ++deg)
                    tasks.push_back({"rr", static_cast<std::size_t>(rank),
                                     static_cast<std::size_t>(delta), deg,
                                     cfg.seed + static_cast<std::uint64_t>(s)});
                tasks.push_back({"basic-routes", static_cast<std::size_t>(rank),
                                 static_cast<std::size_t>(delta), 0,
                                 cfg.seed + static_cast<std::uint64_t>(s)});
                tasks.push_back({"trace-words", static_cast<std::size_t>(rank),
                                 static_cast<std::size_t>(delta), 0,
                                 cfg.seed + static_cast<std::uint64_t>(s)});
            }
    for (int r = 1; r <= 3; ++r)
        tasks.push_back({"resolvent", 0, 0, r, cfg.seed});

    auto run_one = [&](std::size_t i) -> Report {
        const Task& t = tasks[i];
        if (t.kind == "rr") {
            LogConnection c = sample_grid_connection(t.rank, t.delta, t.seed);
            Report rep = verify_rr_symbolic(c, t.deg);
            rep.check = "selftest-rr";
            rep.seed = t.seed;
            return rep;
        }
        if (t.kind == "basic-routes") {
            Report rep;
            ReportTimer timer(rep);
            rep.check = "selftest-basic-routes";
            rep.seed = t.seed;
            rep.param("N", std::to_string(t.rank));
            rep.param("delta", std::to_string(t.delta));
            LogConnection c = sample_grid_connection(t.rank, t.delta, t.seed);
            try {
                c.check_basic();
                rep.status = Report::Status::Pass;
            } catch (const SelfCheckError& e) {
                rep.status = Report::Status::Fail;
                rep.detail = e.what();
            }
            return rep;
        }
        if (t.kind == "trace-words") {
            Report rep;
            ReportTimer timer(rep);
            rep.check = "selftest-trace-words";
            rep.seed = t.seed;
            rep.param("N", std::to_string(t.rank));
            rep.param("delta", std::to_string(t.delta));
            LogConnection c = sample_grid_connection(t.rank, t.delta, t.seed);
            auto gm = c.gm_data();
            rep.status = Report::Status::Pass;
            for (int len = 1; len <= 3; ++len)
                for (int mask = 0; mask < (1 << len); ++mask) {
                    std::vector<bool> word;
                    for (int k = 0; k < len; ++k) word.push_back((mask >> k) & 1);
                    auto chk = check_trace_word(gm, word);
                    if (!chk.pass) {
                        rep.status = Report::Status::Fail;
                        rep.witness = chk.difference;
                        return rep;
                    }
                }
            return rep;
        }
        Report rep = check_dlog_resolvent_identity(static_cast<std::size_t>(t.deg));
        rep.check = "selftest-resolvent";
        return rep;
    };
    return parallel_reports(tasks.size(), run_one);
}

} // namespace

RunResult run_command(const std::string& command, const ProblemFile& problem,
                      const RunOptions& opts) {
    RunResult result{{}, 0};
    try {
        if (command == "check-basic") {
            result.reports.push_back(basic_report(require_connection(problem)));
        } else if (command == "cs") {
            result.reports = cs_reports(require_connection(problem),
                                        std::max(1, opts.n));
        } else if (command == "gm") {
            result.reports = gm_reports(require_connection(problem));
        } else if (command == "verify-rr") {
            result.reports = verify_rr_reports(problem, opts);
        } else if (command == "verify-identities") {
            result.reports = identity_reports(problem, opts);
        } else if (command == "pushforward") {
            if (!problem.pushforward)
                throw InputError("this command needs a \"pushforward\" block");
            result.reports = pushforward_checks(*problem.pushforward);
        } else if (command == "search-basic") {
            result.reports = search_basic_reports(opts);
        } else if (command == "selftest") {
            result.reports = selftest_reports(problem, opts);
        } else {
            throw InputError("unknown command: " + command);
        }
    } catch (const InputError&) {
        throw; // exit code 2 at the CLI boundary
    }
    for (const auto& r : result.reports)
        if (!r.passed()) result.exit_code = 1;
    return result;
}

} // namespace csrr
