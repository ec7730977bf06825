#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "moblab/arcs.hpp"
#include "moblab/characters.hpp"
#include "moblab/config.hpp"
#include "moblab/errors.hpp"
#include "moblab/expsum.hpp"
#include "moblab/parallel.hpp"
#include "moblab/phase.hpp"
#include "moblab/sieve.hpp"
#include "moblab/sweep.hpp"
#include "moblab/vaughan.hpp"

namespace {

using moblab::GlobalConfig;
using moblab::i64;
using moblab::u64;
using ordered_json = nlohmann::ordered_json;

ordered_json complex_json(const std::complex<double>& z) {
    return {{"re", z.real()}, {"im", z.imag()}};
}

ordered_json rational_json(const mpq_class& r) {
    return {{"num", r.get_num().get_str()},
            {"den", r.get_den().get_str()},
            {"value", mpq_get_d(r.get_mpq_t())}};
}

ordered_json expsum_json(const moblab::ExpSumResult& r) {
    return {{"re", r.sum.real()},
            {"im", r.sum.imag()},
            {"abs", std::abs(r.sum)},
            {"n_terms", r.n_terms},
            {"err_bound", r.err_bound}};
}

void print_json(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"moblab: exponential sums of the Mobius function in short intervals"};
    app.require_subcommand(1);

    std::string config_path;
    int cli_threads = -1;
    long cli_prec_bits = -1;
    i64 cli_budget = -1;
    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--threads", cli_threads, "worker threads (0 = hardware)");
    app.add_option("--prec-bits", cli_prec_bits, "phase precision in bits (0 = auto)");
    app.add_option("--budget-terms", cli_budget, "term budget for big sums");

    std::function<int(const GlobalConfig&)> action;

    // ---- sieve ----
    {
        auto* sc = app.add_subcommand("sieve", "mu/Lambda/tau over (x, x+y]");
        auto x = std::make_shared<u64>(0);
        auto y = std::make_shared<u64>(1);
        auto emit = std::make_shared<std::string>("mu");
        auto format = std::make_shared<std::string>("csv");
        sc->add_option("--x", *x, "exclusive lower endpoint")->required();
        sc->add_option("--y", *y, "interval length")->required();
        sc->add_option("--emit", *emit)->check(CLI::IsMember({"mu", "lambda", "tau"}));
        sc->add_option("--format", *format)->check(CLI::IsMember({"csv", "json"}));
        sc->callback([&action, x, y, emit, format] {
            action = [=](const GlobalConfig&) {
                unsigned want = *emit == "mu"       ? unsigned(moblab::ArithFn::Mu)
                                : *emit == "lambda" ? unsigned(moblab::ArithFn::Lambda)
                                                    : unsigned(moblab::ArithFn::Tau);
                moblab::ArithSegment seg = moblab::sieve_segment(*x, *y, want);
                if (*format == "csv") {
                    std::printf("n,value\n");
                    for (u64 n = *x + 1; n <= *x + *y; ++n) {
                        if (*emit == "mu")
                            std::printf("%llu,%d\n", (unsigned long long)n, seg.mu_at(n));
                        else if (*emit == "lambda")
                            std::printf("%llu,%.17g\n", (unsigned long long)n, seg.lambda_at(n));
                        else
                            std::printf("%llu,%llu\n", (unsigned long long)n,
                                        (unsigned long long)seg.tau_at(n));
                    }
                } else {
                    ordered_json rows = ordered_json::array();
                    for (u64 n = *x + 1; n <= *x + *y; ++n) {
                        if (*emit == "mu")
                            rows.push_back({n, seg.mu_at(n)});
                        else if (*emit == "lambda")
                            rows.push_back({n, seg.lambda_at(n)});
                        else
                            rows.push_back({n, seg.tau_at(n)});
                    }
                    print_json({{"x", *x}, {"y", *y}, {"emit", *emit}, {"rows", rows}});
                }
                return 0;
            };
        });
    }

    // ---- classify ----
    {
        auto* sc = app.add_subcommand("classify", "arc label A/B/C of alpha");
        auto x = std::make_shared<double>(0);
        auto y = std::make_shared<double>(0);
        auto k = std::make_shared<int>(3);
        auto c1 = std::make_shared<double>(-1.0);
        auto alpha_s = std::make_shared<std::string>();
        sc->add_option("--x", *x)->required();
        sc->add_option("--y", *y)->required();
        sc->add_option("--k", *k)->required();
        sc->add_option("--c1", *c1, "exponent in P = (log x)^c1; default 1");
        sc->add_option("--alpha", *alpha_s, "decimal or a/q")->required();
        sc->callback([&action, x, y, k, c1, alpha_s] {
            action = [=](const GlobalConfig& cfg) {
                double c1v = *c1 >= 0 ? *c1 : (cfg.c1 > 0 ? cfg.c1 : 1.0);
                moblab::ArcParams params(*x, *y, *k, c1v);
                moblab::PhaseReal alpha =
                    moblab::PhaseReal::parse(*alpha_s, cfg.bits_for(*k, *x + *y));
                moblab::ArcClass cls = moblab::classify(alpha, params);
                print_json({{"label", std::string(1, moblab::arc_label_char(cls.label))},
                            {"witness",
                             {{"a", cls.witness.a.get_str()},
                              {"q", cls.witness.q.get_str()},
                              {"lambda", cls.witness.lambda_d()}}},
                            {"params",
                             {{"L", params.L()},
                              {"P", params.P()},
                              {"Q", params.Q()},
                              {"R", params.R()},
                              {"c1", c1v}}},
                            {"alpha", alpha.to_double()}});
                return 0;
            };
        });
    }

    // ---- weyl / mobius-sum ----
    for (const char* name : {"weyl", "mobius-sum"}) {
        bool is_weyl = std::string(name) == "weyl";
        auto* sc = app.add_subcommand(name, is_weyl ? "sum of e(n^k alpha) over (x, x+y]"
                                                    : "sum of mu(n) e(n^k alpha) over (x, x+y]");
        auto x = std::make_shared<double>(0);
        auto y = std::make_shared<double>(0);
        auto k = std::make_shared<int>(3);
        auto alpha_s = std::make_shared<std::string>();
        sc->add_option("--x", *x)->required();
        sc->add_option("--y", *y)->required();
        sc->add_option("--k", *k)->required();
        sc->add_option("--alpha", *alpha_s, "decimal or a/q")->required();
        sc->callback([&action, x, y, k, alpha_s, is_weyl] {
            action = [=](const GlobalConfig& cfg) {
                moblab::PhaseReal alpha =
                    moblab::PhaseReal::parse(*alpha_s, cfg.bits_for(*k, *x + *y));
                moblab::ExpSumResult r;
                if (is_weyl) {
                    r = moblab::weyl_sum(*x, *y, *k, alpha, cfg.budget_terms);
                } else {
                    moblab::IntRange ir = moblab::interval_range(*x, *y);
                    moblab::ArithSegment seg = moblab::sieve_segment(
                        static_cast<u64>(ir.lo), static_cast<u64>(ir.count()),
                        unsigned(moblab::ArithFn::Mu));
                    r = moblab::mobius_expsum(*x, *y, *k, alpha, seg, cfg.budget_terms);
                }
                print_json(expsum_json(r));
                return 0;
            };
        });
    }

    // ---- gauss ----
    {
        auto* sc = app.add_subcommand("gauss", "complete Gauss sum S(q,a)");
        auto q = std::make_shared<u64>(1);
        auto a = std::make_shared<i64>(0);
        auto k = std::make_shared<int>(3);
        sc->add_option("--q", *q)->required();
        sc->add_option("--a", *a)->required();
        sc->add_option("--k", *k)->required();
        sc->callback([&action, q, a, k] {
            action = [=](const GlobalConfig&) {
                std::complex<double> s = moblab::gauss_sum(*q, *a, *k);
                ordered_json j = complex_json(s);
                j["abs"] = std::abs(s);
                j["q"] = *q;
                j["a"] = *a;
                j["k"] = *k;
                j["err_bound"] = static_cast<double>(*q) * std::ldexp(1.0, -50);
                print_json(j);
                return 0;
            };
        });
    }

    // ---- wk ----
    {
        auto* sc = app.add_subcommand("wk", "multiplicative weight w_k(q)");
        auto q = std::make_shared<u64>(1);
        auto k = std::make_shared<int>(3);
        sc->add_option("--q", *q)->required();
        sc->add_option("--k", *k)->required();
        sc->callback([&action, q, k] {
            action = [=](const GlobalConfig&) {
                moblab::WkWeight w = moblab::w_k(*q, *k);
                print_json({{"q", w.q}, {"k", w.k}, {"value", w.value}});
                return 0;
            };
        });
    }

    // ---- characters ----
    {
        auto* sc = app.add_subcommand("characters", "Dirichlet character group mod q");
        auto q = std::make_shared<u64>(1);
        auto prim_only = std::make_shared<bool>(false);
        sc->add_option("--q", *q)->required();
        sc->add_flag("--list-primitive", *prim_only, "list primitive characters only");
        sc->callback([&action, q, prim_only] {
            action = [=](const GlobalConfig&) {
                moblab::CharacterTable t = moblab::CharacterTable::build(*q);
                ordered_json chars = ordered_json::array();
                for (size_t i = 0; i < t.size(); ++i) {
                    if (*prim_only && !t.primitive(i)) continue;
                    chars.push_back({{"index", i},
                                     {"conductor", t.conductor(i)},
                                     {"primitive", t.primitive(i)}});
                }
                print_json({{"q", t.modulus()},
                            {"phi", t.phi()},
                            {"exponent", t.exponent()},
                            {"n_primitive", t.n_primitive()},
                            {"characters", chars}});
                return 0;
            };
        });
    }

    // ---- lemma31 ----
    {
        auto* sc = app.add_subcommand("lemma31", "character-sum bound skeleton");
        auto x = std::make_shared<double>(0);
        auto y = std::make_shared<double>(0);
        auto k = std::make_shared<int>(3);
        auto q = std::make_shared<u64>(1);
        auto a = std::make_shared<i64>(0);
        auto lambda_s = std::make_shared<std::string>("0");
        auto eps = std::make_shared<double>(-1.0);
        sc->add_option("--x", *x)->required();
        sc->add_option("--y", *y)->required();
        sc->add_option("--k", *k)->required();
        sc->add_option("--q", *q)->required();
        sc->add_option("--a", *a)->required();
        sc->add_option("--lambda", *lambda_s, "decimal or a/q");
        sc->add_option("--eps", *eps, "exponent slack (default from config)");
        sc->callback([&action, x, y, k, q, a, lambda_s, eps] {
            action = [=](const GlobalConfig& cfg) {
                moblab::PhaseReal lam =
                    moblab::PhaseReal::parse(*lambda_s, cfg.bits_for(*k, *x + *y));
                double eps_v = *eps >= 0 ? *eps : cfg.eps;
                std::vector<moblab::Lemma31Term> terms;
                double v = moblab::lemma31_rhs(*x, *y, *k, *q, *a, lam, eps_v, &terms,
                                               cfg.budget_terms);
                ordered_json tj = ordered_json::array();
                for (const auto& t : terms)
                    tj.push_back({{"d", t.d},
                                  {"l", t.l},
                                  {"max_abs", t.max_abs},
                                  {"argmax_chi", t.argmax_chi}});
                print_json({{"value", v},
                            {"eta_k", 1.0 - 1.0 / *k},
                            {"eps", eps_v},
                            {"q", *q},
                            {"terms", tj}});
                return 0;
            };
        });
    }

    // ---- plan ----
    {
        auto* sc = app.add_subcommand("plan", "Vaughan parameter selection");
        auto x = std::make_shared<double>(0);
        auto y = std::make_shared<double>(-1);
        auto theta_s = std::make_shared<std::string>();
        auto k = std::make_shared<int>(3);
        auto c1 = std::make_shared<double>(-1.0);
        sc->add_option("--x", *x)->required();
        sc->add_option("--y", *y, "interval length (theta inferred)");
        sc->add_option("--y-theta", *theta_s, "exact theta (decimal or fraction)");
        sc->add_option("--k", *k)->required();
        sc->add_option("--c1", *c1);
        sc->callback([&action, x, y, theta_s, k, c1] {
            action = [=](const GlobalConfig& cfg) {
                double c1v = *c1 >= 0 ? *c1 : cfg.c1;
                moblab::VaughanPlan plan;
                if (!theta_s->empty()) {
                    mpq_class theta = moblab::PhaseReal::parse(*theta_s, 64).value();
                    plan = moblab::make_plan(*x, theta, *k, c1v);
                } else if (*y > 0) {
                    plan = moblab::make_plan_xy(*x, *y, *k, c1v);
                } else {
                    throw moblab::ArgumentError("provide --y or --y-theta");
                }
                ordered_json checks = ordered_json::array();
                for (const auto& c : plan.checks)
                    checks.push_back({{"name", c.name},
                                      {"lhs_exp", rational_json(c.lhs_exp)},
                                      {"rhs_exp", rational_json(c.rhs_exp)},
                                      {"ok", c.ok}});
                print_json({{"x", plan.x},
                            {"y", plan.y},
                            {"k", plan.k},
                            {"c1", plan.c1},
                            {"theta", rational_json(plan.theta)},
                            {"sigma_k", rational_json(plan.sigma_k)},
                            {"gamma", rational_json(plan.gamma)},
                            {"rho", rational_json(plan.rho)},
                            {"U", plan.U},
                            {"V", plan.V},
                            {"UV", plan.U * plan.V},
                            {"checks", checks}});
                return 0;
            };
        });
    }

    // ---- reconstruct ----
    {
        auto* sc = app.add_subcommand("reconstruct", "S_k = -S_1 + S_2 identity");
        auto x = std::make_shared<double>(0);
        auto y = std::make_shared<double>(0);
        auto k = std::make_shared<int>(3);
        auto alpha_s = std::make_shared<std::string>();
        auto U = std::make_shared<double>(-1);
        auto V = std::make_shared<double>(-1);
        sc->add_option("--x", *x)->required();
        sc->add_option("--y", *y)->required();
        sc->add_option("--k", *k)->required();
        sc->add_option("--alpha", *alpha_s)->required();
        sc->add_option("--U", *U, "override U (defaults to the plan value)");
        sc->add_option("--V", *V, "override V (defaults to the plan value)");
        sc->callback([&action, x, y, k, alpha_s, U, V] {
            action = [=](const GlobalConfig& cfg) {
                moblab::PhaseReal alpha =
                    moblab::PhaseReal::parse(*alpha_s, cfg.bits_for(*k, *x + *y));
                moblab::Reconstruction rec;
                if (*U > 0 && *V > 0) {
                    rec = moblab::reconstruct(*x, *y, *k, alpha, *U, *V, cfg.budget_terms);
                } else {
                    moblab::VaughanPlan plan = moblab::make_plan_xy(*x, *y, *k, cfg.c1);
                    rec = moblab::reconstruct(*x, *y, *k, alpha, plan, cfg.budget_terms);
                }
                print_json({{"S1", complex_json(rec.s1)},
                            {"S2", complex_json(rec.s2)},
                            {"direct", complex_json(rec.direct)},
                            {"residual", rec.residual},
                            {"bound", rec.bound},
                            {"U", rec.U},
                            {"V", rec.V}});
                return 0;
            };
        });
    }

    // ---- sweep ----
    {
        auto* sc = app.add_subcommand("sweep", "campaign over an alpha grid");
        auto spec_path = std::make_shared<std::string>();
        auto out_path = std::make_shared<std::string>();
        auto format = std::make_shared<std::string>();
        sc->add_option("--spec", *spec_path, "sweep spec JSON")->required();
        sc->add_option("--out", *out_path, "output path (.csv or .json)")->required();
        sc->add_option("--format", *format)->check(CLI::IsMember({"csv", "json"}));
        sc->callback([&action, spec_path, out_path, format] {
            action = [=](const GlobalConfig& cfg) {
                moblab::SweepSpec spec = moblab::sweep_spec_from_json_file(*spec_path);
                moblab::SweepReport report = moblab::run_sweep(spec, cfg.budget_terms);
                std::string fmt = *format;
                if (fmt.empty())
                    fmt = out_path->size() > 4 &&
                                  out_path->compare(out_path->size() - 4, 4, ".csv") == 0
                              ? "csv"
                              : "json";
                moblab::emit(report, fmt, *out_path);
                std::cerr << "wrote " << report.rows.size() << " rows to " << *out_path << "\n";
                return 0;
            };
        });
    }

    for (CLI::App* sc : app.get_subcommands([](CLI::App*) { return true; }))
        sc->fallthrough();  // global options may follow the subcommand

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        GlobalConfig cfg = moblab::load_config(config_path);
        if (cli_threads >= 0) cfg.threads = cli_threads;
        if (cli_prec_bits >= 0) cfg.prec_bits = cli_prec_bits;
        if (cli_budget >= 1) cfg.budget_terms = cli_budget;
        moblab::set_thread_count(cfg.threads);
        return action ? action(cfg) : 2;
    } catch (const moblab::ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const moblab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
