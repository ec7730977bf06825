#include "moblab/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "moblab/characters.hpp"
#include "moblab/errors.hpp"
#include "moblab/mpreal.hpp"
#include "moblab/parallel.hpp"
#include "moblab/sieve.hpp"

namespace moblab {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// one alpha point of the grid, with provenance
struct GridPoint {
    std::string desc;
    PhaseReal alpha;
};

i64 floor_pow(i64 x, double theta) {
    return to_i64(MpReal::of(static_cast<double>(x), 128).pow(theta).floor_mpz());
}

std::vector<GridPoint> build_grid(const SweepSpec& spec, i64 x, i64 y, int k, double c1) {
    std::vector<GridPoint> grid;
    const long bits =
        std::max<long>(256, PhaseReal::recommended_bits(k, static_cast<double>(x + y))) + 64;

    std::mt19937_64 rng(spec.seed);
    for (i64 i = 0; i < spec.alpha_grid.uniform_count; ++i) {
        u64 u = rng() >> 11;  // 53-bit numerator keeps the fast modular path
        PhaseReal a = PhaseReal::from_fraction(mpz_class(static_cast<unsigned long>(u)),
                                               mpz_class(1) << 53, bits);
        grid.push_back({"uniform[" + std::to_string(i) + "]", a});
    }

    std::vector<std::pair<i64, i64>> rationals;
    for (i64 q = 1; q <= spec.alpha_grid.q_max; ++q)
        for (i64 a = 0; a < q; ++a) {
            if (std::gcd(a, q) != 1) continue;  // gcd(0,1) = 1 keeps alpha = 0
            rationals.emplace_back(a, q);
            grid.push_back({std::to_string(a) + "/" + std::to_string(q),
                            PhaseReal::from_fraction(a, q, bits)});
        }

    if (!spec.alpha_grid.deltas.empty()) {
        ArcParams params(static_cast<double>(x), static_cast<double>(y), k, c1);
        for (auto [a, q] : rationals) {
            for (const std::string& tok : spec.alpha_grid.deltas) {
                bool neg = !tok.empty() && tok[0] == '-';
                std::string body = neg ? tok.substr(1) : tok;
                PhaseReal delta;
                if (body == "1/R") {
                    mpq_class d = 1 / params.R_exact();
                    delta = PhaseReal::from_fraction(d.get_num(), d.get_den(), bits);
                } else if (body == "1/(qQ)") {
                    MpReal Q = MpReal::of(params.Q_numerator(), bits + 64) /
                               MpReal::of(static_cast<double>(x), bits + 64).log().pow(c1);
                    MpReal d = MpReal::of(1.0, bits + 64) / (MpReal::of(static_cast<double>(q), bits + 64) * Q);
                    delta = PhaseReal::from_real(d, bits);
                } else {
                    delta = PhaseReal::parse(body, bits);
                }
                PhaseReal base = PhaseReal::from_fraction(a, q, bits);
                PhaseReal alpha = neg ? base.plus(delta.times_int(-1)) : base.plus(delta);
                alpha = alpha.reduced_mod1();
                grid.push_back({std::to_string(a) + "/" + std::to_string(q) +
                                    (neg ? "-" : "+") + body,
                                alpha});
            }
        }
    }
    return grid;
}

}  // namespace

SweepSpec default_sweep_spec(i64 x, double theta, int k) {
    SweepSpec spec;
    spec.x = x;
    spec.theta_list = {theta};
    spec.k_list = {k};
    return spec;
}

SweepSpec sweep_spec_from_json_text(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    SweepSpec spec;
    spec.x = j.at("x").get<i64>();
    spec.theta_list = j.at("theta_list").get<std::vector<double>>();
    spec.k_list = j.at("k_list").get<std::vector<int>>();
    if (j.contains("alpha_grid")) {
        const auto& g = j.at("alpha_grid");
        if (g.contains("uniform_count")) spec.alpha_grid.uniform_count = g.at("uniform_count").get<i64>();
        if (g.contains("q_max")) spec.alpha_grid.q_max = g.at("q_max").get<i64>();
        if (g.contains("deltas")) spec.alpha_grid.deltas = g.at("deltas").get<std::vector<std::string>>();
    }
    if (j.contains("c1")) spec.c1 = j.at("c1").get<double>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<u64>();
    return spec;
}

SweepSpec sweep_spec_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ArgumentError("cannot open spec file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return sweep_spec_from_json_text(ss.str());
}

std::string sweep_spec_to_json_text(const SweepSpec& spec) {
    ordered_json j;
    j["x"] = spec.x;
    j["theta_list"] = spec.theta_list;
    j["k_list"] = spec.k_list;
    j["alpha_grid"] = {{"uniform_count", spec.alpha_grid.uniform_count},
                       {"q_max", spec.alpha_grid.q_max},
                       {"deltas", spec.alpha_grid.deltas}};
    j["c1"] = spec.c1;
    j["seed"] = spec.seed;
    return j.dump(2);
}

SweepReport run_sweep(const SweepSpec& spec, i64 budget, u64 lemma31_q_limit) {
    if (spec.x < 4) throw ArgumentError("x too small for a sweep");
    for (double t : spec.theta_list)
        if (!(t > 0.0 && t <= 1.0)) throw ArgumentError("theta must lie in (0, 1]");

    struct Combo {
        double theta;
        int k;
        i64 y;
        double c1;
        std::vector<GridPoint> grid;
    };
    std::vector<Combo> combos;
    i64 estimated = 0;
    for (double theta : spec.theta_list) {
        for (int k : spec.k_list) {
            Combo cb;
            cb.theta = theta;
            cb.k = k;
            cb.y = floor_pow(spec.x, theta);
            if (cb.y < 2) throw ArgumentError("x^theta too small");
            // 8(k+1) would force P >= Q at any reachable x; classification
            // sweeps default to the desk-scale exponent c1 = 1
            cb.c1 = spec.c1 > 0 ? spec.c1 : 1.0;
            cb.grid = build_grid(spec, spec.x, cb.y, k, cb.c1);
            estimated += 2 * static_cast<i64>(cb.grid.size()) * cb.y;
            combos.push_back(std::move(cb));
        }
    }
    if (estimated > budget)
        throw ResourceError("sweep would evaluate ~" + std::to_string(estimated) +
                            " terms, over the budget of " + std::to_string(budget));

    SweepReport report;
    report.spec = spec;
    for (const Combo& cb : combos) {
        const double x = static_cast<double>(spec.x);
        const double y = static_cast<double>(cb.y);
        ArcParams params(x, y, cb.k, cb.c1);
        ArithSegment seg = sieve_segment(static_cast<u64>(spec.x), static_cast<u64>(cb.y),
                                         static_cast<unsigned>(ArithFn::Mu));
        size_t base_row = report.rows.size();
        report.rows.resize(base_row + cb.grid.size());
        parallel_for_index(static_cast<i64>(cb.grid.size()), [&](i64 gi) {
            const GridPoint& pt = cb.grid[static_cast<size_t>(gi)];
            SweepRow row;
            row.alpha_desc = pt.desc;
            row.alpha = pt.alpha.to_double();
            row.theta = cb.theta;
            row.k = cb.k;
            row.y = cb.y;

            ArcClass cls = classify(pt.alpha, params);
            row.arc = arc_label_char(cls.label);
            row.q = cls.witness.q.get_str();
            row.a = cls.witness.a.get_str();
            row.lambda = cls.witness.lambda_d();

            ExpSumResult S = mobius_expsum(x, y, cb.k, pt.alpha, seg);
            ExpSumResult W = weyl_sum(x, y, cb.k, pt.alpha);
            row.abs_S = std::abs(S.sum);
            row.abs_S_over_y = row.abs_S / y;
            row.weyl_abs = std::abs(W.sum);

            row.major_arc_term = kNaN;
            row.lemma31_rhs = kNaN;
            if (cls.witness.q.fits_slong_p()) {
                i64 qw = cls.witness.q.get_si();
                i64 aw = cls.witness.a.fits_slong_p() ? cls.witness.a.get_si() : 0;
                row.major_arc_term =
                    major_arc_term(static_cast<u64>(qw), aw, pt.alpha, x, y, cb.k);
                if (static_cast<u64>(qw) <= lemma31_q_limit) {
                    PhaseReal lam;
                    const mpq_class& lq = cls.witness.lambda;
                    if (mpz_sizeinbase(lq.get_den_mpz_t(), 2) <= 62)
                        lam = PhaseReal::from_fraction(lq.get_num(), lq.get_den(),
                                                       pt.alpha.bits());
                    else
                        lam = PhaseReal::from_real(
                            MpReal::of(lq, pt.alpha.bits() + 64), pt.alpha.bits());
                    row.lemma31_rhs = lemma31_rhs(x, y, cb.k, static_cast<u64>(qw), aw, lam, 0.01);
                }
            }
            report.rows[base_row + static_cast<size_t>(gi)] = std::move(row);
        });
    }

    SweepSummary& sm = report.summary;
    sm.rows = static_cast<i64>(report.rows.size());
    for (const SweepRow& r : report.rows) {
        double ratio = r.abs_S_over_y;
        if (r.arc == 'A') sm.max_ratio_A = std::max(sm.max_ratio_A, ratio);
        if (r.arc == 'B') sm.max_ratio_B = std::max(sm.max_ratio_B, ratio);
        if (r.arc == 'C') sm.max_ratio_C = std::max(sm.max_ratio_C, ratio);
        sm.max_weyl_over_y = std::max(sm.max_weyl_over_y, r.weyl_abs / static_cast<double>(r.y));
    }
    return report;
}

void emit_csv(const SweepReport& report, std::ostream& os) {
    os << "alpha_desc,alpha,theta,k,y,arc,q,a,lambda,abs_S,abs_S_over_y,major_arc_term,"
          "lemma31_rhs,weyl_abs\n";
    for (const SweepRow& r : report.rows) {
        os << r.alpha_desc << ',' << fmt17(r.alpha) << ',' << fmt17(r.theta) << ',' << r.k << ','
           << r.y << ',' << r.arc << ',' << r.q << ',' << r.a << ',' << fmt17(r.lambda) << ','
           << fmt17(r.abs_S) << ',' << fmt17(r.abs_S_over_y) << ','
           << (std::isnan(r.major_arc_term) ? "" : fmt17(r.major_arc_term)) << ','
           << (std::isnan(r.lemma31_rhs) ? "" : fmt17(r.lemma31_rhs)) << ','
           << fmt17(r.weyl_abs) << '\n';
    }
    if (report.rows.empty()) return;  // header-only
    os << "#summary,rows," << report.summary.rows << '\n';
    os << "#summary,max_ratio_A," << fmt17(report.summary.max_ratio_A) << '\n';
    os << "#summary,max_ratio_B," << fmt17(report.summary.max_ratio_B) << '\n';
    os << "#summary,max_ratio_C," << fmt17(report.summary.max_ratio_C) << '\n';
    os << "#summary,max_weyl_over_y," << fmt17(report.summary.max_weyl_over_y) << '\n';
}

void emit_json(const SweepReport& report, std::ostream& os) {
    ordered_json j;
    j["spec"] = ordered_json::parse(sweep_spec_to_json_text(report.spec));
    ordered_json rows = ordered_json::array();
    for (const SweepRow& r : report.rows) {
        ordered_json row;
        row["alpha_desc"] = r.alpha_desc;
        row["alpha"] = r.alpha;
        row["theta"] = r.theta;
        row["k"] = r.k;
        row["y"] = r.y;
        row["arc"] = std::string(1, r.arc);
        row["q"] = r.q;
        row["a"] = r.a;
        row["lambda"] = r.lambda;
        row["abs_S"] = r.abs_S;
        row["abs_S_over_y"] = r.abs_S_over_y;
        if (std::isnan(r.major_arc_term))
            row["major_arc_term"] = nullptr;
        else
            row["major_arc_term"] = r.major_arc_term;
        if (std::isnan(r.lemma31_rhs))
            row["lemma31_rhs"] = nullptr;
        else
            row["lemma31_rhs"] = r.lemma31_rhs;
        row["weyl_abs"] = r.weyl_abs;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    j["summary"] = {{"rows", report.summary.rows},
                    {"max_ratio_A", report.summary.max_ratio_A},
                    {"max_ratio_B", report.summary.max_ratio_B},
                    {"max_ratio_C", report.summary.max_ratio_C},
                    {"max_weyl_over_y", report.summary.max_weyl_over_y}};
    os << j.dump(2) << '\n';
}

void emit(const SweepReport& report, const std::string& format, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    if (format == "csv")
        emit_csv(report, out);
    else if (format == "json")
        emit_json(report, out);
    else
        throw ArgumentError("unknown report format: " + format);
    if (!out.good()) throw Error("write failed: " + path);
}

Lemma38Record lemma38_dichotomy_report(double x, double y, int k, const PhaseReal& alpha,
                                       double gamma, double rho, i64 budget) {
    if (k < 3) throw ArgumentError("k must be >= 3");
    Lemma38Record rec;
    rec.x = x;
    rec.y = y;
    rec.k = k;
    rec.gamma = gamma;
    rec.rho = rho;
    rec.sigma_k = 1.0 / (2.0 * k * (k - 1));
    rec.rho_in_range = rho > 0 && rho <= rec.sigma_k / gamma;
    rec.y_in_range = y >= std::pow(x, gamma / (2 * gamma - rec.sigma_k - 1));

    rec.weyl_abs = std::abs(weyl_sum(x, y, k, alpha, budget).sum);
    rec.minor_ref = std::pow(y, 1.0 - rho);

    rec.has_major_witness = false;
    rec.major_term = 0.0;
    rec.ratio_major = kNaN;
    // witness window: q <= y^{k rho}, |q alpha - a| <= x^{1-k} y^{k rho - 1}
    MpReal qcap_r = MpReal::of(y, 192).pow(k * rho);
    mpz_class qcap = qcap_r.floor_mpz();
    if (qcap >= 1) {
        MpReal err_cap = MpReal::of(x, 192).pow(1 - k) * MpReal::of(y, 192).pow(k * rho - 1.0);
        try {
            for (const Convergent& cv : convergents(alpha, qcap)) {
                mpq_class err = abs(mpq_class(cv.q) * alpha.value() - mpq_class(cv.a));
                if (err_cap.cmp(err) >= 0) {
                    u64 qw = cv.q.fits_ulong_p() ? cv.q.get_ui() : 0;
                    if (qw == 0) break;
                    rec.has_major_witness = true;
                    rec.witness_q = cv.q.get_str();
                    rec.witness_a = cv.a.get_str();
                    rec.major_term = major_arc_term(
                        qw, cv.a.fits_slong_p() ? cv.a.get_si() : 0, alpha, x, y, k);
                    break;
                }
            }
        } catch (const PrecisionError&) {
            // witness search not certified; report the minor branch only
        }
    }
    rec.ratio_minor = rec.weyl_abs / rec.minor_ref;
    if (rec.has_major_witness) rec.ratio_major = rec.weyl_abs / (rec.minor_ref + rec.major_term);
    rec.dominant_branch =
        rec.has_major_witness && rec.major_term > rec.minor_ref ? "major" : "minor";
    return rec;
}

std::vector<Lemma37Row> lemma37_ratio_report(const std::vector<u64>& N_list,
                                             const std::vector<u64>& q_list, unsigned j, int k,
                                             unsigned c, u64 h) {
    std::vector<Lemma37Row> rows;
    for (u64 q : q_list) {
        double wk_q = w_k(q, k).value;
        for (u64 N : N_list) {
            double ref = wk_q * static_cast<double>(N);
            double lhs = wk_sum_lemma37(N, q, j, k, c);
            rows.push_back({"gcd(q,n^j)", N, q, lhs, ref, lhs / ref});
            double lhs2 = wk_sum_lemma37_pairs(N, q, h, k, c);
            rows.push_back({"gcd(q,R(n,h))", N, q, lhs2, ref, lhs2 / ref});
        }
    }
    return rows;
}

double lemma31_dominance_scan(u64 q_max) {
    struct Case {
        i64 x;
        i64 y;
    };
    std::vector<Case> cases;
    for (i64 x : {1000, 10000, 100000}) cases.push_back({x, floor_pow(x, 0.8)});
    const int k = 3;

    struct Job {
        i64 x, y;
        u64 q;
        int lam_kind;  // 0, +1, -1 times 1/R
    };
    std::vector<Job> jobs;
    for (const Case& cs : cases)
        for (u64 q = 1; q <= q_max; ++q)
            for (int lam : {0, 1, -1}) jobs.push_back({cs.x, cs.y, q, lam});

    std::vector<double> worst(jobs.size(), 0.0);
    parallel_for_index(static_cast<i64>(jobs.size()), [&](i64 ji) {
        const Job& job = jobs[static_cast<size_t>(ji)];
        double x = static_cast<double>(job.x);
        double y = static_cast<double>(job.y);
        mpz_class Rz;
        mpz_ui_pow_ui(Rz.get_mpz_t(), static_cast<unsigned long>(job.x),
                      static_cast<unsigned long>(k - 1));
        Rz *= job.y;
        mpq_class lam_q =
            job.lam_kind == 0 ? mpq_class(0) : mpq_class(job.lam_kind) / mpq_class(Rz);
        PhaseReal lam = PhaseReal::from_fraction(lam_q.get_num(), lam_q.get_den(), 192);
        double rhs = 0.0;
        bool have_rhs = false;
        ArithSegment seg = sieve_segment(static_cast<u64>(job.x), static_cast<u64>(job.y),
                                         static_cast<unsigned>(ArithFn::Mu));
        double local = 0.0;
        for (u64 a = 0; a < job.q; ++a) {
            if (std::gcd(a, job.q) != 1 && !(job.q == 1 && a == 0)) continue;
            if (!have_rhs) {
                rhs = lemma31_rhs(x, y, k, job.q, static_cast<i64>(a), lam, 0.01);
                have_rhs = true;  // rhs does not depend on a
            }
            mpq_class alpha_q = mpq_class(a, job.q) + lam_q;
            alpha_q.canonicalize();
            PhaseReal alpha =
                PhaseReal::from_fraction(alpha_q.get_num(), alpha_q.get_den(), 192);
            double lhs = std::abs(mobius_expsum(x, y, k, alpha, seg).sum);
            if (rhs > 1e-12) local = std::max(local, lhs / rhs);
        }
        worst[static_cast<size_t>(ji)] = local;
    });
    double best = 0.0;
    for (double v : worst) best = std::max(best, v);
    return best;
}

}  // namespace moblab
