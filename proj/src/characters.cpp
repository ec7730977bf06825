#include "moblab/characters.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>

#include "moblab/errors.hpp"
#include "moblab/parallel.hpp"
#include "moblab/primes.hpp"

namespace moblab {

namespace {

u64 inv_mod(u64 a, u64 m) {
    // extended euclid; gcd(a, m) must be 1
    i64 t = 0, new_t = 1;
    i64 r = static_cast<i64>(m), new_r = static_cast<i64>(a % m);
    while (new_r != 0) {
        i64 qq = r / new_r;
        t -= qq * new_t;
        std::swap(t, new_t);
        r -= qq * new_r;
        std::swap(r, new_r);
    }
    if (r != 1) throw ArgumentError("inv_mod: not invertible");
    return static_cast<u64>(t < 0 ? t + static_cast<i64>(m) : t);
}

// smallest primitive root mod odd prime p
u64 primitive_root(u64 p) {
    if (p == 2) return 1;
    auto fac = factorize(p - 1);
    for (u64 g = 2; g < p; ++g) {
        bool ok = true;
        for (const auto& [f, e] : fac)
            if (powmod(g, (p - 1) / f, p) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw Error("no primitive root found");  // unreachable for prime p
}

// lift r in [0, pe) to x mod q with x = r (mod pe), x = 1 (mod q/pe)
u64 crt_lift(u64 r, u64 pe, u64 q) {
    u64 m = q / pe;
    if (m == 1) return r % q;
    u64 inv = inv_mod(m % pe, pe);
    u64 delta = (r + pe - 1) % pe;  // r - 1 mod pe
    return (1 + mulmod(m, mulmod(delta, inv, pe), q)) % q;
}

unsigned v2(u64 n) {
    unsigned v = 0;
    while (n % 2 == 0 && n > 0) {
        n /= 2;
        ++v;
    }
    return v;
}

}  // namespace

CharacterTable CharacterTable::build(u64 q) {
    if (q < 1) throw ArgumentError("modulus must be >= 1");
    if (q > 1000000) throw ResourceError("character table budget is q <= 10^6");
    CharacterTable t;
    t.q_ = q;
    t.is_unit_.assign(q, 0);
    for (u64 n = 0; n < q; ++n) t.is_unit_[n] = std::gcd(n, q) == 1 ? 1 : 0;
    if (q == 1) t.is_unit_[0] = 1;

    // unit-group components, one or two per prime power
    struct LocalComp {
        u64 p;
        u64 pe;
        u64 gen_local;
        u64 order;
        bool two_power_pair;  // first of the (-1, 5) pair mod 2^e, e >= 3
    };
    std::vector<LocalComp> local;
    for (const auto& [p, e] : factorize(q)) {
        u64 pe = 1;
        for (unsigned i = 0; i < e; ++i) pe *= p;
        if (p == 2) {
            if (e == 2) local.push_back({2, pe, 3, 2, false});
            if (e >= 3) {
                local.push_back({2, pe, pe - 1, 2, true});   // -1
                local.push_back({2, pe, 5, pe / 4, false});  // order 2^{e-2}
            }
        } else {
            u64 g = primitive_root(p);
            if (e > 1 && powmod(g, p - 1, p * p) == 1) g += p;
            u64 order = pe / p * (p - 1);
            local.push_back({p, pe, g % pe, order, false});
        }
    }
    t.phi_ = 1;
    t.exponent_ = 1;
    for (const auto& c : local) {
        t.comps_.push_back({crt_lift(c.gen_local, c.pe, q), c.order});
        t.phi_ *= c.order;
        t.exponent_ = std::lcm(t.exponent_, c.order);
    }
    if (t.comps_.empty()) {
        t.phi_ = 1;
        t.exponent_ = 1;
    }

    // dlog table: depth-first walk over exponent tuples with running products
    size_t nc = t.comps_.size();
    t.dlog_.assign(q * std::max<size_t>(nc, 1), 0);
    if (nc > 0) {
        std::vector<std::vector<u64>> pows(nc);
        for (size_t i = 0; i < nc; ++i) {
            pows[i].resize(t.comps_[i].order);
            pows[i][0] = 1 % q;
            for (u64 e = 1; e < t.comps_[i].order; ++e)
                pows[i][e] = mulmod(pows[i][e - 1], t.comps_[i].generator, q);
        }
        std::vector<u64> tuple(nc, 0);
        std::function<void(size_t, u64)> walk = [&](size_t i, u64 r) {
            if (i == nc) {
                for (size_t jj = 0; jj < nc; ++jj)
                    t.dlog_[r * nc + jj] = static_cast<std::uint32_t>(tuple[jj]);
                return;
            }
            for (u64 e = 0; e < t.comps_[i].order; ++e) {
                tuple[i] = e;
                walk(i + 1, mulmod(r, pows[i][e], q));
            }
        };
        walk(0, 1 % q);
    }

    // conductor = product of local conductors; for odd p the local conductor
    // is p^{1+v_p(order of the local character)}, for 2^e the pair (-1, 5)
    // contributes 2^{v2(order)+2} (or 4 when only -1 is hit)
    t.conductors_.assign(t.phi_, 1);
    for (u64 chi = 0; chi < t.phi_; ++chi) {
        std::vector<u64> tup = t.char_tuple(chi);
        u64 cond = 1;
        size_t ci = 0;
        for (size_t li = 0; li < local.size(); ++li) {
            const auto& c = local[li];
            if (c.two_power_pair) {
                u64 s = tup[ci], tt = tup[ci + 1];
                ci += 2;
                ++li;  // consume the paired 5-component
                u64 five_order = local[li].order;
                if (tt != 0) {
                    u64 o = five_order / std::gcd(five_order, tt);
                    cond *= u64(4) << v2(o);
                } else if (s != 0) {
                    cond *= 4;
                }
                continue;
            }
            u64 e = tup[ci++];
            if (e == 0) continue;
            if (c.p == 2) {  // pe == 4
                cond *= 4;
                continue;
            }
            u64 o = c.order / std::gcd(c.order, e);
            u64 pc = c.p;
            while (o % c.p == 0) {
                pc *= c.p;
                o /= c.p;
            }
            cond *= pc;
        }
        t.conductors_[chi] = cond;
    }

    t.roots_.resize(t.exponent_);
    for (u64 j = 0; j < t.exponent_; ++j) {
        double ph = 2.0 * std::numbers::pi * (static_cast<double>(j) / static_cast<double>(t.exponent_));
        t.roots_[j] = {std::cos(ph), std::sin(ph)};
    }
    return t;
}

std::vector<u64> CharacterTable::char_tuple(size_t chi) const {
    std::vector<u64> tup(comps_.size(), 0);
    u64 idx = chi;
    for (size_t i = comps_.size(); i-- > 0;) {
        tup[i] = idx % comps_[i].order;
        idx /= comps_[i].order;
    }
    return tup;
}

std::optional<u64> CharacterTable::angle_num(size_t chi, u64 n) const {
    u64 r = n % q_;
    if (!is_unit_[r]) return std::nullopt;
    if (comps_.empty()) return 0;
    u64 acc = 0;
    size_t nc = comps_.size();
    u64 idx = chi;
    for (size_t i = nc; i-- > 0;) {
        u64 t = idx % comps_[i].order;
        idx /= comps_[i].order;
        u64 x = dlog_[r * nc + i];
        u64 w = exponent_ / comps_[i].order;
        acc = (acc + mulmod(mulmod(t, x % exponent_, exponent_), w, exponent_)) % exponent_;
    }
    return acc;
}

std::complex<double> CharacterTable::value(size_t chi, u64 n) const {
    auto r = angle_num(chi, n);
    if (!r) return {0.0, 0.0};
    return roots_[*r];
}

u64 CharacterTable::n_primitive() const {
    u64 count = 0;
    for (u64 chi = 0; chi < phi_; ++chi)
        if (conductors_[chi] == q_) ++count;
    return count;
}

std::vector<u64> CharacterTable::dlog(u64 n) const {
    u64 r = n % q_;
    if (!is_unit_[r]) throw ArgumentError("dlog of a non-unit");
    size_t nc = comps_.size();
    std::vector<u64> out(nc);
    for (size_t i = 0; i < nc; ++i) out[i] = dlog_[r * nc + i];
    return out;
}

std::complex<double> twisted_mobius_sum(double x, double y, u64 q, u64 d,
                                        const CharacterTable& table, size_t chi, int k,
                                        const PhaseReal& lambda, i64 budget) {
    if (d < 1 || q % d != 0) throw ArgumentError("d must divide q");
    if (table.modulus() == 0 || q % table.modulus() != 0)
        throw ArgumentError("character modulus must divide q");
    IntRange r = interval_range_div(x, y, static_cast<i64>(d));
    if (r.count() == 0) return {0.0, 0.0};
    ArithSegment seg = sieve_segment(static_cast<u64>(r.lo), static_cast<u64>(r.count()),
                                     static_cast<unsigned>(ArithFn::Mu));
    mpz_class dk;
    mpz_ui_pow_ui(dk.get_mpz_t(), d, static_cast<unsigned long>(k));
    PhaseReal scaled = lambda.times_int(dk);
    auto res = weighted_expsum(r.lo, r.hi, k, scaled,
                               [&](i64 m) -> std::complex<double> {
                                   u64 mu = static_cast<u64>(m);
                                   if (std::gcd(mu, q) != 1) return {0.0, 0.0};
                                   int muv = seg.mu_at(mu);
                                   if (muv == 0) return {0.0, 0.0};
                                   return static_cast<double>(muv) * table.value(chi, mu);
                               },
                               budget);
    return res.sum;
}

double lemma31_rhs(double x, double y, int k, u64 q, i64 a, const PhaseReal& lambda, double eps,
                   std::vector<Lemma31Term>* terms, i64 budget) {
    if (k < 3) throw ArgumentError("k must be >= 3");
    if (q < 1) throw ArgumentError("q must be >= 1");
    u64 a_mod = static_cast<u64>(((a % static_cast<i64>(q)) + static_cast<i64>(q)) %
                                 static_cast<i64>(q));
    if (std::gcd(a_mod, q) != 1) throw ArgumentError("lemma31_rhs requires gcd(a,q) = 1");

    struct Job {
        u64 d;
        u64 l;
        size_t chi;
    };
    std::vector<CharacterTable> tables;
    std::vector<u64> divs = divisors(q);
    std::vector<Job> jobs;
    std::vector<size_t> table_of_div(divs.size());
    for (size_t di = 0; di < divs.size(); ++di) {
        u64 d = divs[di];
        u64 l = q / d;
        tables.push_back(CharacterTable::build(l));
        table_of_div[di] = tables.size() - 1;
        const CharacterTable& tbl = tables.back();
        for (size_t chi = 0; chi < tbl.size(); ++chi)
            if (tbl.primitive(chi)) jobs.push_back({d, l, chi});
    }
    std::vector<double> values(jobs.size(), 0.0);
    parallel_for_index(static_cast<i64>(jobs.size()), [&](i64 j) {
        const Job& job = jobs[static_cast<size_t>(j)];
        size_t ti = 0;
        for (size_t di = 0; di < divs.size(); ++di)
            if (divs[di] == job.d) ti = table_of_div[di];
        values[static_cast<size_t>(j)] =
            std::abs(twisted_mobius_sum(x, y, q, job.d, tables[ti], job.chi, k, lambda, budget));
    });

    double total = 0.0;
    if (terms) terms->clear();
    for (size_t di = 0; di < divs.size(); ++di) {
        u64 d = divs[di];
        double best = 0.0;
        long arg = -1;
        for (size_t j = 0; j < jobs.size(); ++j) {
            if (jobs[j].d != d) continue;
            if (arg < 0 || values[j] > best) {
                best = values[j];
                arg = static_cast<long>(jobs[j].chi);
            }
        }
        if (arg < 0) best = 0.0;  // no primitive character mod q/d
        if (terms) terms->push_back({d, q / d, best, arg});
        total += best;
    }
    double eta = 1.0 - 1.0 / static_cast<double>(k);
    return std::pow(static_cast<double>(q), eta + eps) * total;
}

}  // namespace moblab
