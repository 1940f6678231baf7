#include "doctest.h"
#include "tamb/level.hpp"

#include <functional>
#include <random>
#include <set>

using namespace tamb;

namespace {

long long stars_and_bars_upto(int vars, int maxdeg) {
    // number of monomials in `vars` variables of degree <= maxdeg
    std::function<long long(int, int)> count = [&](int v, int d) -> long long {
        if (v == 0) return 1;
        long long total = 0;
        for (int k = 0; k <= d; ++k) total += count(v - 1, d - k);
        return total;
    };
    return count(vars, maxdeg);
}

} // namespace

TEST_CASE("basis of the Burnside levels (X empty)") {
    for (const char* name : {"C4", "D8", "Q8"}) {
        auto g = group_from_name(name);
        for (const auto& l : g->subgroups()) {
            auto ctx = make_level(g, gset_empty(*g), l);
            auto basis = level_basis(*ctx, 0);
            // one class per conjugacy class of subgroups of L (conjugacy in G
            // does not collapse further since B -> G/L pins K inside L up to
            // L-conjugacy; count against a direct enumeration)
            std::set<IrrKey> expect;
            for (const auto& s : subgroups_of(l)) {
                int y0 = ctx->sig->rY.point_of(0, 0);
                expect.insert(canon_key(*ctx->sig, s, y0, {}));
            }
            CHECK(basis.size() == expect.size());
            for (const auto& k : basis) CHECK(irr_degree(k) == 0);
        }
    }
}

TEST_CASE("Brun: bottom level is a free polynomial ring") {
    auto c2 = group_from_name("C2");
    GSet x = gset_orbit(c2->trivial_subgroup()); // |X| = 2
    auto ctx = make_level(c2, x, c2->trivial_subgroup());
    auto basis = level_basis(*ctx, 2);
    CHECK((long long)basis.size() == stars_and_bars_upto(2, 2)); // 6
}

TEST_CASE("the degree-(1,K) generator of A^0[C_p/C_p](C_p/C_p)") {
    for (int p : {2, 3}) {
        auto g = group_from_name("C" + std::to_string(p));
        auto ctx = make_level(g, gset_point(*g), g->full_subgroup());
        auto basis = level_basis(*ctx, 1);
        // x = [pt <- pt -> pt -> pt], one pair (G, base)
        IrrKey x = canon_key(*ctx->sig, g->full_subgroup(), 0, {{g->full_subgroup(), 0}});
        CHECK(std::count(basis.begin(), basis.end(), x) == 1);
        auto d = degree_of(*ctx, x);
        CHECK(d.n == 1);
        REQUIRE(d.K.has_value());
        CHECK(*d.K == g->full_subgroup());
    }
}

TEST_CASE("res of tr doubles fixed Burnside classes over C2") {
    auto c2 = group_from_name("C2");
    auto ctxe = make_level(c2, gset_empty(*c2), c2->trivial_subgroup());
    auto ctxg = make_level(c2, gset_empty(*c2), c2->full_subgroup());
    auto basis = level_basis(*ctxe, 0);
    REQUIRE(basis.size() == 1);
    LevelElement b;
    b.sig = ctxe->sig;
    b.addmul(basis[0], 1);
    LevelElement back = res(*ctxg, *ctxe, tr(*ctxe, *ctxg, b));
    LevelElement expect = sum_scale(b, 2);
    expect.sig = ctxe->sig;
    CHECK(back == expect);
}

TEST_CASE("degree bookkeeping") {
    auto c2 = group_from_name("C2");
    GSet x = gset_orbit(c2->trivial_subgroup());
    auto ctx = make_level(c2, x, c2->full_subgroup());
    // [X <- 0 -> G/K -> G/L] has degree (0, K)
    IrrKey k0 = canon_key(*ctx->sig, c2->trivial_subgroup(), 0, {});
    CHECK(degree_of(*ctx, k0).n == 0);
    CHECK(degree_of(*ctx, k0).K->order() == 1);
    // ((e,f))_{C2} in A[C2/e](C2/C2) has degree (2, C2)
    IrrKey k2 = canon_key(*ctx->sig, c2->full_subgroup(), 0, {{c2->trivial_subgroup(), 0}});
    CHECK(degree_of(*ctx, k2).n == 2);
    CHECK(degree_of(*ctx, k2).K->order() == 2);
}

TEST_CASE("norm along e <= C2 of the degree-1 generator has a degree-2 part") {
    auto c2 = group_from_name("C2");
    GSet x = gset_orbit(c2->trivial_subgroup());
    auto ctxe = make_level(c2, x, c2->trivial_subgroup());
    auto ctxg = make_level(c2, x, c2->full_subgroup());
    // degree-1 generator of A[C2/e](C2/e): [X <- G/e -> G/e -> G/e]
    IrrKey gen = canon_key(*ctxe->sig, c2->trivial_subgroup(), 0, {{c2->trivial_subgroup(), 0}});
    LevelElement e1;
    e1.sig = ctxe->sig;
    e1.addmul(gen, 1);
    LevelElement n = nm(*ctxe, *ctxg, e1);
    bool has_deg2 = false;
    for (const auto& [k, c] : n.terms)
        if (irr_degree(k) == 2) has_deg2 = true;
    CHECK(has_deg2);
}

TEST_CASE("tuple round trip") {
    std::mt19937 rng(51);
    for (const char* name : {"C4", "C2xC2"}) {
        auto g = group_from_name(name);
        const auto& subs = g->subgroups();
        for (int t = 0; t < 250; ++t) {
            Subgroup l = subs[rng() % subs.size()];
            auto subs_l = subgroups_of(l);
            Subgroup k = subs_l[rng() % subs_l.size()];
            Subgroup h = subs[rng() % subs.size()];
            auto ctx = make_level(g, gset_orbit(h), l);
            // random tuple over K: pairs (H_i <= K cap H-conj, label)
            DedekindTuple tup;
            tup.K = k;
            tup.L = l;
            tup.H = h;
            Subgroup hk = intersect(h, k);
            auto subs_hk = subgroups_of(hk);
            int n = (int)(rng() % 3);
            for (int i = 0; i < n; ++i)
                tup.pairs.push_back({subs_hk[rng() % subs_hk.size()], (int)(rng() % g->order)});
            tup = canonical_tuple(tup);
            IrrKey key = from_tuple(*ctx, tup);
            DedekindTuple back = tuple_form(*ctx, key);
            CHECK(back == tup);
            CHECK(from_tuple(*ctx, back) == key);
        }
    }
}

TEST_CASE("multiply_tuples agrees with bispan multiplication") {
    std::mt19937 rng(53);
    for (const char* name : {"C4", "C2xC2"}) {
        auto g = group_from_name(name);
        const auto& subs = g->subgroups();
        int done = 0;
        for (int t = 0; t < 200 && done < 40; ++t) {
            Subgroup l = subs[rng() % subs.size()];
            Subgroup h = subs[rng() % subs.size()];
            if (!l.contains(h)) continue;
            auto chain_k = subgroups_of(l);
            Subgroup k = chain_k[rng() % chain_k.size()];
            Subgroup kp = chain_k[rng() % chain_k.size()];
            if (!k.contains(h) || !kp.contains(k)) continue;
            auto ctx = make_level(g, gset_orbit(h), l);
            auto mk_tuple = [&](const Subgroup& mid) {
                DedekindTuple tp;
                tp.K = mid;
                tp.L = l;
                tp.H = h;
                auto hs = subgroups_of(h);
                int n = (int)(rng() % 3);
                for (int i = 0; i < n; ++i)
                    tp.pairs.push_back({hs[rng() % hs.size()], (int)(rng() % g->order)});
                return canonical_tuple(tp);
            };
            DedekindTuple a = mk_tuple(k), b = mk_tuple(kp);
            auto prod = multiply_tuples(*ctx, a, b);
            FormalSum viabispan = mul_irr(ctx->sig, from_tuple(*ctx, a), from_tuple(*ctx, b));
            FormalSum viatuples;
            viatuples.sig = ctx->sig;
            for (const auto& [tp, c] : prod) viatuples.addmul(from_tuple(*ctx, tp), c);
            CHECK(viabispan == viatuples);
            ++done;
        }
        CHECK(done >= 30);
    }
}

TEST_CASE("Frobenius reciprocity on levels") {
    std::mt19937 rng(59);
    auto g = group_from_name("C4");
    Subgroup c2 = subgroup_closure(*g, {2});
    GSet x = gset_orbit(c2);
    auto low = make_level(g, x, c2);
    auto top = make_level(g, x, g->full_subgroup());
    auto bl = level_basis(*low, 2);
    auto bt = level_basis(*top, 2);
    MulCache cache;
    for (int t = 0; t < 12; ++t) {
        LevelElement xx;
        xx.sig = top->sig;
        xx.addmul(bt[rng() % bt.size()], 1 + (int)(rng() % 2));
        LevelElement yy;
        yy.sig = low->sig;
        yy.addmul(bl[rng() % bl.size()], 1);
        LevelElement lhs = mul(xx, tr(*low, *top, yy), &cache);
        LevelElement rhs = tr(*low, *top, mul(res(*top, *low, xx), yy, &cache));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("gradedness of mul, tr, res") {
    std::mt19937 rng(61);
    auto g = group_from_name("C4");
    Subgroup c2 = subgroup_closure(*g, {2});
    GSet x = gset_orbit(c2);
    auto low = make_level(g, x, c2);
    auto top = make_level(g, x, g->full_subgroup());
    auto bl = level_basis(*low, 3);
    auto bt = level_basis(*top, 3);
    // deg(ab) = deg(a) + deg(b) for irreducible pairs
    for (int t = 0; t < 20; ++t) {
        const IrrKey& a = bt[rng() % bt.size()];
        const IrrKey& b = bt[rng() % bt.size()];
        WeightedDegree expect = deg_add(degree_of(*top, a), degree_of(*top, b));
        for (const auto& [k, c] : mul_irr(top->sig, a, b).terms)
            CHECK(degree_of(*top, k) == expect);
    }
    // tr is graded by phi(n,K) = (n,K)
    for (int t = 0; t < 20; ++t) {
        const IrrKey& a = bl[rng() % bl.size()];
        LevelElement e;
        e.sig = low->sig;
        e.addmul(a, 1);
        WeightedDegree d = degree_of(*low, a);
        for (const auto& [k, c] : tr(*low, *top, e).terms) CHECK(degree_of(*top, k) == d);
    }
    // res is graded by psi(n,K) = (n, K cap L)
    for (int t = 0; t < 20; ++t) {
        const IrrKey& a = bt[rng() % bt.size()];
        LevelElement e;
        e.sig = top->sig;
        e.addmul(a, 1);
        WeightedDegree d = degree_of(*top, a);
        WeightedDegree expect{d.n, intersect(*d.K, c2)};
        for (const auto& [k, c] : res(*top, *low, e).terms) CHECK(degree_of(*low, k) == expect);
    }
}

TEST_CASE("downward-closed families give ideals; transfers give the {K <= L} ideal") {
    auto g = group_from_name("C4");
    Subgroup c2 = subgroup_closure(*g, {2});
    GSet x = gset_orbit(c2);
    auto top = make_level(g, x, g->full_subgroup());
    auto low = make_level(g, x, c2);
    auto bt = level_basis(*top, 4);
    MulCache cache;
    auto in_family = [&](const IrrKey& k) { return c2.contains(Subgroup{g.get(), k.K}); };
    // ideal: products of a family class with anything stay in the family
    for (const auto& a : bt) {
        if (!in_family(a)) continue;
        for (const auto& b : bt)
            for (const auto& [k, c] : mul_irr(top->sig, a, b, &cache).terms) CHECK(in_family(k));
    }
    // image of transfer = the family stratum, both inclusions on the truncation
    std::set<IrrKey> family;
    for (const auto& k : bt)
        if (in_family(k)) family.insert(k);
    std::set<IrrKey> image;
    for (const auto& y : level_basis(*low, 4)) {
        LevelElement e;
        e.sig = low->sig;
        e.addmul(y, 1);
        for (const auto& [k, c] : tr(*low, *top, e).terms) {
            CHECK(in_family(k));
            if (irr_degree(k) <= 4) image.insert(k);
        }
    }
    CHECK(image == family);
}

TEST_CASE("restriction along a G-map preserves degree") {
    auto g = group_from_name("S3");
    Subgroup t = subgroup_closure(*g, {1});
    GMap f{gset_orbit(g->trivial_subgroup()), gset_orbit(t), {{0, 0}}};
    validate(f);
    BispanClass rf = r_of(f); // bispan G/t -> G/e
    auto ctx = make_level(g, gset_orbit(g->trivial_subgroup()), g->full_subgroup());
    for (const auto& a : level_basis(*ctx, 2)) {
        // R_f^*: A[G/e] -> A[G/t] by precomposition with R_f
        BispanClass moved = compose(class_of_key(ctx->sig, a), rf);
        for (const auto& k : moved.comps) CHECK(irr_degree(k) == irr_degree(a));
    }
}
