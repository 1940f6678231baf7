#include "doctest.h"
#include "tamb/bispan.hpp"
#include "tamb/level.hpp"

#include <random>

using namespace tamb;

namespace {

// random point relabeling: an isomorphic concrete representative
ConcreteBispan relabel(const ConcreteBispan& b, std::mt19937& rng) {
    auto perm = [&](int n) {
        std::vector<int> p(n);
        for (int i = 0; i < n; ++i) p[i] = i;
        std::shuffle(p.begin(), p.end(), rng);
        return p;
    };
    std::vector<int> pa = perm(b.A.npts), pb = perm(b.B.npts);
    ConcreteBispan out = b;
    const FiniteGroup& g = *b.sig->X.g;
    for (int e = 0; e < g.order; ++e) {
        for (int i = 0; i < b.A.npts; ++i) out.A.tbl[(size_t)e * b.A.npts + pa[i]] = pa[b.A.apply(e, i)];
        for (int i = 0; i < b.B.npts; ++i) out.B.tbl[(size_t)e * b.B.npts + pb[i]] = pb[b.B.apply(e, i)];
    }
    for (int i = 0; i < b.A.npts; ++i) {
        out.p[pa[i]] = b.p[i];
        out.q[pa[i]] = pb[b.q[i]];
    }
    for (int i = 0; i < b.B.npts; ++i) out.r[pb[i]] = b.r[i];
    return out;
}

BispanClass random_class(const LevelCtxPtr& ctx, const std::vector<IrrKey>& basis, std::mt19937& rng,
                         int max_comps = 2) {
    std::uniform_int_distribution<int> cnt(1, max_comps), pick(0, (int)basis.size() - 1);
    BispanClass c;
    c.sig = ctx->sig;
    int n = cnt(rng);
    for (int i = 0; i < n; ++i) c.comps.push_back(basis[pick(rng)]);
    std::sort(c.comps.begin(), c.comps.end());
    return c;
}

} // namespace

TEST_CASE("canonicalize is idempotent and relabeling-invariant") {
    std::mt19937 rng(3);
    for (const char* name : {"C4", "S3", "D8"}) {
        auto g = group_from_name(name);
        Subgroup h = g->subgroups()[1];
        auto ctx = make_level(g, gset_orbit(h), g->full_subgroup());
        auto basis = level_basis(*ctx, 3);
        REQUIRE(basis.size() > 3);
        std::uniform_int_distribution<int> pick(0, (int)basis.size() - 1);
        for (int t = 0; t < 334; ++t) {
            BispanClass c = random_class(ctx, basis, rng);
            ConcreteBispan rep = from_class(c);
            CHECK(canonicalize(rep).comps == c.comps);
            ConcreteBispan shuffled = relabel(rep, rng);
            validate(shuffled);
            CHECK(canonicalize(shuffled).comps == c.comps);
        }
    }
}

TEST_CASE("equivalent Dedekind tuples have equal keys") {
    auto c4 = group_from_name("C4");
    Subgroup e = c4->trivial_subgroup();
    Subgroup c2 = subgroup_closure(*c4, {2});
    auto ctx = make_level(c4, gset_orbit(e), c4->full_subgroup());
    int y0 = ctx->sig->rY.point_of(0, 0);
    auto xpt = [&](int f) { return ctx->sig->rX.point_of(0, f); };
    // ((e,1),(e,3))_{C2} vs ((e,2),(e,2))_{C2}: lifts 1 and 3 of the coset 1+C2
    IrrKey k1 = canon_key(*ctx->sig, c2, y0, {{e, xpt(1)}, {e, xpt(3)}});
    IrrKey k2 = canon_key(*ctx->sig, c2, y0, {{e, xpt(2)}, {e, xpt(2)}});
    CHECK(k1 == k2);
    // labels 0 and 2 reduce to the same coset mod K; 0 and 1 do not
    IrrKey k3 = canon_key(*ctx->sig, c2, y0, {{e, xpt(0)}, {e, xpt(0)}});
    IrrKey k4 = canon_key(*ctx->sig, c2, y0, {{e, xpt(0)}, {e, xpt(1)}});
    IrrKey k5 = canon_key(*ctx->sig, c2, y0, {{e, xpt(0)}, {e, xpt(2)}});
    CHECK(!(k3 == k4));
    CHECK(k3 == k5);
}

TEST_CASE("semiring units") {
    auto d8 = group_from_name("D8");
    Subgroup x = subgroup_closure(*d8, {4});
    auto ctx = make_level(d8, gset_orbit(x), d8->full_subgroup());
    auto basis = level_basis(*ctx, 2);
    std::mt19937 rng(5);
    for (int t = 0; t < 10; ++t) {
        BispanClass a = random_class(ctx, basis, rng);
        CHECK(add(a, zero_class(ctx->sig)).comps == a.comps);
        FormalSum prod = mul(a, one_class(ctx->sig));
        CHECK(prod == to_sum(a));
    }
}

TEST_CASE("t^2 = p t in the Burnside ring of C_p") {
    for (int p : {2, 3}) {
        auto g = group_from_name("C" + std::to_string(p));
        auto ctx = make_level(g, gset_point(*g), g->full_subgroup());
        // t = [pt <- 0 -> C_p/e -> pt]
        IrrKey t = canon_key(*ctx->sig, g->trivial_subgroup(), 0, {});
        FormalSum sq = mul_irr(ctx->sig, t, t);
        FormalSum expect;
        expect.sig = ctx->sig;
        expect.addmul(t, p);
        CHECK(sq == expect);
    }
}

TEST_CASE("semiring laws on random classes") {
    std::mt19937 rng(9);
    for (const char* name : {"C4", "S3", "Q8"}) {
        auto g = group_from_name(name);
        Subgroup h = g->subgroups()[1];
        auto ctx = make_level(g, gset_orbit(h), g->full_subgroup());
        auto basis = level_basis(*ctx, 2);
        for (int t = 0; t < 6; ++t) {
            BispanClass a = random_class(ctx, basis, rng), b = random_class(ctx, basis, rng),
                        c = random_class(ctx, basis, rng);
            MulCache cache;
            CHECK(mul(a, b, &cache) == mul(b, a, &cache));
            FormalSum ab_c = mul(mul(a, b, &cache), to_sum(c), &cache);
            FormalSum a_bc = mul(to_sum(a), mul(b, c, &cache), &cache);
            CHECK(ab_c == a_bc);
            FormalSum lhs = mul(to_sum(a), sum_add(to_sum(b), to_sum(c)), &cache);
            FormalSum rhs = sum_add(mul(a, b, &cache), mul(a, c, &cache));
            CHECK(lhs == rhs);
        }
    }
}

TEST_CASE("composition identities") {
    auto c2 = group_from_name("C2");
    Subgroup e = c2->trivial_subgroup();
    GSet freeo = gset_orbit(e);

    // identity composition
    auto ctx = make_level(c2, freeo, c2->full_subgroup());
    auto basis = level_basis(*ctx, 2);
    BispanClass idv = identity_class(gset_orbit(c2->full_subgroup()));
    BispanClass idx = identity_class(freeo);
    for (const auto& k : basis) {
        BispanClass c = class_of_key(ctx->sig, k);
        CHECK(compose(idv, c).comps == c.comps);
        CHECK(compose(c, idx).comps == c.comps);
    }

    // T_g T_f = T_{g f}
    for (const char* name : {"C4", "S3"}) {
        auto g = group_from_name(name);
        Subgroup h = g->subgroups()[1];
        GMap f{gset_orbit(g->trivial_subgroup()), gset_orbit(h), {{0, 0}}};
        GMap g2{gset_orbit(h), gset_point(*g), {{0, 0}}};
        CHECK(compose(t_of(g2), t_of(f)).comps == t_of(compose(g2, f)).comps);
    }

    // R_f T_f over f: C2/e -> C2/C2 equals 1 + c_g (the double coset expansion)
    GMap f{freeo, gset_point(*c2), {{0, 0}}};
    BispanClass rt = compose(r_of(f), t_of(f));
    BispanClass expect = add(identity_class(freeo), c_of(e, 1));
    CHECK(rt.comps == expect.comps);
}

TEST_CASE("composition is associative on random small triples") {
    std::mt19937 rng(13);
    auto g = group_from_name("C4");
    const auto& subs = g->subgroups();
    std::uniform_int_distribution<int> pick(0, (int)subs.size() - 1);
    int done = 0;
    for (int t = 0; t < 60 && done < 8; ++t) {
        Subgroup h1 = subs[pick(rng)], h2 = subs[pick(rng)], h3 = subs[pick(rng)], h4 = subs[pick(rng)];
        auto c1 = make_level(g, gset_orbit(h1), h2);
        auto c2x = make_level(g, gset_orbit(h2), h3);
        auto c3 = make_level(g, gset_orbit(h3), h4);
        auto b1 = level_basis(*c1, 2), b2 = level_basis(*c2x, 2), b3 = level_basis(*c3, 2);
        if (b1.empty() || b2.empty() || b3.empty()) continue;
        BispanClass f = class_of_key(c1->sig, b1[rng() % b1.size()]);
        BispanClass gg = class_of_key(c2x->sig, b2[rng() % b2.size()]);
        BispanClass hh = class_of_key(c3->sig, b3[rng() % b3.size()]);
        if (from_class(gg).A.npts > 6 || from_class(hh).A.npts > 6) continue;
        BispanClass lhs = compose(hh, compose(gg, f));
        BispanClass rhs = compose(compose(hh, gg), f);
        CHECK(lhs.comps == rhs.comps);
        ++done;
    }
    CHECK(done > 0);
}

TEST_CASE("conjugation morphisms") {
    auto d8 = group_from_name("D8");
    Subgroup x = subgroup_closure(*d8, {4});
    for (int g = 0; g < d8->order; ++g) {
        BispanClass cg = c_of(x, g);
        BispanClass cginv = c_of(conjugate_subgroup(x, g), d8->inv(g));
        BispanClass round = compose(cginv, cg);
        CHECK(round.comps == identity_class(gset_orbit(x)).comps);
    }
    // c_h = id for h in H
    for (int h : x.elems) CHECK(c_of(x, h).comps == identity_class(gset_orbit(x)).comps);
    // c_g c_g' = c_{gg'}
    std::mt19937 rng(17);
    for (int t = 0; t < 10; ++t) {
        int g1 = (int)(rng() % d8->order), g2 = (int)(rng() % d8->order);
        BispanClass lhs = compose(c_of(conjugate_subgroup(x, g2), g1), c_of(x, g2));
        BispanClass rhs = c_of(x, d8->mul(g1, g2));
        CHECK(lhs.comps == rhs.comps);
    }
}

TEST_CASE("transfer to the Burnside class") {
    auto c2 = group_from_name("C2");
    auto ctxe = make_level(c2, gset_empty(*c2), c2->trivial_subgroup());
    auto ctxg = make_level(c2, gset_empty(*c2), c2->full_subgroup());
    LevelElement one = to_sum(one_class(ctxe->sig));
    LevelElement transferred = tr(*ctxe, *ctxg, one);
    IrrKey expect = canon_key(*ctxg->sig, c2->trivial_subgroup(), 0, {});
    REQUIRE(transferred.terms.size() == 1);
    CHECK(transferred.terms.begin()->first == expect);
    CHECK(transferred.terms.begin()->second == 1);
}

TEST_CASE("the empty bispan over empty endpoints is permitted and canonical") {
    auto c2 = group_from_name("C2");
    auto sig = make_sig(gset_empty(*c2), gset_empty(*c2));
    BispanClass z = zero_class(sig);
    CHECK(z.comps.empty());
    ConcreteBispan rep = from_class(z);
    CHECK(rep.A.npts == 0);
    CHECK(rep.B.npts == 0);
    CHECK(canonicalize(rep).comps == z.comps);
    CHECK(add(z, z).comps.empty());
}
