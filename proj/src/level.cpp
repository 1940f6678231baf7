#include "tamb/level.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace tamb {

WeightedDegree deg_add(const WeightedDegree& a, const WeightedDegree& b) {
    WeightedDegree d;
    d.n = a.n + b.n;
    if (a.K && b.K) d.K = intersect(*a.K, *b.K);
    return d;
}

LevelCtxPtr make_level(const GroupPtr& g, const GSet& x, const Subgroup& l) {
    auto ctx = std::make_shared<LevelCtx>();
    ctx->G = g;
    ctx->X = x;
    ctx->L = l;
    ctx->sig = make_sig(x, gset_orbit(l));
    ctx->dedekind = classify(*g).kind == GroupKind::dedekind;
    return ctx;
}

LevelCtxPtr make_hom_ctx(const GroupPtr& g, const GSet& x, const GSet& y) {
    auto ctx = std::make_shared<LevelCtx>();
    ctx->G = g;
    ctx->X = x;
    ctx->L = g->full_subgroup();
    ctx->sig = make_sig(x, y);
    ctx->dedekind = classify(*g).kind == GroupKind::dedekind;
    return ctx;
}

WeightedDegree degree_of(const LevelCtx& ctx, const IrrKey& k) {
    WeightedDegree d;
    d.n = irr_degree(k);
    if (ctx.dedekind) d.K = Subgroup{ctx.G.get(), k.K};
    return d;
}

std::vector<IrrKey> level_basis(const LevelCtx& ctx, int max_n, size_t cap) {
    if (max_n < 0) throw UsageError("level_basis: max_n must be >= 0");
    const FiniteGroup& g = *ctx.G;
    const auto& rY = ctx.sig->rY;
    const auto& rX = ctx.sig->rX;
    std::set<IrrKey> found;
    size_t emitted = 0;
    for (const auto& krep : subgroup_class_reps(g)) {
        Subgroup K = krep;
        // atoms: (H <= K, x with H <= stab(x)), weight |K|/|H|
        struct Atom { Subgroup h; int x; int w; };
        std::vector<Atom> atoms;
        for (const auto& h : subgroups_of(K)) {
            int w = K.order() / h.order();
            if (w > max_n) continue;
            for (int x = 0; x < rX.act.npts; ++x) {
                bool fixed = true;
                for (int e : h.elems)
                    if (rX.act.apply(e, x) != x) { fixed = false; break; }
                if (fixed) atoms.push_back({h, x, w});
            }
        }
        std::vector<int> ys;
        for (int y = 0; y < rY.act.npts; ++y) {
            bool fixed = true;
            for (int e : K.elems)
                if (rY.act.apply(e, y) != y) { fixed = false; break; }
            if (fixed) ys.push_back(y);
        }
        if (ys.empty()) continue;
        // enumerate pair multisets with total weight <= max_n
        std::vector<std::pair<Subgroup, int>> current;
        auto emit = [&](const std::vector<std::pair<Subgroup, int>>& pairs) {
            for (int y : ys) {
                found.insert(canon_key(*ctx.sig, K, y, pairs));
                if (++emitted > cap) throw TruncationTooLarge("level_basis: candidate cap exceeded");
            }
        };
        std::function<void(size_t, int)> rec = [&](size_t idx, int budget) {
            if (idx == atoms.size()) {
                emit(current);
                return;
            }
            rec(idx + 1, budget); // count 0
            int c = 1;
            size_t before = current.size();
            while (c * atoms[idx].w <= budget) {
                current.push_back({atoms[idx].h, atoms[idx].x});
                rec(idx + 1, budget - c * atoms[idx].w);
                ++c;
            }
            current.resize(before);
        };
        rec(0, max_n);
    }
    return std::vector<IrrKey>(found.begin(), found.end());
}

static Subgroup subgroup_of_key(const FiniteGroup& g, const std::vector<int>& elems) {
    return Subgroup{&g, elems};
}

LevelElement tr(const LevelCtx& from, const LevelCtx& to, const LevelElement& e) {
    if (!to.L.contains(from.L)) throw NotASubgroupChain("tr: need L <= L'");
    const FiniteGroup& g = *from.G;
    LevelElement out;
    out.sig = to.sig;
    for (const auto& [k, c] : e.terms) {
        int u = from.sig->rY.point_label[k.y].second;
        int y2 = to.sig->rY.point_of(0, u);
        std::vector<std::pair<Subgroup, int>> pairs;
        for (const auto& [h, x] : k.pairs) pairs.push_back({subgroup_of_key(g, h), x});
        out.addmul(canon_key(*to.sig, subgroup_of_key(g, k.K), y2, pairs), c);
    }
    return out;
}

LevelElement res(const LevelCtx& from, const LevelCtx& to, const LevelElement& e) {
    if (!from.L.contains(to.L)) throw NotASubgroupChain("res: need L <= L'");
    const FiniteGroup& g = *from.G;
    LevelElement out;
    out.sig = to.sig;
    // projection map: realized G/L -> realized G/L'
    const Realized& rsmall = to.sig->rY;
    const Realized& rbig = from.sig->rY;
    std::vector<int> proj(rsmall.act.npts);
    for (int y = 0; y < rsmall.act.npts; ++y)
        proj[y] = rbig.point_of(0, rsmall.point_label[y].second);
    for (const auto& [k, coef] : e.terms) {
        ConcreteBispan bc = from_key(from.sig, k);
        // pull back both legs along proj
        std::vector<std::pair<int, int>> bpts, apts;
        std::map<std::pair<int, int>, int> bidx, aidx;
        for (int b = 0; b < bc.B.npts; ++b)
            for (int y = 0; y < rsmall.act.npts; ++y)
                if (bc.r[b] == proj[y]) {
                    bidx[{b, y}] = (int)bpts.size();
                    bpts.push_back({b, y});
                }
        for (int a = 0; a < bc.A.npts; ++a)
            for (int y = 0; y < rsmall.act.npts; ++y)
                if (bc.r[bc.q[a]] == proj[y]) {
                    aidx[{a, y}] = (int)apts.size();
                    apts.push_back({a, y});
                }
        ConcreteBispan nb;
        nb.sig = to.sig;
        nb.B.g = &g;
        nb.B.npts = (int)bpts.size();
        nb.B.tbl.assign((size_t)g.order * bpts.size(), -1);
        nb.A.g = &g;
        nb.A.npts = (int)apts.size();
        nb.A.tbl.assign((size_t)g.order * apts.size(), -1);
        for (size_t i = 0; i < bpts.size(); ++i)
            for (int eg = 0; eg < g.order; ++eg)
                nb.B.tbl[(size_t)eg * bpts.size() + i] =
                    bidx.at({bc.B.apply(eg, bpts[i].first), rsmall.act.apply(eg, bpts[i].second)});
        for (size_t i = 0; i < apts.size(); ++i)
            for (int eg = 0; eg < g.order; ++eg)
                nb.A.tbl[(size_t)eg * apts.size() + i] =
                    aidx.at({bc.A.apply(eg, apts[i].first), rsmall.act.apply(eg, apts[i].second)});
        nb.r.resize(bpts.size());
        for (size_t i = 0; i < bpts.size(); ++i) nb.r[i] = bpts[i].second;
        nb.p.resize(apts.size());
        nb.q.resize(apts.size());
        for (size_t i = 0; i < apts.size(); ++i) {
            nb.p[i] = bc.p[apts[i].first];
            nb.q[i] = bidx.at({bc.q[apts[i].first], apts[i].second});
        }
        BispanClass cls = canonicalize(nb);
        for (const auto& comp : cls.comps) out.addmul(comp, coef);
    }
    return out;
}

LevelElement nm(const LevelCtx& from, const LevelCtx& to, const LevelElement& e) {
    if (!to.L.contains(from.L)) throw NotASubgroupChain("nm: need L <= L'");
    BispanClass cls;
    cls.sig = from.sig;
    for (const auto& [k, c] : e.terms) {
        if (c < 0) throw UsageError("nm: norms are computed on effective elements only");
        for (long long i = 0; i < c; ++i) cls.comps.push_back(k);
    }
    std::sort(cls.comps.begin(), cls.comps.end());
    GMap pr;
    pr.source = gset_orbit(from.L);
    pr.target = gset_orbit(to.L);
    pr.assign = {{0, 0}};
    validate(pr);
    BispanClass result = compose(n_of(pr), cls);
    LevelElement out = to_sum(result);
    out.sig = to.sig;
    return out;
}

LevelElement cg(const LevelCtx& from, const LevelCtx& to, const LevelElement& e, int g) {
    const FiniteGroup& grp = *from.G;
    if (!(conjugate_subgroup(from.L, g) == to.L)) throw NotASubgroupChain("cg: target level must be gLg^-1");
    LevelElement out;
    out.sig = to.sig;
    int gi = grp.inv(g);
    for (const auto& [k, c] : e.terms) {
        int u = from.sig->rY.point_label[k.y].second;
        int y2 = to.sig->rY.point_of(0, grp.mul(u, gi));
        std::vector<std::pair<Subgroup, int>> pairs;
        for (const auto& [h, x] : k.pairs) pairs.push_back({subgroup_of_key(grp, h), x});
        out.addmul(canon_key(*to.sig, subgroup_of_key(grp, k.K), y2, pairs), c);
    }
    return out;
}

// ---- tuples ----

static Subgroup product_subgroup(const Subgroup& a, const Subgroup& b) {
    std::vector<int> gens = a.elems;
    gens.insert(gens.end(), b.elems.begin(), b.elems.end());
    return subgroup_closure(*a.g, gens);
}

static int reduce_label(const FiniteGroup& g, const Subgroup& kh, int f) {
    int best = -1;
    for (int k : kh.elems) {
        int v = g.mul(f, k);
        if (best < 0 || v < best) best = v;
    }
    return best;
}

DedekindTuple canonical_tuple(DedekindTuple t) {
    const FiniteGroup& g = *t.K.g;
    Subgroup kh = product_subgroup(t.K, t.H);
    auto normalize = [&](std::vector<std::pair<Subgroup, int>> pairs, int ell) {
        for (auto& [h, f] : pairs) f = reduce_label(g, kh, g.mul(ell, f));
        std::sort(pairs.begin(), pairs.end());
        return pairs;
    };
    std::vector<std::pair<Subgroup, int>> best = normalize(t.pairs, 0);
    for (int ell : t.L.elems) {
        auto cand = normalize(t.pairs, ell);
        if (cand < best) best = cand;
    }
    t.pairs = best;
    return t;
}

DedekindTuple tuple_form(const LevelCtx& ctx, const IrrKey& k) {
    if (!ctx.dedekind) throw NotDedekind("tuple_form");
    if (ctx.X.orbit_count() != 1) throw UsageError("tuple_form: ambient set must be one orbit G/H");
    const FiniteGroup& g = *ctx.G;
    DedekindTuple t;
    t.K = Subgroup{&g, k.K};
    t.L = ctx.L;
    t.H = ctx.X.stabs[0];
    if (!t.L.contains(t.K)) throw ChainViolation("tuple_form: K must lie inside L");
    Subgroup kh = product_subgroup(t.K, t.H);
    for (const auto& [h, x] : k.pairs) {
        int f = ctx.sig->rX.point_label[x].second;
        t.pairs.push_back({Subgroup{&g, h}, reduce_label(g, kh, f)});
    }
    return canonical_tuple(t);
}

IrrKey from_tuple(const LevelCtx& ctx, const DedekindTuple& t) {
    if (!ctx.dedekind) throw NotDedekind("from_tuple");
    const FiniteGroup& g = *ctx.G;
    int y0 = ctx.sig->rY.point_of(0, 0);
    std::vector<std::pair<Subgroup, int>> pairs;
    for (const auto& [h, f] : t.pairs) pairs.push_back({h, ctx.sig->rX.point_of(0, f)});
    return canon_key(*ctx.sig, t.K, y0, pairs);
}

std::map<DedekindTuple, long long> multiply_tuples(const LevelCtx& ctx, const DedekindTuple& a,
                                                   const DedekindTuple& b) {
    const FiniteGroup& g = *ctx.G;
    const Subgroup& H = a.H;
    if (!(a.H == b.H) || !(a.L == b.L)) throw ChainViolation("multiply_tuples: mismatched ambient data");
    if (!a.K.contains(H)) throw ChainViolation("multiply_tuples: need H <= K");
    if (!b.K.contains(a.K)) throw ChainViolation("multiply_tuples: need K <= K'");
    if (!a.L.contains(b.K)) throw ChainViolation("multiply_tuples: need K' <= L");
    std::map<DedekindTuple, long long> out;
    auto kprime_in_k = left_coset_reps(a.K, b.K); // K'/K
    for (int s : left_coset_reps(b.K, a.L)) {     // s in L/K'
        DedekindTuple r = a;
        for (const auto& [hj, gj] : b.pairs)
            for (int kp : kprime_in_k) {
                int label = g.mul(g.mul(s, kp), gj);
                r.pairs.push_back({hj, reduce_label(g, a.K, label)});
            }
        out[canonical_tuple(r)] += 1;
    }
    return out;
}

} // namespace tamb
