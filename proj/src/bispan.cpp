#include "tamb/bispan.hpp"

#include <algorithm>
#include <atomic>
#include <set>

namespace tamb {

SigPtr make_sig(const GSet& x, const GSet& y) {
    if (x.g != y.g) throw GroupMismatch("signature endpoints over different groups");
    static std::atomic<unsigned long long> next_uid{1};
    auto s = std::make_shared<Signature>();
    s->X = x;
    s->Y = y;
    s->rX = realize(x);
    s->rY = realize(y);
    s->uid = next_uid.fetch_add(1);
    return s;
}

bool same_sig(const Signature& a, const Signature& b) {
    return a.X == b.X && a.Y == b.Y;
}

void FormalSum::addmul(const IrrKey& k, long long c) {
    if (c == 0) return;
    auto it = terms.find(k);
    if (it == terms.end()) terms[k] = c;
    else {
        it->second += c;
        if (it->second == 0) terms.erase(it);
    }
}

FormalSum to_sum(const BispanClass& c) {
    FormalSum s;
    s.sig = c.sig;
    for (const auto& k : c.comps) s.addmul(k, 1);
    return s;
}

FormalSum sum_add(const FormalSum& a, const FormalSum& b) {
    FormalSum s = a;
    for (const auto& [k, c] : b.terms) s.addmul(k, c);
    return s;
}

FormalSum sum_scale(const FormalSum& a, long long c) {
    FormalSum s;
    s.sig = a.sig;
    if (c != 0)
        for (const auto& [k, v] : a.terms) s.terms[k] = v * c;
    return s;
}

void validate(const ConcreteBispan& b) {
    const FiniteGroup* g = b.sig->X.g;
    if (b.A.g != g || b.B.g != g) throw GroupMismatch("bispan legs");
    if ((int)b.p.size() != b.A.npts || (int)b.q.size() != b.A.npts || (int)b.r.size() != b.B.npts)
        throw Error("bispan: leg sizes");
    for (int e = 0; e < g->order; ++e) {
        for (int a = 0; a < b.A.npts; ++a) {
            if (b.p[b.A.apply(e, a)] != b.sig->rX.act.apply(e, b.p[a])) throw Error("p not equivariant");
            if (b.q[b.A.apply(e, a)] != b.B.apply(e, b.q[a])) throw Error("q not equivariant");
        }
        for (int x = 0; x < b.B.npts; ++x)
            if (b.r[b.B.apply(e, x)] != b.sig->rY.act.apply(e, b.r[x])) throw Error("r not equivariant");
    }
}

IrrKey canon_key(const Signature& sig, const Subgroup& K, int y,
                 const std::vector<std::pair<Subgroup, int>>& pairs) {
    const FiniteGroup& g = *sig.X.g;
    IrrKey best;
    bool have = false;
    for (int u = 0; u < g.order; ++u) {
        IrrKey cand;
        cand.K = conjugate_subgroup(K, u).elems;
        cand.y = sig.rY.act.apply(u, y);
        for (const auto& [h, x] : pairs) {
            std::pair<std::vector<int>, int> bestp;
            bool havep = false;
            for (int k : K.elems) {
                int uk = g.mul(u, k);
                std::pair<std::vector<int>, int> c{conjugate_subgroup(h, uk).elems,
                                                   sig.rX.act.apply(uk, x)};
                if (!havep || c < bestp) { bestp = c; havep = true; }
            }
            cand.pairs.push_back(bestp);
        }
        std::sort(cand.pairs.begin(), cand.pairs.end());
        if (!have || cand < best) { best = cand; have = true; }
    }
    return best;
}

BispanClass canonicalize(const ConcreteBispan& b) {
    BispanClass out;
    out.sig = b.sig;
    auto borb = b.B.orbit_of_point();
    auto breps = b.B.orbit_reps();
    auto aorb = b.A.orbit_of_point();
    for (int rep : breps) {
        Subgroup K = b.B.stabilizer(rep);
        // one pair per A-orbit meeting the fiber over rep
        std::vector<std::pair<Subgroup, int>> pairs;
        std::set<int> seen_orbits;
        for (int a = 0; a < b.A.npts; ++a) {
            if (b.q[a] != rep) continue;
            if (seen_orbits.count(aorb[a])) continue;
            seen_orbits.insert(aorb[a]);
            pairs.push_back({b.A.stabilizer(a), b.p[a]});
        }
        out.comps.push_back(canon_key(*b.sig, K, b.r[rep], pairs));
    }
    std::sort(out.comps.begin(), out.comps.end());
    return out;
}

ConcreteBispan from_key(const SigPtr& sig, const IrrKey& k) {
    const FiniteGroup& g = *sig->X.g;
    ConcreteBispan out;
    out.sig = sig;
    Subgroup K{&g, k.K};
    Realized rb = realize(gset_orbit(K));
    out.B = rb.act;
    out.r.resize(out.B.npts);
    for (int p = 0; p < out.B.npts; ++p) {
        int u = rb.point_label[p].second;
        out.r[p] = sig->rY.act.apply(u, k.y);
    }
    // A = disjoint union of G/H_i with base mapping to base coset of K
    GSet asym{&g, {}};
    for (const auto& [h, x] : k.pairs) asym.stabs.push_back(Subgroup{&g, h});
    Realized ra = realize(asym);
    out.A = ra.act;
    out.p.resize(out.A.npts);
    out.q.resize(out.A.npts);
    int base_b = rb.point_of(0, 0);
    for (int a = 0; a < out.A.npts; ++a) {
        auto [orbit, u] = ra.point_label[a];
        out.p[a] = sig->rX.act.apply(u, k.pairs[orbit].second);
        out.q[a] = out.B.apply(u, base_b);
    }
    return out;
}

ConcreteBispan from_class(const BispanClass& c) {
    const FiniteGroup& g = *c.sig->X.g;
    ConcreteBispan out;
    out.sig = c.sig;
    out.A.g = &g;
    out.B.g = &g;
    for (const auto& k : c.comps) {
        ConcreteBispan part = from_key(c.sig, k);
        int a0 = out.A.npts, b0 = out.B.npts;
        // append with index offsets
        Action na;
        na.g = &g;
        na.npts = out.A.npts + part.A.npts;
        na.tbl.assign((size_t)g.order * na.npts, -1);
        for (int e = 0; e < g.order; ++e) {
            for (int i = 0; i < out.A.npts; ++i) na.tbl[(size_t)e * na.npts + i] = out.A.apply(e, i);
            for (int i = 0; i < part.A.npts; ++i)
                na.tbl[(size_t)e * na.npts + a0 + i] = a0 + part.A.apply(e, i);
        }
        Action nb;
        nb.g = &g;
        nb.npts = out.B.npts + part.B.npts;
        nb.tbl.assign((size_t)g.order * nb.npts, -1);
        for (int e = 0; e < g.order; ++e) {
            for (int i = 0; i < out.B.npts; ++i) nb.tbl[(size_t)e * nb.npts + i] = out.B.apply(e, i);
            for (int i = 0; i < part.B.npts; ++i)
                nb.tbl[(size_t)e * nb.npts + b0 + i] = b0 + part.B.apply(e, i);
        }
        out.A = na;
        out.B = nb;
        for (int i = 0; i < part.A.npts; ++i) {
            out.p.push_back(part.p[i]);
            out.q.push_back(b0 + part.q[i]);
        }
        for (int i = 0; i < part.B.npts; ++i) out.r.push_back(part.r[i]);
    }
    return out;
}

BispanClass class_of_key(const SigPtr& sig, const IrrKey& k) {
    BispanClass c;
    c.sig = sig;
    c.comps = {k};
    return c;
}

int irr_degree(const IrrKey& k) {
    int d = 0;
    for (const auto& [h, x] : k.pairs) d += (int)k.K.size() / (int)h.size();
    return d;
}

BispanClass zero_class(const SigPtr& sig) { return BispanClass{sig, {}}; }

BispanClass one_class(const SigPtr& sig) {
    BispanClass c;
    c.sig = sig;
    const auto& ry = sig->rY;
    for (int i = 0; i < sig->Y.orbit_count(); ++i) {
        int base = ry.point_of(i, 0);
        c.comps.push_back(canon_key(*sig, sig->Y.stabs[i], base, {}));
    }
    std::sort(c.comps.begin(), c.comps.end());
    return c;
}

BispanClass add(const BispanClass& a, const BispanClass& b) {
    if (!same_sig(*a.sig, *b.sig)) throw SignatureMismatch("add");
    BispanClass c;
    c.sig = a.sig;
    c.comps = a.comps;
    c.comps.insert(c.comps.end(), b.comps.begin(), b.comps.end());
    std::sort(c.comps.begin(), c.comps.end());
    return c;
}

FormalSum mul_irr(const SigPtr& sig, const IrrKey& ka, const IrrKey& kb, MulCache* cache) {
    if (cache) {
        auto it = cache->find({sig->uid, ka, kb});
        if (it != cache->end()) {
            FormalSum s;
            s.sig = sig;
            for (auto& [k, c] : it->second) s.addmul(k, c);
            return s;
        }
    }
    const FiniteGroup& g = *sig->X.g;
    ConcreteBispan a = from_key(sig, ka), b = from_key(sig, kb);
    // B x_Y B'
    std::vector<std::pair<int, int>> pts;
    std::map<std::pair<int, int>, int> idx;
    for (int x = 0; x < a.B.npts; ++x)
        for (int y = 0; y < b.B.npts; ++y)
            if (a.r[x] == b.r[y]) {
                idx[{x, y}] = (int)pts.size();
                pts.push_back({x, y});
            }
    Action prod;
    prod.g = &g;
    prod.npts = (int)pts.size();
    prod.tbl.assign((size_t)g.order * pts.size(), -1);
    for (size_t i = 0; i < pts.size(); ++i)
        for (int e = 0; e < g.order; ++e)
            prod.tbl[(size_t)e * pts.size() + i] =
                idx.at({a.B.apply(e, pts[i].first), b.B.apply(e, pts[i].second)});
    FormalSum out;
    out.sig = sig;
    for (int rep : prod.orbit_reps()) {
        auto [b1, b2] = pts[rep];
        Subgroup kd = intersect(a.B.stabilizer(b1), b.B.stabilizer(b2));
        std::vector<std::pair<Subgroup, int>> pairs;
        // fibers of (A x_Y B') and (A' x_Y B) over the base, grouped into Kd-orbits
        auto gather = [&](const ConcreteBispan& side, int bside, const ConcreteBispan& other,
                          int bother) {
            std::vector<int> fiber;
            for (int x = 0; x < side.A.npts; ++x)
                if (side.q[x] == bside) fiber.push_back(x);
            std::set<int> done;
            for (int x : fiber) {
                if (done.count(x)) continue;
                for (int k : kd.elems) done.insert(side.A.apply(k, x));
                Subgroup s = intersect(side.A.stabilizer(x), other.B.stabilizer(bother));
                pairs.push_back({s, side.p[x]});
            }
        };
        gather(a, b1, b, b2);
        gather(b, b2, a, b1);
        out.addmul(canon_key(*sig, kd, a.r[b1], pairs), 1);
    }
    if (cache) {
        std::vector<std::pair<IrrKey, long long>> v(out.terms.begin(), out.terms.end());
        (*cache)[{sig->uid, ka, kb}] = v;
        (*cache)[{sig->uid, kb, ka}] = v;
    }
    return out;
}

FormalSum mul(const BispanClass& a, const BispanClass& b, MulCache* cache) {
    return mul(to_sum(a), to_sum(b), cache);
}

FormalSum mul(const FormalSum& a, const FormalSum& b, MulCache* cache) {
    if (!same_sig(*a.sig, *b.sig)) throw SignatureMismatch("mul");
    FormalSum out;
    out.sig = a.sig;
    for (const auto& [ka, ca] : a.terms)
        for (const auto& [kb, cb] : b.terms) {
            FormalSum part = mul_irr(a.sig, ka, kb, cache);
            for (const auto& [k, c] : part.terms) out.addmul(k, c * ca * cb);
        }
    return out;
}

BispanClass compose(const BispanClass& gcls, const BispanClass& fcls, size_t cap) {
    if (!(fcls.sig->Y == gcls.sig->X)) throw SignatureMismatch("compose: middle object mismatch");
    const FiniteGroup& grp = *fcls.sig->X.g;
    ConcreteBispan f = from_class(fcls); // [X <- A -> B -> Y]
    ConcreteBispan gc = from_class(gcls); // [Y <- A' -> B' -> Z]
    // P = A' x_Y B with projection to A'
    std::vector<std::pair<int, int>> ppts;
    std::map<std::pair<int, int>, int> pidx;
    for (int a2 = 0; a2 < gc.A.npts; ++a2)
        for (int x = 0; x < f.B.npts; ++x)
            if (gc.p[a2] == f.r[x]) {
                pidx[{a2, x}] = (int)ppts.size();
                ppts.push_back({a2, x});
            }
    Action P;
    P.g = &grp;
    P.npts = (int)ppts.size();
    P.tbl.assign((size_t)grp.order * ppts.size(), -1);
    for (size_t i = 0; i < ppts.size(); ++i)
        for (int e = 0; e < grp.order; ++e)
            P.tbl[(size_t)e * ppts.size() + i] =
                pidx.at({gc.A.apply(e, ppts[i].first), f.B.apply(e, ppts[i].second)});
    std::vector<int> pi(ppts.size()), to_b(ppts.size());
    for (size_t i = 0; i < ppts.size(); ++i) {
        pi[i] = ppts[i].first;
        to_b[i] = ppts[i].second;
    }
    // B'' = Pi_{q'} P, W = A' x_{B'} B''
    ExponentialDiagram ed = dependent_product_elt(gc.A, gc.B, P, gc.q, pi, cap);
    // A'' = W x_B A over (W -> B via evaluation then to_b) and q: A -> B
    std::vector<int> w_to_b(ed.xp_act.npts);
    for (int w = 0; w < ed.xp_act.npts; ++w) w_to_b[w] = to_b[ed.xp_to_a[w]];
    std::vector<std::pair<int, int>> apts;
    std::map<std::pair<int, int>, int> aidx;
    for (int w = 0; w < ed.xp_act.npts; ++w)
        for (int a = 0; a < f.A.npts; ++a)
            if (w_to_b[w] == f.q[a]) {
                aidx[{w, a}] = (int)apts.size();
                apts.push_back({w, a});
            }
    ConcreteBispan out;
    out.sig = make_sig(fcls.sig->X, gcls.sig->Y);
    out.B = ed.pi_act;
    out.r.resize(out.B.npts);
    for (int i = 0; i < out.B.npts; ++i) out.r[i] = gc.r[ed.pi_to_y[i]];
    out.A.g = &grp;
    out.A.npts = (int)apts.size();
    out.A.tbl.assign((size_t)grp.order * apts.size(), -1);
    for (size_t i = 0; i < apts.size(); ++i)
        for (int e = 0; e < grp.order; ++e)
            out.A.tbl[(size_t)e * apts.size() + i] =
                aidx.at({ed.xp_act.apply(e, apts[i].first), f.A.apply(e, apts[i].second)});
    out.p.resize(apts.size());
    out.q.resize(apts.size());
    for (size_t i = 0; i < apts.size(); ++i) {
        out.p[i] = f.p[apts[i].second];
        out.q[i] = ed.xp_to_pi[apts[i].first];
    }
    return canonicalize(out);
}

// ---- distinguished morphisms ----

BispanClass r_of(const GMap& f) {
    SigPtr sig = make_sig(f.target, f.source);
    Realized rx = realize(f.source);
    ConcreteBispan b;
    b.sig = sig;
    b.A = rx.act;
    b.B = rx.act;
    b.p = realize_map(f, rx, sig->rX); // careful: sig->rX realizes f.target
    b.q.resize(rx.act.npts);
    b.r.resize(rx.act.npts);
    for (int i = 0; i < rx.act.npts; ++i) {
        b.q[i] = i;
        b.r[i] = i;
    }
    // B's points must map into rY = realization of f.source; identity on points
    return canonicalize(b);
}

BispanClass n_of(const GMap& f) {
    SigPtr sig = make_sig(f.source, f.target);
    ConcreteBispan b;
    b.sig = sig;
    b.A = sig->rX.act;
    b.B = sig->rY.act;
    b.p.resize(b.A.npts);
    for (int i = 0; i < b.A.npts; ++i) b.p[i] = i;
    b.q = realize_map(f, sig->rX, sig->rY);
    b.r.resize(b.B.npts);
    for (int i = 0; i < b.B.npts; ++i) b.r[i] = i;
    return canonicalize(b);
}

BispanClass t_of(const GMap& f) {
    SigPtr sig = make_sig(f.source, f.target);
    ConcreteBispan b;
    b.sig = sig;
    b.A = sig->rX.act;
    b.B = sig->rX.act;
    b.p.resize(b.A.npts);
    for (int i = 0; i < b.A.npts; ++i) b.p[i] = i;
    b.q = b.p;
    b.r = realize_map(f, sig->rX, sig->rY);
    return canonicalize(b);
}

BispanClass c_of(const Subgroup& h, int g) {
    const FiniteGroup& grp = *h.g;
    Subgroup target = conjugate_subgroup(h, g);
    GMap f;
    f.source = gset_orbit(h);
    f.target = gset_orbit(target);
    f.assign = {{0, grp.inv(g)}}; // xH -> x g^-1 (gHg^-1)
    validate(f);
    return t_of(f);
}

BispanClass identity_class(const GSet& x) { return t_of(gmap_identity(x)); }

} // namespace tamb
