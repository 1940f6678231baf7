#include "tamb/gset.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace tamb {

int GSet::size() const {
    int n = 0;
    for (const auto& h : stabs) n += g->order / h.order();
    return n;
}

GSet gset_orbit(const Subgroup& stab) { return GSet{stab.g, {stab}}; }
GSet gset_point(const FiniteGroup& g) { return GSet{&g, {g.full_subgroup()}}; }
GSet gset_empty(const FiniteGroup& g) { return GSet{&g, {}}; }

GSet gset_disjoint(const GSet& a, const GSet& b) {
    if (a.g != b.g) throw GroupMismatch("gset_disjoint");
    GSet out = a;
    out.stabs.insert(out.stabs.end(), b.stabs.begin(), b.stabs.end());
    return out;
}

GMap gmap_identity(const GSet& x) {
    GMap f{x, x, {}};
    for (int i = 0; i < x.orbit_count(); ++i) f.assign.push_back({i, 0});
    return f;
}

void validate(const GMap& f) {
    if (f.source.g != f.target.g) throw GroupMismatch("GMap");
    if ((int)f.assign.size() != f.source.orbit_count()) throw Error("GMap: assignment size");
    for (int i = 0; i < f.source.orbit_count(); ++i) {
        const auto& [j, g] = f.assign[i];
        if (j < 0 || j >= f.target.orbit_count()) throw Error("GMap: orbit index");
        Subgroup conj = conjugate_subgroup(f.target.stabs[j], g);
        if (!conj.contains(f.source.stabs[i]))
            throw Error("GMap: equivariance fails (H_i not inside g K_j g^-1)");
    }
}

GMap compose(const GMap& g, const GMap& f) {
    if (!(f.target == g.source)) throw Error("GMap compose: middle mismatch");
    GMap out{f.source, g.target, {}};
    const FiniteGroup& grp = *f.source.g;
    for (int i = 0; i < f.source.orbit_count(); ++i) {
        auto [j, u] = f.assign[i];
        auto [k, v] = g.assign[j];
        out.assign.push_back({k, grp.mul(u, v)});
    }
    validate(out);
    return out;
}

// ---- element level ----

std::vector<int> Action::orbit_of_point() const {
    std::vector<int> orb(npts, -1);
    int next = 0;
    for (int p = 0; p < npts; ++p) {
        if (orb[p] >= 0) continue;
        int id = next++;
        std::vector<int> stack{p};
        orb[p] = id;
        while (!stack.empty()) {
            int q = stack.back();
            stack.pop_back();
            for (int e = 0; e < g->order; ++e) {
                int r = apply(e, q);
                if (orb[r] < 0) { orb[r] = id; stack.push_back(r); }
            }
        }
    }
    return orb;
}

std::vector<int> Action::orbit_reps() const {
    auto orb = orbit_of_point();
    std::map<int, int> first;
    for (int p = 0; p < npts; ++p)
        if (!first.count(orb[p])) first[orb[p]] = p;
    std::vector<int> reps;
    for (auto& [id, p] : first) reps.push_back(p);
    std::sort(reps.begin(), reps.end());
    return reps;
}

Subgroup Action::stabilizer(int p) const {
    std::vector<int> el;
    for (int e = 0; e < g->order; ++e)
        if (apply(e, p) == p) el.push_back(e);
    return Subgroup{g, el};
}

std::vector<int> Action::orbit_points(int rep) const {
    std::set<int> pts;
    for (int e = 0; e < g->order; ++e) pts.insert(apply(e, rep));
    return std::vector<int>(pts.begin(), pts.end());
}

int Realized::point_of(int orbit, int elem) const {
    const Subgroup& h = sym.stabs[orbit];
    // find the coset rep: minimal element of elem*H
    int best = -1;
    for (int k : h.elems) {
        int v = sym.g->mul(elem, k);
        if (best < 0 || v < best) best = v;
    }
    for (int p = 0; p < act.npts; ++p)
        if (point_label[p].first == orbit && point_label[p].second == best) return p;
    throw Error("point_of: coset not found");
}

Realized realize(const GSet& x) {
    Realized out;
    out.sym = x;
    out.act.g = x.g;
    const FiniteGroup& g = *x.g;
    std::vector<std::vector<int>> cosets; // per point: sorted elements of the coset
    for (int i = 0; i < x.orbit_count(); ++i) {
        const Subgroup& h = x.stabs[i];
        std::vector<char> used(g.order, 0);
        for (int e = 0; e < g.order; ++e) {
            if (used[e]) continue;
            std::vector<int> coset;
            for (int k : h.elems) {
                int v = g.mul(e, k);
                used[v] = 1;
                coset.push_back(v);
            }
            std::sort(coset.begin(), coset.end());
            out.point_label.push_back({i, coset[0]});
            cosets.push_back(coset);
        }
    }
    out.act.npts = (int)cosets.size();
    out.act.tbl.assign((size_t)g.order * out.act.npts, -1);
    // translate: e * (coset of rep r in orbit i) = coset containing e*r
    std::map<std::pair<int, int>, int> find; // (orbit, min elem) -> point
    for (int p = 0; p < out.act.npts; ++p) find[{out.point_label[p].first, out.point_label[p].second}] = p;
    for (int p = 0; p < out.act.npts; ++p) {
        int orbit = out.point_label[p].first;
        const Subgroup& h = x.stabs[orbit];
        for (int e = 0; e < g.order; ++e) {
            int moved = g.mul(e, out.point_label[p].second);
            int best = -1;
            for (int k : h.elems) {
                int v = g.mul(moved, k);
                if (best < 0 || v < best) best = v;
            }
            out.act.tbl[(size_t)e * out.act.npts + p] = find.at({orbit, best});
        }
    }
    return out;
}

GSet extract(const Action& a) {
    GSet out{a.g, {}};
    for (int rep : a.orbit_reps()) out.stabs.push_back(a.stabilizer(rep));
    return out;
}

std::vector<int> realize_map(const GMap& f, const Realized& src, const Realized& dst) {
    const FiniteGroup& g = *f.source.g;
    std::vector<int> out(src.act.npts, -1);
    for (int p = 0; p < src.act.npts; ++p) {
        auto [orbit, rep] = src.point_label[p];
        auto [j, u] = f.assign[orbit];
        out[p] = dst.point_of(j, g.mul(rep, u));
    }
    return out;
}

bool gset_iso(const GSet& a, const GSet& b) {
    if (a.g != b.g) return false;
    auto key = [](const GSet& x) {
        std::vector<std::vector<int>> classes;
        for (const auto& s : x.stabs) classes.push_back(class_rep_of(s).elems);
        std::sort(classes.begin(), classes.end());
        return classes;
    };
    return key(a) == key(b);
}

// ---- constructions ----

namespace {

struct EltSet {
    Action act;
    std::vector<int> to_x, to_y;
};

// orbit decomposition of an element-level action into a GSet + maps
GSet extract_with(const Action& a) { return extract(a); }

} // namespace

ProductResult product(const GSet& x, const GSet& y) {
    if (x.g != y.g) throw GroupMismatch("product");
    const FiniteGroup& g = *x.g;
    Realized rx = realize(x), ry = realize(y);
    ProductResult out;
    int nx = rx.act.npts, ny = ry.act.npts;
    out.act.g = &g;
    out.act.npts = nx * ny;
    out.act.tbl.assign((size_t)g.order * out.act.npts, -1);
    out.to_x.resize(out.act.npts);
    out.to_y.resize(out.act.npts);
    for (int p = 0; p < nx; ++p)
        for (int q = 0; q < ny; ++q) {
            int pt = p * ny + q;
            out.to_x[pt] = p;
            out.to_y[pt] = q;
            for (int e = 0; e < g.order; ++e)
                out.act.tbl[(size_t)e * out.act.npts + pt] = rx.act.apply(e, p) * ny + ry.act.apply(e, q);
        }
    out.product = extract_with(out.act);
    // projections, per orbit of the product
    auto reps = out.act.orbit_reps();
    out.pr1.source = out.product;
    out.pr1.target = x;
    out.pr2.source = out.product;
    out.pr2.target = y;
    for (int rep : reps) {
        auto [ox, rx_elem] = rx.point_label[out.to_x[rep]];
        auto [oy, ry_elem] = ry.point_label[out.to_y[rep]];
        // rep has minimal point; stabilizer S = stab(rep) <= rx_elem H rx_elem^-1
        out.pr1.assign.push_back({ox, rx_elem});
        out.pr2.assign.push_back({oy, ry_elem});
    }
    validate(out.pr1);
    validate(out.pr2);
    return out;
}

PullbackResult pullback(const GMap& f, const GMap& g) {
    if (!(f.target == g.target)) throw GroupMismatch("pullback: targets differ");
    const FiniteGroup& grp = *f.source.g;
    Realized rx = realize(f.source), ry = realize(g.source), rz = realize(f.target);
    auto fm = realize_map(f, rx, rz);
    auto gm = realize_map(g, ry, rz);
    PullbackResult out;
    out.act.g = &grp;
    std::vector<std::pair<int, int>> pts;
    std::map<std::pair<int, int>, int> idx;
    for (int p = 0; p < rx.act.npts; ++p)
        for (int q = 0; q < ry.act.npts; ++q)
            if (fm[p] == gm[q]) {
                idx[{p, q}] = (int)pts.size();
                pts.push_back({p, q});
            }
    out.act.npts = (int)pts.size();
    out.act.tbl.assign((size_t)grp.order * out.act.npts, -1);
    out.to_x.resize(out.act.npts);
    out.to_y.resize(out.act.npts);
    for (int i = 0; i < (int)pts.size(); ++i) {
        out.to_x[i] = pts[i].first;
        out.to_y[i] = pts[i].second;
        for (int e = 0; e < grp.order; ++e) {
            std::pair<int, int> im{rx.act.apply(e, pts[i].first), ry.act.apply(e, pts[i].second)};
            out.act.tbl[(size_t)e * out.act.npts + i] = idx.at(im);
        }
    }
    out.pullback = extract_with(out.act);
    return out;
}

std::optional<int> degree_elementwise(const Action& src, const Action& dst, const std::vector<int>& f) {
    std::vector<int> fib(dst.npts, 0);
    for (int p = 0; p < src.npts; ++p) fib[f[p]]++;
    if (dst.npts == 0) return src.npts == 0 ? std::optional<int>(0) : std::nullopt;
    int d = fib[0];
    for (int q = 1; q < dst.npts; ++q)
        if (fib[q] != d) return std::nullopt;
    return d;
}

std::optional<int> degree(const GMap& f) {
    Realized rs = realize(f.source), rt = realize(f.target);
    auto m = realize_map(f, rs, rt);
    return degree_elementwise(rs.act, rt.act, m);
}

GSet induce(const Subgroup& h, const SubgroupGroup& hg, const GSet& x_h) {
    if (x_h.g != hg.group.get()) throw SubgroupMismatch("induce: X is not a set over the given subgroup");
    GSet out{h.g, {}};
    for (const auto& s : x_h.stabs) {
        std::vector<int> parent_elems;
        for (int e : s.elems) parent_elems.push_back(hg.embed[e]);
        out.stabs.push_back(subgroup_from_elements(*h.g, parent_elems));
    }
    return out;
}

ExponentialDiagram dependent_product_elt(const Action& X, const Action& Y, const Action& A,
                                         const std::vector<int>& f, const std::vector<int>& p,
                                         size_t cap) {
    const FiniteGroup& g = *X.g;
    ExponentialDiagram out;
    // fibers of f and candidate sets of p
    std::vector<std::vector<int>> fiber(Y.npts);
    for (int x = 0; x < X.npts; ++x) fiber[f[x]].push_back(x);
    std::vector<std::vector<int>> cand(X.npts);
    for (int a = 0; a < A.npts; ++a) cand[p[a]].push_back(a);
    // enumerate sections per y
    struct Pt { int y; std::vector<int> s; }; // s indexed along fiber[y]
    std::vector<Pt> pts;
    for (int y = 0; y < Y.npts; ++y) {
        size_t count = 1;
        for (int x : fiber[y]) {
            count *= cand[x].size();
            if (count > cap) throw TruncationTooLarge("dependent_product: section count exceeds cap");
        }
        if (count == 0) continue;
        std::vector<int> pick(fiber[y].size(), 0);
        while (true) {
            Pt pt{y, {}};
            pt.s.resize(fiber[y].size());
            for (size_t i = 0; i < fiber[y].size(); ++i) pt.s[i] = cand[fiber[y][i]][pick[i]];
            pts.push_back(pt);
            if (pts.size() > cap) throw TruncationTooLarge("dependent_product: too many points");
            size_t i = 0;
            for (; i < pick.size(); ++i) {
                if (++pick[i] < (int)cand[fiber[y][i]].size()) break;
                pick[i] = 0;
            }
            if (i == pick.size()) break;
            if (pick.empty()) break; // single empty section
        }
    }
    auto index_of = [&](int y, const std::vector<int>& s) {
        for (size_t i = 0; i < pts.size(); ++i)
            if (pts[i].y == y && pts[i].s == s) return (int)i;
        throw Error("dependent_product: section image not found");
    };
    out.pi_act.g = &g;
    out.pi_act.npts = (int)pts.size();
    out.pi_act.tbl.assign((size_t)g.order * pts.size(), -1);
    out.pi_to_y.resize(pts.size());
    // position of x within fiber[y]
    std::vector<int> pos(X.npts, -1);
    for (int y = 0; y < Y.npts; ++y)
        for (size_t i = 0; i < fiber[y].size(); ++i) pos[fiber[y][i]] = (int)i;
    for (size_t i = 0; i < pts.size(); ++i) {
        out.pi_to_y[i] = pts[i].y;
        for (int e = 0; e < g.order; ++e) {
            int y2 = Y.apply(e, pts[i].y);
            std::vector<int> s2(fiber[y2].size());
            int einv = g.inv(e);
            for (size_t j = 0; j < fiber[y2].size(); ++j) {
                int x2 = fiber[y2][j];
                int x1 = X.apply(einv, x2);
                s2[j] = A.apply(e, pts[i].s[pos[x1]]);
            }
            out.pi_act.tbl[(size_t)e * pts.size() + i] = index_of(y2, s2);
        }
    }
    out.pi = extract(out.pi_act);
    // X x_Y Pi: pairs (x, pi-point) with f(x) = pi_to_y
    std::vector<std::pair<int, int>> xp;
    std::map<std::pair<int, int>, int> xpi;
    for (int x = 0; x < X.npts; ++x)
        for (size_t i = 0; i < pts.size(); ++i)
            if (f[x] == pts[i].y) {
                xpi[{x, (int)i}] = (int)xp.size();
                xp.push_back({x, (int)i});
            }
    out.xp_act.g = &g;
    out.xp_act.npts = (int)xp.size();
    out.xp_act.tbl.assign((size_t)g.order * xp.size(), -1);
    out.xp_to_a.resize(xp.size());
    out.xp_to_x.resize(xp.size());
    out.xp_to_pi.resize(xp.size());
    for (size_t i = 0; i < xp.size(); ++i) {
        auto [x, pi] = xp[i];
        out.xp_to_x[i] = x;
        out.xp_to_pi[i] = pi;
        out.xp_to_a[i] = pts[pi].s[pos[x]]; // evaluation
        for (int e = 0; e < g.order; ++e)
            out.xp_act.tbl[(size_t)e * xp.size() + i] =
                xpi.at({X.apply(e, x), out.pi_act.apply(e, pi)});
    }
    out.x_times_pi = extract(out.xp_act);
    return out;
}

ExponentialDiagram dependent_product(const GMap& f, const GMap& p, size_t cap) {
    if (!(p.target == f.source)) throw GroupMismatch("dependent_product: p must target the source of f");
    Realized rx = realize(f.source), ry = realize(f.target), ra = realize(p.source);
    auto fm = realize_map(f, rx, ry);
    auto pm = realize_map(p, ra, rx);
    return dependent_product_elt(rx.act, ry.act, ra.act, fm, pm, cap);
}

} // namespace tamb
