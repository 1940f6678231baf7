#include "tamb/mackey.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "tamb/parallel.hpp"

namespace tamb {

IMat imat_identity(int n) {
    IMat a(n, IVec(n, 0));
    for (int i = 0; i < n; ++i) a[i][i] = 1;
    return a;
}

IMat imat_zero(int rows, int cols) { return IMat(rows, IVec(cols, 0)); }

IMat imat_mul(const IMat& a, const IMat& b) {
    size_t n = a.size(), k = b.size(), m = k ? b[0].size() : 0;
    IMat c(n, IVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t t = 0; t < k; ++t) {
            if (!a[i][t]) continue;
            for (size_t j = 0; j < m; ++j) c[i][j] += a[i][t] * b[t][j];
        }
    return c;
}

IVec imat_apply(const IMat& a, const IVec& v) {
    IVec out(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j)
            if (a[i][j]) out[i] += a[i][j] * v[j];
    return out;
}

int MackeyData::sub_index(const Subgroup& h) const { return G->subgroup_index(h); }
const IMat& MackeyData::res(int k, int h) const { return res_.at({k, h}); }
const IMat& MackeyData::tr(int k, int h) const { return tr_.at({k, h}); }
const IMat& MackeyData::cmat(int g, int h) const { return conj_[g].at(h); }
int MackeyData::conj_target(int g, int h) const {
    return G->subgroup_index(conjugate_subgroup(subs[h], g));
}

namespace {

ZVec to_z(const IVec& v) {
    ZVec out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = (long)v[i];
    return out;
}

bool level_equal(const PresentedZModule& m, const IVec& a, const IVec& b) {
    if (m.relations().empty()) return a == b; // free level: exact comparison
    return m.equal(to_z(a), to_z(b));
}

// product of two coordinate vectors through the bilinear table
IVec table_mul(const std::vector<std::vector<IVec>>& table, int ngens, const IVec& a, const IVec& b) {
    IVec out(ngens, 0);
    for (int i = 0; i < ngens; ++i) {
        if (!a[i]) continue;
        for (int j = 0; j < ngens; ++j) {
            if (!b[j]) continue;
            const IVec& c = table[i][j];
            for (int k = 0; k < ngens; ++k) out[k] += a[i] * b[j] * c[k];
        }
    }
    return out;
}

} // namespace

AxiomReport check_axioms(const MackeyData& m) {
    AxiomReport rep;
    const FiniteGroup& g = *m.G;
    int ns = (int)m.subs.size();
    std::vector<std::string> fails;
    auto fail = [&](const std::string& s) { fails.push_back(s); };
    auto subname = [&](int i) {
        std::ostringstream os;
        os << "{";
        for (size_t j = 0; j < m.subs[i].elems.size(); ++j) os << (j ? "," : "") << m.subs[i].elems[j];
        os << "}";
        return os.str();
    };

    // shape + well-definedness of all structure matrices
    for (int h = 0; h < ns; ++h) {
        for (int k = 0; k < ns; ++k) {
            if (!m.subs[k].contains(m.subs[h])) continue;
            const IMat &r = m.res(k, h), &t = m.tr(k, h);
            if ((int)r.size() != m.level[h].ngens() || (int)t.size() != m.level[k].ngens())
                fail("matrix shape at (" + subname(h) + "," + subname(k) + ")");
            else {
                if (!well_defined_hom(m.level[k], m.level[h], zmat_from_ll(r)))
                    fail("Res not well-defined at (" + subname(h) + "<=" + subname(k) + ")");
                if (!well_defined_hom(m.level[h], m.level[k], zmat_from_ll(t)))
                    fail("Tr not well-defined at (" + subname(h) + "<=" + subname(k) + ")");
            }
            rep.checks += 2;
        }
        for (int e = 0; e < g.order; ++e) {
            int h2 = m.conj_target(e, h);
            const IMat& c = m.cmat(e, h);
            if (!well_defined_hom(m.level[h], m.level[h2], zmat_from_ll(c)))
                fail("c_g not well-defined at g=" + std::to_string(e) + ", H=" + subname(h));
            rep.checks += 1;
        }
    }

    // (i) identities
    for (int h = 0; h < ns; ++h) {
        int n = m.level[h].ngens();
        IMat id = imat_identity(n);
        for (int i = 0; i < n; ++i) {
            IVec ei(n, 0);
            ei[i] = 1;
            if (!level_equal(m.level[h], imat_apply(m.res(h, h), ei), ei))
                fail("Res_H^H != id at H=" + subname(h));
            if (!level_equal(m.level[h], imat_apply(m.tr(h, h), ei), ei))
                fail("Tr_H^H != id at H=" + subname(h));
        }
        for (int e : m.subs[h].elems) {
            for (int i = 0; i < n; ++i) {
                IVec ei(n, 0);
                ei[i] = 1;
                if (!level_equal(m.level[h], imat_apply(m.cmat(e, h), ei), ei))
                    fail("c_h != id for h in H at H=" + subname(h));
            }
        }
        rep.checks += 2 + m.subs[h].order();
    }

    // (ii) functoriality over chains H <= K <= L
    for (int h = 0; h < ns; ++h)
        for (int k = 0; k < ns; ++k) {
            if (!m.subs[k].contains(m.subs[h])) continue;
            for (int l = 0; l < ns; ++l) {
                if (!m.subs[l].contains(m.subs[k])) continue;
                IMat lhs = imat_mul(m.res(k, h), m.res(l, k));
                const IMat& rhs = m.res(l, h);
                IMat lhs2 = imat_mul(m.tr(l, k), m.tr(k, h));
                const IMat& rhs2 = m.tr(l, h);
                for (size_t j = 0; !lhs.empty() && j < lhs[0].size(); ++j) {
                    IVec a(lhs.size()), b(lhs.size());
                    for (size_t i = 0; i < lhs.size(); ++i) { a[i] = lhs[i][j]; b[i] = rhs[i][j]; }
                    if (!level_equal(m.level[h], a, b))
                        fail("Res functoriality at " + subname(h) + "<=" + subname(k) + "<=" + subname(l));
                }
                for (size_t j = 0; !lhs2.empty() && j < lhs2[0].size(); ++j) {
                    IVec a(lhs2.size()), b(lhs2.size());
                    for (size_t i = 0; i < lhs2.size(); ++i) { a[i] = lhs2[i][j]; b[i] = rhs2[i][j]; }
                    if (!level_equal(m.level[l], a, b))
                        fail("Tr functoriality at " + subname(h) + "<=" + subname(k) + "<=" + subname(l));
                }
                rep.checks += 2;
            }
        }

    // (iii) conjugation: cocycle and compatibility with Res/Tr
    auto mats_equal_mod = [&](const PresentedZModule& mod, const IMat& a, const IMat& b) {
        if (a.size() != b.size()) return false;
        size_t cols = a.empty() ? 0 : a[0].size();
        for (size_t j = 0; j < cols; ++j) {
            IVec x(a.size()), y(a.size());
            for (size_t i = 0; i < a.size(); ++i) { x[i] = a[i][j]; y[i] = b[i][j]; }
            if (!level_equal(mod, x, y)) return false;
        }
        return true;
    };
    for (int h = 0; h < ns; ++h)
        for (int e1 = 0; e1 < g.order; ++e1)
            for (int e2 = 0; e2 < g.order; ++e2) {
                int mid = m.conj_target(e2, h);
                IMat lhs = imat_mul(m.cmat(e1, mid), m.cmat(e2, h));
                const IMat& rhs = m.cmat(g.mul(e1, e2), h);
                if (!mats_equal_mod(m.level[m.conj_target(g.mul(e1, e2), h)], lhs, rhs))
                    fail("c_g cocycle at H=" + subname(h));
                rep.checks += 1;
            }
    for (int h = 0; h < ns; ++h)
        for (int k = 0; k < ns; ++k) {
            if (!m.subs[k].contains(m.subs[h])) continue;
            for (int e = 0; e < g.order; ++e) {
                int h2 = m.conj_target(e, h), k2 = m.conj_target(e, k);
                if (!mats_equal_mod(m.level[h2], imat_mul(m.cmat(e, h), m.res(k, h)),
                                    imat_mul(m.res(k2, h2), m.cmat(e, k))))
                    fail("c_g Res compat at g=" + std::to_string(e) + " " + subname(h) + "<=" + subname(k));
                if (!mats_equal_mod(m.level[k2], imat_mul(m.cmat(e, k), m.tr(k, h)),
                                    imat_mul(m.tr(k2, h2), m.cmat(e, h))))
                    fail("c_g Tr compat at g=" + std::to_string(e) + " " + subname(h) + "<=" + subname(k));
                rep.checks += 2;
            }
        }

    // (iv) double coset formula, parallel over (L, K, H)
    struct Triple { int l, k, h; };
    std::vector<Triple> triples;
    for (int l = 0; l < ns; ++l)
        for (int k = 0; k < ns; ++k) {
            if (!m.subs[l].contains(m.subs[k])) continue;
            for (int h = 0; h < ns; ++h)
                if (m.subs[l].contains(m.subs[h])) triples.push_back({l, k, h});
        }
    std::vector<std::string> dc_fail(triples.size());
    par::for_index(triples.size(), [&](size_t ti) {
        auto [l, k, h] = triples[ti];
        IMat lhs = imat_mul(m.res(l, k), m.tr(l, h));
        IMat rhs = imat_zero(m.level[k].ngens(), m.level[h].ngens());
        for (int e : double_cosets(m.subs[k], m.subs[h], m.subs[l])) {
            // Tr_{K cap gHg^-1}^K c_g Res_{H cap g^-1 K g}^H
            Subgroup hg = conjugate_subgroup(m.subs[h], e);
            Subgroup inner = intersect(m.subs[k], hg);
            Subgroup inner_src = conjugate_subgroup(inner, g.inv(e)); // = H cap g^-1 K g
            int i_src = m.sub_index(inner_src), i_dst = m.sub_index(inner);
            IMat term = imat_mul(m.tr(k, i_dst), imat_mul(m.cmat(e, i_src), m.res(h, i_src)));
            for (size_t i = 0; i < rhs.size(); ++i)
                for (size_t j = 0; j < rhs[i].size(); ++j) rhs[i][j] += term[i][j];
        }
        if (!mats_equal_mod(m.level[k], lhs, rhs)) {
            std::ostringstream os;
            os << "double coset formula fails at K=" << subname(k) << " H=" << subname(h)
               << " L=" << subname(l);
            dc_fail[ti] = os.str();
        }
    });
    rep.checks += (long long)triples.size();
    for (auto& s : dc_fail)
        if (!s.empty()) fail(s);

    // Green conditions
    if (m.green) {
        for (int h = 0; h < ns; ++h) {
            int n = m.level[h].ngens();
            const auto& table = m.mult[h];
            for (int i = 0; i < n; ++i) {
                IVec ei(n, 0);
                ei[i] = 1;
                if (!level_equal(m.level[h], table_mul(table, n, m.unit[h], ei), ei))
                    fail("unit law at H=" + subname(h));
                for (int j = 0; j < n; ++j) {
                    IVec ej(n, 0);
                    ej[j] = 1;
                    if (!level_equal(m.level[h], table_mul(table, n, ei, ej),
                                     table_mul(table, n, ej, ei)))
                        fail("commutativity at H=" + subname(h));
                }
            }
            // associativity on basis triples
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        IVec ei(n, 0), ej(n, 0), ek(n, 0);
                        ei[i] = 1;
                        ej[j] = 1;
                        ek[k] = 1;
                        IVec lhs = table_mul(table, n, table_mul(table, n, ei, ej), ek);
                        IVec rhs = table_mul(table, n, ei, table_mul(table, n, ej, ek));
                        if (!level_equal(m.level[h], lhs, rhs)) fail("associativity at H=" + subname(h));
                    }
            rep.checks += 1 + n * n;
        }
        // Res and c_g are ring maps; Frobenius reciprocity
        for (int h = 0; h < ns; ++h)
            for (int k = 0; k < ns; ++k) {
                if (!m.subs[k].contains(m.subs[h])) continue;
                int nk = m.level[k].ngens(), nh = m.level[h].ngens();
                const IMat& r = m.res(k, h);
                if (!level_equal(m.level[h], imat_apply(r, m.unit[k]), m.unit[h]))
                    fail("Res unit at " + subname(h) + "<=" + subname(k));
                for (int i = 0; i < nk; ++i)
                    for (int j = 0; j < nk; ++j) {
                        IVec ei(nk, 0), ej(nk, 0);
                        ei[i] = 1;
                        ej[j] = 1;
                        IVec lhs = imat_apply(r, table_mul(m.mult[k], nk, ei, ej));
                        IVec rhs = table_mul(m.mult[h], nh, imat_apply(r, ei), imat_apply(r, ej));
                        if (!level_equal(m.level[h], lhs, rhs))
                            fail("Res ring map at " + subname(h) + "<=" + subname(k));
                    }
                const IMat& t = m.tr(k, h);
                for (int i = 0; i < nk; ++i)
                    for (int j = 0; j < nh; ++j) {
                        IVec xi(nk, 0), yj(nh, 0);
                        xi[i] = 1;
                        yj[j] = 1;
                        IVec lhs = table_mul(m.mult[k], nk, xi, imat_apply(t, yj));
                        IVec rhs = imat_apply(t, table_mul(m.mult[h], nh, imat_apply(r, xi), yj));
                        if (!level_equal(m.level[k], lhs, rhs))
                            fail("Frobenius reciprocity at " + subname(h) + "<=" + subname(k));
                    }
                rep.checks += 2;
            }
        for (int h = 0; h < ns; ++h)
            for (int e = 0; e < g.order; ++e) {
                int h2 = m.conj_target(e, h);
                int n = m.level[h].ngens();
                const IMat& c = m.cmat(e, h);
                if (!level_equal(m.level[h2], imat_apply(c, m.unit[h]), m.unit[h2]))
                    fail("c_g unit at H=" + subname(h));
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j) {
                        IVec ei(n, 0), ej(n, 0);
                        ei[i] = 1;
                        ej[j] = 1;
                        IVec lhs = imat_apply(c, table_mul(m.mult[h], n, ei, ej));
                        IVec rhs = table_mul(m.mult[h2], m.level[h2].ngens(), imat_apply(c, ei),
                                             imat_apply(c, ej));
                        if (!level_equal(m.level[h2], lhs, rhs)) fail("c_g ring map at H=" + subname(h));
                    }
                rep.checks += 1;
            }
    }

    // partial norm data: spot conditions on supplied entries
    for (const auto& [kh, vals] : m.norm_) {
        auto [k, h] = kh;
        for (const auto& [i, v] : vals) {
            if (k == h) {
                IVec ei(m.level[h].ngens(), 0);
                ei[i] = 1;
                if (!level_equal(m.level[h], v, ei)) fail("Nm_H^H != id at H=" + subname(h));
            }
            rep.checks += 1;
        }
    }

    if (!fails.empty()) {
        rep.pass = false;
        rep.failure = fails.front();
    }
    return rep;
}

// ---- Burnside ----

MackeyData burnside(const GroupPtr& gp) {
    const FiniteGroup& g = *gp;
    MackeyData m;
    m.G = gp;
    m.name = "burnside(" + g.name + ")";
    m.subs = g.subgroups();
    int ns = (int)m.subs.size();
    // basis of level H: H-conjugacy classes of subgroups of H
    std::vector<std::vector<Subgroup>> basis(ns);
    auto h_class_rep = [&](const Subgroup& h, const Subgroup& s) {
        Subgroup best = s;
        for (int e : h.elems) {
            Subgroup c = conjugate_subgroup(s, e);
            if (c < best) best = c;
        }
        return best;
    };
    auto basis_index = [&](int h, const Subgroup& s) {
        Subgroup r = h_class_rep(m.subs[h], s);
        for (size_t i = 0; i < basis[h].size(); ++i)
            if (basis[h][i] == r) return (int)i;
        throw Error("burnside: class not found");
    };
    for (int h = 0; h < ns; ++h) {
        std::set<std::vector<int>> seen;
        for (const auto& s : subgroups_of(m.subs[h])) {
            Subgroup r = h_class_rep(m.subs[h], s);
            if (seen.insert(r.elems).second) basis[h].push_back(r);
        }
        std::sort(basis[h].begin(), basis[h].end());
        m.level.push_back(PresentedZModule((int)basis[h].size(), {}));
    }
    // Res: restrict the K-set K/S to H and decompose
    for (int k = 0; k < ns; ++k)
        for (int h = 0; h < ns; ++h) {
            if (!m.subs[k].contains(m.subs[h])) continue;
            IMat r = imat_zero((int)basis[h].size(), (int)basis[k].size());
            IMat t = imat_zero((int)basis[k].size(), (int)basis[h].size());
            for (size_t j = 0; j < basis[k].size(); ++j) {
                const Subgroup& s = basis[k][j];
                // H-orbits on K/S: reps x with orbit stabilizer H cap xSx^-1
                std::set<int> used;
                for (int x : m.subs[k].elems) {
                    // coset xS minimal element
                    int rep = *std::min_element(s.elems.begin(), s.elems.end(), [&](int a, int b) {
                        return g.mul(x, a) < g.mul(x, b);
                    });
                    rep = g.mul(x, rep);
                    if (used.count(rep)) continue;
                    // mark the H-orbit of the coset xS
                    for (int e : m.subs[h].elems) {
                        int y = g.mul(e, x);
                        int yrep = *std::min_element(s.elems.begin(), s.elems.end(), [&](int a, int b) {
                            return g.mul(y, a) < g.mul(y, b);
                        });
                        used.insert(g.mul(y, yrep));
                    }
                    Subgroup stab = intersect(m.subs[h], conjugate_subgroup(s, x));
                    r[basis_index(h, stab)][j] += 1;
                }
            }
            for (size_t j = 0; j < basis[h].size(); ++j) t[basis_index(k, basis[h][j])][j] = 1;
            m.res_[{k, h}] = r;
            m.tr_[{k, h}] = t;
        }
    // conjugation
    m.conj_.resize(g.order);
    for (int e = 0; e < g.order; ++e)
        for (int h = 0; h < ns; ++h) {
            int h2 = g.subgroup_index(conjugate_subgroup(m.subs[h], e));
            IMat c = imat_zero((int)basis[h2].size(), (int)basis[h].size());
            for (size_t j = 0; j < basis[h].size(); ++j)
                c[basis_index(h2, conjugate_subgroup(basis[h][j], e))][j] = 1;
            m.conj_[e][h] = c;
        }
    // Green structure: [H/S][H/T] = sum over S\H/T of [H/(S cap xTx^-1)]
    m.green = true;
    m.unit.resize(ns);
    m.mult.resize(ns);
    for (int h = 0; h < ns; ++h) {
        int n = (int)basis[h].size();
        m.unit[h] = IVec(n, 0);
        m.unit[h][basis_index(h, m.subs[h])] = 1;
        m.mult[h].assign(n, std::vector<IVec>(n, IVec(n, 0)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int x : double_cosets(basis[h][i], basis[h][j], m.subs[h]))
                    m.mult[h][i][j][basis_index(
                        h, intersect(basis[h][i], conjugate_subgroup(basis[h][j], x)))] += 1;
    }
    return m;
}

// ---- fixed points of functions on a G-set ----

MackeyData fixed_point_functor(const GroupPtr& gp, const GSet& x) {
    const FiniteGroup& g = *gp;
    MackeyData m;
    m.G = gp;
    m.name = "fixedpoints(" + g.name + ")";
    m.subs = g.subgroups();
    int ns = (int)m.subs.size();
    Realized rx = realize(x);
    int np = rx.act.npts;
    // orbits of each subgroup on the points
    auto orbits_of = [&](const Subgroup& h) {
        std::vector<int> orb(np, -1);
        std::vector<int> reps;
        for (int p = 0; p < np; ++p) {
            if (orb[p] >= 0) continue;
            int id = (int)reps.size();
            reps.push_back(p);
            std::vector<int> stack{p};
            orb[p] = id;
            while (!stack.empty()) {
                int q = stack.back();
                stack.pop_back();
                for (int e : h.elems) {
                    int r = rx.act.apply(e, q);
                    if (orb[r] < 0) { orb[r] = id; stack.push_back(r); }
                }
            }
        }
        return std::pair(orb, reps);
    };
    std::vector<std::vector<int>> orb(ns);
    std::vector<std::vector<int>> reps(ns);
    for (int h = 0; h < ns; ++h) std::tie(orb[h], reps[h]) = orbits_of(m.subs[h]);
    for (int h = 0; h < ns; ++h) m.level.push_back(PresentedZModule((int)reps[h].size(), {}));
    for (int k = 0; k < ns; ++k)
        for (int h = 0; h < ns; ++h) {
            if (!m.subs[k].contains(m.subs[h])) continue;
            int nk = (int)reps[k].size(), nh = (int)reps[h].size();
            IMat r = imat_zero(nh, nk);
            for (int j = 0; j < nk; ++j)
                for (int i = 0; i < nh; ++i)
                    if (orb[k][reps[h][i]] == j) r[i][j] = 1; // indicator restriction
            IMat t = imat_zero(nk, nh);
            for (int j = 0; j < nh; ++j) {
                // Tr f (x) = sum over cosets kH of f(k^-1 x)
                for (int i = 0; i < nk; ++i) {
                    int cnt = 0;
                    for (int c : left_coset_reps(m.subs[h], m.subs[k]))
                        if (orb[h][rx.act.apply(g.inv(c), reps[k][i])] == j) ++cnt;
                    t[i][j] = cnt;
                }
            }
            m.res_[{k, h}] = r;
            m.tr_[{k, h}] = t;
        }
    m.conj_.resize(g.order);
    for (int e = 0; e < g.order; ++e)
        for (int h = 0; h < ns; ++h) {
            int h2 = g.subgroup_index(conjugate_subgroup(m.subs[h], e));
            int nh = (int)reps[h].size(), n2 = (int)reps[h2].size();
            IMat c = imat_zero(n2, nh);
            // c_g f = f(g^-1 -): indicator of orbit O goes to indicator of gO
            for (int j = 0; j < nh; ++j) c[orb[h2][rx.act.apply(e, reps[h][j])]][j] = 1;
            m.conj_[e][h] = c;
        }
    m.green = true;
    m.unit.resize(ns);
    m.mult.resize(ns);
    for (int h = 0; h < ns; ++h) {
        int n = (int)reps[h].size();
        m.unit[h] = IVec(n, 1); // the constant function 1
        m.mult[h].assign(n, std::vector<IVec>(n, IVec(n, 0)));
        for (int i = 0; i < n; ++i) m.mult[h][i][i][i] = 1; // pointwise product
    }
    return m;
}

// ---- the Green counterexample over C_p ----

MackeyData green_counterexample(const GroupPtr& cp, int p, int d) {
    const FiniteGroup& g = *cp;
    if (g.order != p) throw UsageError("green_counterexample: group must be C_p");
    if (d < 1) throw UsageError("green_counterexample: need d >= 1");
    MackeyData m;
    m.G = cp;
    m.name = "green_cex(p=" + std::to_string(p) + ",d=" + std::to_string(d) + ")";
    m.subs = g.subgroups();
    if (m.subs.size() != 2) throw UsageError("green_counterexample: p must be prime");
    // level 0: trivial subgroup, F_p[x] truncated; level 1: C_p, F_p
    ZMat rel_lo(d + 1, ZVec(d + 1, 0));
    for (int i = 0; i <= d; ++i) rel_lo[i][i] = p;
    m.level.push_back(PresentedZModule(d + 1, rel_lo));
    m.level.push_back(PresentedZModule(1, {{p}}));
    IMat res(d + 1, IVec(1, 0));
    res[0][0] = 1; // unit inclusion
    IMat tr(1, IVec(d + 1, 0)); // zero transfer
    m.res_[{1, 0}] = res;
    m.tr_[{1, 0}] = tr;
    m.res_[{0, 0}] = imat_identity(d + 1);
    m.tr_[{0, 0}] = imat_identity(d + 1);
    m.res_[{1, 1}] = imat_identity(1);
    m.tr_[{1, 1}] = imat_identity(1);
    m.conj_.resize(g.order);
    for (int e = 0; e < g.order; ++e) {
        m.conj_[e][0] = imat_identity(d + 1);
        m.conj_[e][1] = imat_identity(1);
    }
    m.green = true;
    m.unit = {IVec(d + 1, 0), IVec(1, 1)};
    m.unit[0][0] = 1;
    m.mult.resize(2);
    m.mult[0].assign(d + 1, std::vector<IVec>(d + 1, IVec(d + 1, 0)));
    for (int i = 0; i <= d; ++i)
        for (int j = 0; j <= d; ++j)
            if (i + j <= d) m.mult[0][i][j][i + j] = 1; // x^i x^j, truncated
    m.mult[1].assign(1, std::vector<IVec>(1, IVec(1, 0)));
    m.mult[1][0][0][0] = 1;
    m.gen_degree = {std::vector<int>(d + 1, 0), {0}};
    for (int i = 0; i <= d; ++i) m.gen_degree[0][i] = i;
    return m;
}

// ---- free truncations ----

int FreeTruncation::basis_index(int levelidx, const IrrKey& k) const {
    const auto& b = basis[levelidx];
    auto it = std::lower_bound(b.begin(), b.end(), k);
    if (it == b.end() || !(*it == k)) return -1;
    return (int)(it - b.begin());
}

IVec coords_of(const FreeTruncation& ft, int levelidx, const LevelElement& e) {
    IVec out(ft.basis[levelidx].size(), 0);
    for (const auto& [k, c] : e.terms) {
        if (irr_degree(k) > ft.maxdeg) continue;
        int i = ft.basis_index(levelidx, k);
        if (i < 0) throw Error("coords_of: basis element missing");
        out[i] += c;
    }
    return out;
}

FreeTruncation free_truncation(const GroupPtr& gp, const GSet& x, int maxdeg, MulCache* cache,
                               bool with_norms) {
    const FiniteGroup& g = *gp;
    FreeTruncation ft;
    ft.maxdeg = maxdeg;
    MackeyData& m = ft.data;
    m.G = gp;
    m.name = "free_trunc(" + g.name + ", maxdeg=" + std::to_string(maxdeg) + ")";
    m.subs = g.subgroups();
    int ns = (int)m.subs.size();
    MulCache local;
    if (!cache) cache = &local;
    for (int h = 0; h < ns; ++h) {
        ft.ctx.push_back(make_level(gp, x, m.subs[h]));
        auto b = level_basis(*ft.ctx[h], maxdeg);
        std::sort(b.begin(), b.end());
        ft.basis.push_back(b);
        m.level.push_back(PresentedZModule((int)b.size(), {}));
        std::vector<int> degs;
        for (const auto& k : b) degs.push_back(irr_degree(k));
        m.gen_degree.push_back(degs);
    }
    for (int k = 0; k < ns; ++k)
        for (int h = 0; h < ns; ++h) {
            if (!m.subs[k].contains(m.subs[h])) continue;
            int nk = (int)ft.basis[k].size(), nh = (int)ft.basis[h].size();
            IMat rm = imat_zero(nh, nk), tm = imat_zero(nk, nh);
            for (int j = 0; j < nk; ++j) {
                LevelElement e;
                e.sig = ft.ctx[k]->sig;
                e.addmul(ft.basis[k][j], 1);
                IVec col = coords_of(ft, h, res(*ft.ctx[k], *ft.ctx[h], e));
                for (int i = 0; i < nh; ++i) rm[i][j] = col[i];
            }
            for (int j = 0; j < nh; ++j) {
                LevelElement e;
                e.sig = ft.ctx[h]->sig;
                e.addmul(ft.basis[h][j], 1);
                IVec col = coords_of(ft, k, tr(*ft.ctx[h], *ft.ctx[k], e));
                for (int i = 0; i < nk; ++i) tm[i][j] = col[i];
            }
            m.res_[{k, h}] = rm;
            m.tr_[{k, h}] = tm;
        }
    m.conj_.resize(g.order);
    for (int e = 0; e < g.order; ++e)
        for (int h = 0; h < ns; ++h) {
            int h2 = g.subgroup_index(conjugate_subgroup(m.subs[h], e));
            int nh = (int)ft.basis[h].size(), n2 = (int)ft.basis[h2].size();
            IMat c = imat_zero(n2, nh);
            for (int j = 0; j < nh; ++j) {
                LevelElement el;
                el.sig = ft.ctx[h]->sig;
                el.addmul(ft.basis[h][j], 1);
                IVec col = coords_of(ft, h2, cg(*ft.ctx[h], *ft.ctx[h2], el, e));
                for (int i = 0; i < n2; ++i) c[i][j] = col[i];
            }
            m.conj_[e][h] = c;
        }
    m.green = true;
    m.unit.resize(ns);
    m.mult.resize(ns);
    for (int h = 0; h < ns; ++h) {
        int n = (int)ft.basis[h].size();
        LevelElement one = to_sum(one_class(ft.ctx[h]->sig));
        m.unit[h] = coords_of(ft, h, one);
        m.mult[h].assign(n, std::vector<IVec>(n, IVec(n, 0)));
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                FormalSum prod = mul_irr(ft.ctx[h]->sig, ft.basis[h][i], ft.basis[h][j], cache);
                IVec v = coords_of(ft, h, prod); // drops terms above maxdeg
                m.mult[h][i][j] = v;
                m.mult[h][j][i] = v;
            }
    }
    if (with_norms) {
        for (int k = 0; k < ns; ++k)
            for (int h = 0; h < ns; ++h) {
                if (!m.subs[k].contains(m.subs[h])) continue;
                std::map<int, IVec> vals;
                int idx = m.subs[k].order() / m.subs[h].order();
                for (int j = 0; j < (int)ft.basis[h].size(); ++j) {
                    if (irr_degree(ft.basis[h][j]) * idx > maxdeg) continue;
                    LevelElement e;
                    e.sig = ft.ctx[h]->sig;
                    e.addmul(ft.basis[h][j], 1);
                    LevelElement nv = nm(*ft.ctx[h], *ft.ctx[k], e);
                    bool inside = true;
                    for (const auto& [kk, cc] : nv.terms)
                        if (irr_degree(kk) > maxdeg) inside = false;
                    if (inside) vals[j] = coords_of(ft, k, nv);
                }
                if (!vals.empty()) m.norm_[{k, h}] = vals;
            }
    }
    return ft;
}

} // namespace tamb
