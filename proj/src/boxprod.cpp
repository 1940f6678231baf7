#include "tamb/boxprod.hpp"

#include <algorithm>
#include <sstream>

#include "tamb/parallel.hpp"

namespace tamb {

IVec green_mul(const MackeyData& m, int levelidx, const IVec& a, const IVec& b) {
    if (!m.green) throw NotGreen(m.name);
    int n = m.level[levelidx].ngens();
    IVec out(n, 0);
    for (int i = 0; i < n; ++i) {
        if (!a[i]) continue;
        for (int j = 0; j < n; ++j) {
            if (!b[j]) continue;
            const IVec& c = m.mult[levelidx][i][j];
            for (int k = 0; k < n; ++k) out[k] += a[i] * b[j] * c[k];
        }
    }
    return out;
}

int BoxProduct::LevelInfo::pos_of(int subidx) const {
    for (size_t i = 0; i < summands.size(); ++i)
        if (summands[i] == subidx) return (int)i;
    throw Error("box: summand not present");
}

int BoxProduct::gen_of(int levelidx, int subidx, const std::vector<int>& gi) const {
    const LevelInfo& li = info[levelidx];
    int pos = li.pos_of(subidx);
    int idx = li.offset[pos];
    for (size_t f = 0; f < gi.size(); ++f) idx += gi[f] * li.strides[pos][f];
    return idx;
}

namespace {

// expand per-factor coordinate vectors into tensor coordinates of one summand
void tensor_accumulate(IVec& out, int base, const std::vector<int>& strides,
                       const std::vector<IVec>& parts, size_t f, int idx, long long coef) {
    if (coef == 0) return;
    if (f == parts.size()) {
        out[base + idx] += coef;
        return;
    }
    for (size_t i = 0; i < parts[f].size(); ++i)
        if (parts[f][i])
            tensor_accumulate(out, base, strides, parts, f + 1, idx + (int)i * strides[f],
                              coef * parts[f][i]);
}

IVec unit_vec(int n, int i) {
    IVec v(n, 0);
    v[i] = 1;
    return v;
}

} // namespace

BoxProduct box(const GroupPtr& gp, std::vector<MackeyData> factors) {
    const FiniteGroup& g = *gp;
    if (factors.empty()) throw UsageError("box: need at least one factor");
    for (const auto& f : factors)
        if (f.G.get() != gp.get()) throw GroupMismatch("box: factors over different groups");
    size_t nf = factors.size();
    BoxProduct b;
    b.factors = factors;
    MackeyData& m = b.data;
    m.G = gp;
    m.name = "box(";
    for (size_t i = 0; i < nf; ++i) m.name += (i ? "," : "") + factors[i].name;
    m.name += ")";
    m.subs = g.subgroups();
    int ns = (int)m.subs.size();
    b.info.resize(ns);
    bool graded = true, greenable = true;
    for (const auto& f : factors) {
        if (f.gen_degree.empty()) graded = false;
        if (!f.green) greenable = false;
    }

    // layout
    for (int l = 0; l < ns; ++l) {
        auto& li = b.info[l];
        for (int h = 0; h < ns; ++h) {
            if (!m.subs[l].contains(m.subs[h])) continue;
            li.summands.push_back(h);
            li.offset.push_back(li.ngens);
            std::vector<int> str(nf, 1);
            for (int f = (int)nf - 2; f >= 0; --f)
                str[f] = str[f + 1] * factors[f + 1].level[h].ngens();
            int total = 1;
            for (size_t f = 0; f < nf; ++f) total *= factors[f].level[h].ngens();
            li.strides.push_back(str);
            li.ngens += total;
        }
    }

    // iterate over all pure-tensor generators of a summand
    auto each_gen = [&](int h, auto&& fn) {
        std::vector<int> gi(nf, 0);
        while (true) {
            fn(gi);
            size_t f = nf;
            while (f > 0) {
                --f;
                if (++gi[f] < factors[f].level[h].ngens()) break;
                gi[f] = 0;
                if (f == 0) return;
            }
            if (nf == 0) return;
        }
    };
    auto summand_size = [&](int h) {
        int total = 1;
        for (size_t f = 0; f < nf; ++f) total *= factors[f].level[h].ngens();
        return total;
    };

    // levels with relations, parallel over L (levels are independent)
    std::vector<PresentedZModule> built_levels(ns);
    par::for_index((size_t)ns, [&](size_t lidx) {
        int l = (int)lidx;
        auto& li = b.info[l];
        ZMat rels;
        auto add_rel = [&](const IVec& v) {
            ZVec row(v.size());
            bool nonzero = false;
            for (size_t i = 0; i < v.size(); ++i) {
                row[i] = (long)v[i];
                nonzero = nonzero || v[i] != 0;
            }
            if (nonzero) rels.push_back(row);
        };
        for (size_t pos = 0; pos < li.summands.size(); ++pos) {
            int h = li.summands[pos];
            if (summand_size(h) == 0) continue;
            // inflated tensor relations of the factors
            for (size_t f = 0; f < nf; ++f) {
                int outer = 1;
                for (size_t f2 = 0; f2 < nf; ++f2)
                    if (f2 != f) outer *= factors[f2].level[h].ngens();
                for (const auto& r : factors[f].level[h].relations()) {
                    for (int o = 0; o < outer; ++o) {
                        int rem = o, base = li.offset[pos];
                        for (size_t f2 = 0; f2 < nf; ++f2) {
                            if (f2 == f) continue;
                            int sz = factors[f2].level[h].ngens();
                            base += (rem % sz) * li.strides[pos][f2];
                            rem /= sz;
                        }
                        IVec v(li.ngens, 0);
                        for (size_t i = 0; i < r.size(); ++i)
                            v[base + (int)i * li.strides[pos][f]] += (long long)r[i].get_si();
                        add_rel(v);
                    }
                }
            }
        }
        // Frobenius relations: H <= K <= L, factor position i
        for (size_t pk = 0; pk < li.summands.size(); ++pk) {
            int k = li.summands[pk];
            for (size_t ph = 0; ph < li.summands.size(); ++ph) {
                int h = li.summands[ph];
                if (h == k || !m.subs[k].contains(m.subs[h])) continue;
                for (size_t i = 0; i < nf; ++i) {
                    // x_j over level k for j != i, x_i over level h
                    std::vector<int> sizes(nf);
                    for (size_t f = 0; f < nf; ++f)
                        sizes[f] = (f == i) ? factors[f].level[h].ngens()
                                            : factors[f].level[k].ngens();
                    std::vector<int> gi(nf, 0);
                    bool any0 = false;
                    for (int s : sizes)
                        if (s == 0) any0 = true;
                    if (any0) continue;
                    while (true) {
                        IVec v(li.ngens, 0);
                        // LHS: in S_K, factor i carries Tr(x_i)
                        {
                            std::vector<IVec> parts(nf);
                            for (size_t f = 0; f < nf; ++f)
                                parts[f] = (f == i)
                                               ? imat_apply(factors[f].tr(k, h),
                                                            unit_vec(factors[f].level[h].ngens(), gi[f]))
                                               : unit_vec(factors[f].level[k].ngens(), gi[f]);
                            tensor_accumulate(v, li.offset[pk], li.strides[pk], parts, 0, 0, 1);
                        }
                        // RHS: in S_H, the others carry Res
                        {
                            std::vector<IVec> parts(nf);
                            for (size_t f = 0; f < nf; ++f)
                                parts[f] = (f == i)
                                               ? unit_vec(factors[f].level[h].ngens(), gi[f])
                                               : imat_apply(factors[f].res(k, h),
                                                            unit_vec(factors[f].level[k].ngens(), gi[f]));
                            tensor_accumulate(v, li.offset[ph], li.strides[ph], parts, 0, 0, -1);
                        }
                        add_rel(v);
                        size_t f = nf;
                        bool done = false;
                        while (f > 0) {
                            --f;
                            if (++gi[f] < sizes[f]) break;
                            gi[f] = 0;
                            if (f == 0) done = true;
                        }
                        if (done) break;
                    }
                }
            }
        }
        // Weyl relations
        for (size_t ph = 0; ph < li.summands.size(); ++ph) {
            int h = li.summands[ph];
            if (summand_size(h) == 0) continue;
            for (int ell : m.subs[l].elems) {
                int h2 = m.G->subgroup_index(conjugate_subgroup(m.subs[h], ell));
                size_t p2 = li.pos_of(h2);
                each_gen(h, [&](const std::vector<int>& gi) {
                    IVec v(li.ngens, 0);
                    int idx = li.offset[ph];
                    for (size_t f = 0; f < nf; ++f) idx += gi[f] * li.strides[ph][f];
                    v[idx] += 1;
                    std::vector<IVec> parts(nf);
                    for (size_t f = 0; f < nf; ++f)
                        parts[f] = imat_apply(factors[f].cmat(ell, h),
                                              unit_vec(factors[f].level[h].ngens(), gi[f]));
                    tensor_accumulate(v, li.offset[p2], li.strides[p2], parts, 0, 0, -1);
                    add_rel(v);
                });
            }
        }
        built_levels[l] = PresentedZModule(li.ngens, rels);
    });
    for (int l = 0; l < ns; ++l) m.level.push_back(std::move(built_levels[l]));

    // transfers: summand-wise inclusions
    for (int l = 0; l < ns; ++l)
        for (int l2 = 0; l2 < ns; ++l2) {
            if (!m.subs[l2].contains(m.subs[l])) continue;
            IMat t = imat_zero(b.info[l2].ngens, b.info[l].ngens);
            for (size_t pos = 0; pos < b.info[l].summands.size(); ++pos) {
                int h = b.info[l].summands[pos];
                int pos2 = b.info[l2].pos_of(h);
                for (int i = 0; i < summand_size(h); ++i)
                    t[b.info[l2].offset[pos2] + i][b.info[l].offset[pos] + i] = 1;
            }
            m.tr_[{l2, l}] = t;
        }

    // restrictions: the displayed double-coset formula
    for (int l2 = 0; l2 < ns; ++l2)
        for (int l = 0; l < ns; ++l) {
            if (!m.subs[l2].contains(m.subs[l]) ) continue;
            IMat r = imat_zero(b.info[l].ngens, b.info[l2].ngens);
            for (size_t pos = 0; pos < b.info[l2].summands.size(); ++pos) {
                int h = b.info[l2].summands[pos];
                if (summand_size(h) == 0) continue;
                for (int e : double_cosets(m.subs[l], m.subs[h], m.subs[l2])) {
                    // target summand gHg^-1 cap L, source factor map:
                    // c_g Res_{H cap g^-1 L g}^H
                    Subgroup cut = intersect(m.subs[h], conjugate_subgroup(m.subs[l], g.inv(e)));
                    int cuti = m.G->subgroup_index(cut);
                    Subgroup tgt = conjugate_subgroup(cut, e);
                    int tgti = m.G->subgroup_index(tgt);
                    int tpos = b.info[l].pos_of(tgti);
                    each_gen(h, [&](const std::vector<int>& gi) {
                        int col = b.info[l2].offset[pos];
                        for (size_t f = 0; f < nf; ++f) col += gi[f] * b.info[l2].strides[pos][f];
                        std::vector<IVec> parts(nf);
                        for (size_t f = 0; f < nf; ++f)
                            parts[f] = imat_apply(
                                factors[f].cmat(e, cuti),
                                imat_apply(factors[f].res(h, cuti),
                                           unit_vec(factors[f].level[h].ngens(), gi[f])));
                        IVec v(b.info[l].ngens, 0);
                        tensor_accumulate(v, b.info[l].offset[tpos], b.info[l].strides[tpos], parts,
                                          0, 0, 1);
                        for (int i = 0; i < b.info[l].ngens; ++i) r[i][col] += v[i];
                    });
                }
            }
            m.res_[{l2, l}] = r;
        }

    // conjugation
    m.conj_.resize(g.order);
    for (int e = 0; e < g.order; ++e)
        for (int l = 0; l < ns; ++l) {
            int l2 = m.G->subgroup_index(conjugate_subgroup(m.subs[l], e));
            IMat c = imat_zero(b.info[l2].ngens, b.info[l].ngens);
            for (size_t pos = 0; pos < b.info[l].summands.size(); ++pos) {
                int h = b.info[l].summands[pos];
                if (summand_size(h) == 0) continue;
                int h2 = m.G->subgroup_index(conjugate_subgroup(m.subs[h], e));
                int pos2 = b.info[l2].pos_of(h2);
                each_gen(h, [&](const std::vector<int>& gi) {
                    int col = b.info[l].offset[pos];
                    for (size_t f = 0; f < nf; ++f) col += gi[f] * b.info[l].strides[pos][f];
                    std::vector<IVec> parts(nf);
                    for (size_t f = 0; f < nf; ++f)
                        parts[f] = imat_apply(factors[f].cmat(e, h),
                                              unit_vec(factors[f].level[h].ngens(), gi[f]));
                    IVec v(b.info[l2].ngens, 0);
                    tensor_accumulate(v, b.info[l2].offset[pos2], b.info[l2].strides[pos2], parts, 0,
                                      0, 1);
                    for (int i = 0; i < b.info[l2].ngens; ++i) c[i][col] += v[i];
                });
            }
            m.conj_[e][l] = c;
        }

    // Green structure via Frobenius-reciprocity double-coset products
    if (greenable) {
        m.green = true;
        m.unit.resize(ns);
        m.mult.resize(ns);
        par::for_index((size_t)ns, [&](size_t lidx) {
            int l = (int)lidx;
            const auto& li = b.info[l];
            std::vector<IVec> units(nf);
            for (size_t f = 0; f < nf; ++f) units[f] = factors[f].unit[l];
            IVec u(li.ngens, 0);
            int lpos = li.pos_of(l);
            tensor_accumulate(u, li.offset[lpos], li.strides[lpos], units, 0, 0, 1);
            m.unit[l] = u;
            m.mult[l].assign(li.ngens, std::vector<IVec>(li.ngens, IVec(li.ngens, 0)));
            for (size_t ph = 0; ph < li.summands.size(); ++ph) {
                int h = li.summands[ph];
                if (summand_size(h) == 0) continue;
                for (size_t pk = 0; pk < li.summands.size(); ++pk) {
                    int k = li.summands[pk];
                    if (summand_size(k) == 0) continue;
                    for (int e : double_cosets(m.subs[h], m.subs[k], m.subs[l])) {
                        Subgroup cut = intersect(m.subs[h], conjugate_subgroup(m.subs[k], e));
                        int cuti = m.G->subgroup_index(cut);
                        // source on the K side: K cap g^-1 H g, then conjugate by g
                        Subgroup cutk = conjugate_subgroup(cut, g.inv(e));
                        int cutki = m.G->subgroup_index(cutk);
                        int cpos = li.pos_of(cuti);
                        each_gen(h, [&](const std::vector<int>& gh) {
                            int row = li.offset[ph];
                            for (size_t f = 0; f < nf; ++f) row += gh[f] * li.strides[ph][f];
                            std::vector<IVec> left(nf);
                            for (size_t f = 0; f < nf; ++f)
                                left[f] = imat_apply(factors[f].res(h, cuti),
                                                     unit_vec(factors[f].level[h].ngens(), gh[f]));
                            each_gen(k, [&](const std::vector<int>& gk) {
                                int col = li.offset[pk];
                                for (size_t f = 0; f < nf; ++f) col += gk[f] * li.strides[pk][f];
                                std::vector<IVec> parts(nf);
                                for (size_t f = 0; f < nf; ++f) {
                                    IVec rk = imat_apply(factors[f].res(k, cutki),
                                                         unit_vec(factors[f].level[k].ngens(), gk[f]));
                                    IVec moved = imat_apply(factors[f].cmat(e, cutki), rk);
                                    parts[f] = green_mul(factors[f], cuti, left[f], moved);
                                }
                                tensor_accumulate(m.mult[l][row][col], li.offset[cpos],
                                                  li.strides[cpos], parts, 0, 0, 1);
                            });
                        });
                    }
                }
            }
        });
    }

    // grading metadata
    if (graded) {
        for (int l = 0; l < ns; ++l) {
            const auto& li = b.info[l];
            std::vector<int> degs(li.ngens, 0);
            for (size_t pos = 0; pos < li.summands.size(); ++pos) {
                int h = li.summands[pos];
                if (summand_size(h) == 0) continue;
                each_gen(h, [&](const std::vector<int>& gi) {
                    int idx = li.offset[pos];
                    int d = 0;
                    for (size_t f = 0; f < nf; ++f) {
                        idx += gi[f] * li.strides[pos][f];
                        d += factors[f].gen_degree[h][gi[f]];
                    }
                    degs[idx] = d;
                });
            }
            m.gen_degree.push_back(degs);
        }
    }
    return b;
}

IVec dress_pair(const BoxProduct& b, int levelidx, const std::vector<IVec>& elements) {
    if (elements.size() != b.factors.size()) throw LevelMismatch("dress_pair: one element per factor");
    for (size_t f = 0; f < elements.size(); ++f)
        if ((int)elements[f].size() != b.factors[f].level[levelidx].ngens())
            throw LevelMismatch("dress_pair: element has wrong level dimension");
    const auto& li = b.info[levelidx];
    IVec out(li.ngens, 0);
    int pos = li.pos_of(levelidx);
    tensor_accumulate(out, li.offset[pos], li.strides[pos], elements, 0, 0, 1);
    return out;
}

CompareFreeReport compare_free(const GroupPtr& gp, const GSet& x, const GSet& y, const Subgroup& l,
                               int max_n, MulCache* cache) {
    const FiniteGroup& g = *gp;
    CompareFreeReport rep;
    MulCache local;
    if (!cache) cache = &local;
    FreeTruncation fx = free_truncation(gp, x, max_n, cache);
    FreeTruncation fy = free_truncation(gp, y, max_n, cache);
    GSet xy = gset_disjoint(x, y);
    FreeTruncation fxy = free_truncation(gp, xy, max_n, cache);
    BoxProduct bp = box(gp, {fx.data, fy.data});
    int xoffset = realize(x).act.npts;

    auto fail = [&](const std::string& s) {
        if (rep.pass) {
            rep.pass = false;
            rep.detail = s;
        }
    };

    // the canonical inclusions iota_X, iota_Y on keys
    auto iota = [&](const IrrKey& k, bool second) {
        IrrKey k2 = k;
        if (second)
            for (auto& [h, xp] : k2.pairs) xp += xoffset;
        return k2;
    };

    int ltop = g.subgroup_index(l);
    for (int lev = 0; lev < (int)g.subgroups().size(); ++lev) {
        if (!l.contains(g.subgroups()[lev])) continue;
        const auto& li = bp.info[lev];
        // Phi on generators with degree <= max_n
        int nA = (int)fxy.basis[lev].size();
        std::vector<IVec> phicol(li.ngens, IVec(nA, 0)); // per box gen, side-A coords
        std::vector<int> gdeg = bp.data.gen_degree.empty() ? std::vector<int>(li.ngens, 0)
                                                           : bp.data.gen_degree[lev];
        for (size_t pos = 0; pos < li.summands.size(); ++pos) {
            int h = li.summands[pos];
            for (int i = 0; i < (int)fx.basis[h].size(); ++i)
                for (int j = 0; j < (int)fy.basis[h].size(); ++j) {
                    int col = li.offset[pos] + i * li.strides[pos][0] + j * li.strides[pos][1];
                    if (gdeg[col] > max_n) continue;
                    // Tr_H^L ( iota_X(b_i) * iota_Y(b_j) ) computed in A[X+Y]
                    IrrKey ki = iota(fx.basis[h][i], false);
                    IrrKey kj = iota(fy.basis[h][j], true);
                    IrrKey ki2 = canon_key(*fxy.ctx[h]->sig, Subgroup{&g, ki.K}, ki.y,
                                           [&] {
                                               std::vector<std::pair<Subgroup, int>> ps;
                                               for (auto& [hh, xp] : ki.pairs)
                                                   ps.push_back({Subgroup{&g, hh}, xp});
                                               return ps;
                                           }());
                    IrrKey kj2 = canon_key(*fxy.ctx[h]->sig, Subgroup{&g, kj.K}, kj.y,
                                           [&] {
                                               std::vector<std::pair<Subgroup, int>> ps;
                                               for (auto& [hh, xp] : kj.pairs)
                                                   ps.push_back({Subgroup{&g, hh}, xp});
                                               return ps;
                                           }());
                    FormalSum prod = mul_irr(fxy.ctx[h]->sig, ki2, kj2, cache);
                    LevelElement moved = tr(*fxy.ctx[h], *fxy.ctx[lev], prod);
                    IVec coords = coords_of(fxy, lev, moved);
                    for (int t = 0; t < nA; ++t) phicol[col][t] = coords[t];
                }
        }
        // relations must map to zero exactly (side A free)
        for (const auto& r : bp.data.level[lev].relations()) {
            // relations are homogeneous; skip those touching degree > max_n
            bool high = false;
            for (size_t i = 0; i < r.size(); ++i)
                if (r[i] != 0 && gdeg[i] > max_n) high = true;
            if (high) continue;
            IVec img(nA, 0);
            for (size_t i = 0; i < r.size(); ++i)
                if (r[i] != 0)
                    for (int t = 0; t < nA; ++t) img[t] += (long long)r[i].get_si() * phicol[i][t];
            for (int t = 0; t < nA; ++t)
                if (img[t] != 0) fail("compare_free: relation not killed at level " + std::to_string(lev));
        }
        // per-stratum isomorphism
        for (int d = 0; d <= max_n; ++d) {
            std::vector<int> boxgens;
            for (int i = 0; i < li.ngens; ++i)
                if (gdeg[i] == d) boxgens.push_back(i);
            std::vector<int> arows;
            for (int t = 0; t < nA; ++t)
                if (irr_degree(fxy.basis[lev][t]) == d) arows.push_back(t);
            // box stratum module: gens of degree d with the relations among them
            ZMat strat_rels;
            for (const auto& r : bp.data.level[lev].relations()) {
                bool mine = false, foreign = false;
                for (size_t i = 0; i < r.size(); ++i)
                    if (r[i] != 0) {
                        if (gdeg[i] == d) mine = true;
                        else foreign = true;
                    }
                if (!mine) continue;
                if (foreign) {
                    fail("compare_free: inhomogeneous relation");
                    continue;
                }
                ZVec row(boxgens.size());
                for (size_t i = 0; i < boxgens.size(); ++i) row[i] = r[boxgens[i]];
                strat_rels.push_back(row);
            }
            PresentedZModule stratum((int)boxgens.size(), strat_rels);
            CompareFreeReport::Stratum st;
            st.levelidx = lev;
            st.degree = d;
            st.rank_free = (int)arows.size();
            st.rank_box = stratum.min_generators();
            st.iso = stratum.free_rank() == (int)arows.size() && stratum.torsion().empty();
            if (st.iso && !boxgens.empty()) {
                // Phi restricted to the stratum must be onto the free side
                ZMat phi(arows.size(), ZVec(boxgens.size()));
                for (size_t i = 0; i < arows.size(); ++i)
                    for (size_t j = 0; j < boxgens.size(); ++j)
                        phi[i][j] = (long)phicol[boxgens[j]][arows[i]];
                auto s = smith_normal_form(phi);
                int ones = 0;
                int lim = (int)std::min(phi.size(), boxgens.size());
                for (int i = 0; i < lim; ++i)
                    if (s.D[i][i] == 1 || s.D[i][i] == -1) ++ones;
                if (ones != (int)arows.size()) st.iso = false;
            } else if (st.iso && boxgens.empty() && !arows.empty()) {
                st.iso = false;
            }
            if (!st.iso)
                fail("compare_free: stratum (level " + std::to_string(lev) + ", degree " +
                     std::to_string(d) + ") not an isomorphism");
            rep.strata.push_back(st);
        }
        // Dress pairing conditions on this level against the smaller levels
        for (int lev2 = 0; lev2 < (int)g.subgroups().size(); ++lev2) {
            if (lev2 == lev || !g.subgroups()[lev].contains(g.subgroups()[lev2])) continue;
            int nx = fx.data.level[lev].ngens(), ny = fy.data.level[lev].ngens();
            for (int i = 0; i < nx; ++i)
                for (int j = 0; j < ny; ++j) {
                    IVec ei = unit_vec(nx, i), ej = unit_vec(ny, j);
                    // f_H (Res x Res) = Res f_K
                    IVec lhs = dress_pair(bp, lev2, {imat_apply(fx.data.res(lev, lev2), ei),
                                                     imat_apply(fy.data.res(lev, lev2), ej)});
                    IVec rhs = imat_apply(bp.data.res(lev, lev2), dress_pair(bp, lev, {ei, ej}));
                    if (!bp.data.level[lev2].equal(
                            [&] { ZVec z(lhs.size()); for (size_t t = 0; t < lhs.size(); ++t) z[t] = (long)lhs[t]; return z; }(),
                            [&] { ZVec z(rhs.size()); for (size_t t = 0; t < rhs.size(); ++t) z[t] = (long)rhs[t]; return z; }()))
                        fail("dress: f_H(Res,Res) != Res f_K");
                    rep.dress_checks++;
                }
            // Tr f_H (Res x id) = f_K (id x Tr)
            int nx2 = fx.data.level[lev2].ngens(), ny2 = fy.data.level[lev2].ngens();
            for (int i = 0; i < nx; ++i)
                for (int j = 0; j < ny2; ++j) {
                    IVec ei = unit_vec(nx, i), ej = unit_vec(ny2, j);
                    IVec lhs = imat_apply(bp.data.tr(lev, lev2),
                                          dress_pair(bp, lev2,
                                                     {imat_apply(fx.data.res(lev, lev2), ei), ej}));
                    IVec rhs = dress_pair(bp, lev, {ei, imat_apply(fy.data.tr(lev, lev2), ej)});
                    if (!bp.data.level[lev].equal(
                            [&] { ZVec z(lhs.size()); for (size_t t = 0; t < lhs.size(); ++t) z[t] = (long)lhs[t]; return z; }(),
                            [&] { ZVec z(rhs.size()); for (size_t t = 0; t < rhs.size(); ++t) z[t] = (long)rhs[t]; return z; }()))
                        fail("dress: Tr f_H (Res,id) != f_K (id,Tr)");
                    rep.dress_checks++;
                }
        }
        if (lev == ltop) break;
    }
    return rep;
}

} // namespace tamb
