// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.

#include <cstdio>
#include <functional>
#include <random>
#include <set>

#include "tamb/genset.hpp"
#include "tamb/jsonio.hpp"
#include "tamb/parallel.hpp"

using namespace tamb;

namespace {

int failures = 0;

void line(int idx, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s%s%s\n", pass ? "PASS" : "FAIL", idx, name,
                detail.empty() ? "" : " — ", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double now() { return par::wall_time(); }

long long stars_and_bars_exact(long long vars, int deg) {
    // monomials of degree exactly `deg` in `vars` variables
    std::function<long long(long long, int)> rec = [&](long long v, int d) -> long long {
        if (v == 0) return d == 0 ? 1 : 0;
        long long tot = 0;
        for (int k = 0; k <= d; ++k) tot += rec(v - 1, d - k);
        return tot;
    };
    return rec(vars, deg);
}

std::vector<GroupPtr> preset_groups() {
    std::vector<GroupPtr> out;
    for (const char* n : {"C2", "C3", "C4", "C2xC2", "S3", "D8", "Q8"}) out.push_back(group_from_name(n));
    return out;
}

// criterion 1: degree-0 part of A[X](G/L) is the Burnside level, as a ring
bool burnside_recovery(std::string& detail) {
    for (const auto& g : preset_groups()) {
        MackeyData bm = burnside(g);
        std::vector<GSet> samples{gset_empty(*g), gset_orbit(g->trivial_subgroup()),
                                  gset_orbit(g->subgroups()[1])};
        for (const auto& x : samples) {
            for (const auto& l : g->subgroups()) {
                auto ctx = make_level(g, x, l);
                auto basis0 = level_basis(*ctx, 0);
                int lidx = bm.sub_index(l);
                if ((int)basis0.size() != bm.level[lidx].ngens()) {
                    detail = "rank mismatch at " + g->name;
                    return false;
                }
                // the correspondence: key (K, y) -> [L / (L cap w^-1 K w)]
                // where w represents the coset y
                auto h_class_rep = [&](const Subgroup& s) {
                    Subgroup best = s;
                    for (int e : l.elems) {
                        Subgroup c = conjugate_subgroup(s, e);
                        if (c < best) best = c;
                    }
                    return best;
                };
                std::vector<Subgroup> bbasis; // burnside basis in canonical order
                {
                    std::set<std::vector<int>> seen;
                    for (const auto& s : subgroups_of(l)) {
                        Subgroup r = h_class_rep(s);
                        if (seen.insert(r.elems).second) bbasis.push_back(r);
                    }
                    std::sort(bbasis.begin(), bbasis.end());
                }
                std::map<IrrKey, int> to_burnside;
                for (const auto& k : basis0) {
                    int w = ctx->sig->rY.point_label[k.y].second;
                    Subgroup kk{g.get(), k.K};
                    Subgroup fib = h_class_rep(intersect(l, conjugate_subgroup(kk, g->inv(w))));
                    int pos = -1;
                    for (size_t i = 0; i < bbasis.size(); ++i)
                        if (bbasis[i] == fib) pos = (int)i;
                    if (pos < 0) {
                        detail = "fiber class not found";
                        return false;
                    }
                    to_burnside[k] = pos;
                }
                std::set<int> hit;
                for (auto& [k, i] : to_burnside) hit.insert(i);
                if (hit.size() != basis0.size()) {
                    detail = "correspondence not a bijection at " + g->name;
                    return false;
                }
                // ring structure matches
                MulCache cache;
                for (const auto& a : basis0)
                    for (const auto& b : basis0) {
                        FormalSum prod = mul_irr(ctx->sig, a, b, &cache);
                        IVec got(bbasis.size(), 0);
                        for (const auto& [k, cf] : prod.terms) got[to_burnside.at(k)] += cf;
                        IVec ea(bbasis.size(), 0), eb(bbasis.size(), 0);
                        ea[to_burnside.at(a)] = 1;
                        eb[to_burnside.at(b)] = 1;
                        IVec want = green_mul(bm, lidx, ea, eb);
                        if (got != want) {
                            detail = "ring structure mismatch at " + g->name;
                            return false;
                        }
                    }
            }
        }
    }
    return true;
}

// criterion 2: Brun's theorem at the bottom level
bool brun_check(std::string& detail) {
    struct Case { const char* g; int size; };
    for (const char* gname : {"C2", "C3", "S3"}) {
        auto g = group_from_name(gname);
        for (int want = 1; want <= 3; ++want) {
            // assemble an X with |X| = want out of available orbits
            GSet x = gset_empty(*g);
            int size = 0;
            for (int i = (int)g->subgroups().size() - 1; i >= 0 && size < want; --i) {
                const Subgroup& s = g->subgroups()[i];
                while (size + g->order / s.order() <= want) {
                    x.stabs.push_back(s);
                    size += g->order / s.order();
                }
            }
            if (size != want) continue;
            auto ctx = make_level(g, x, g->trivial_subgroup());
            auto basis = level_basis(*ctx, 4);
            std::map<int, long long> per_degree;
            for (const auto& k : basis) per_degree[irr_degree(k)]++;
            for (int d = 0; d <= 4; ++d) {
                if (per_degree[d] != stars_and_bars_exact(want, d)) {
                    detail = std::string(gname) + ", |X|=" + std::to_string(want) +
                             ": count mismatch at degree " + std::to_string(d);
                    return false;
                }
            }
            // freeness: products of basis classes are single classes, degrees add
            MulCache cache;
            std::mt19937 rng(101);
            for (int t = 0; t < 40; ++t) {
                const IrrKey& a = basis[rng() % basis.size()];
                const IrrKey& b = basis[rng() % basis.size()];
                if (irr_degree(a) + irr_degree(b) > 4) continue;
                FormalSum prod = mul_irr(ctx->sig, a, b, &cache);
                if (prod.terms.size() != 1 || prod.terms.begin()->second != 1 ||
                    irr_degree(prod.terms.begin()->first) != irr_degree(a) + irr_degree(b)) {
                    detail = "monoid is not free at " + std::string(gname);
                    return false;
                }
            }
        }
    }
    return true;
}

// criterion 3: the C_p example rings
bool cp_rings(std::string& detail) {
    for (int p : {2, 3, 5}) {
        auto g = group_from_name("C" + std::to_string(p));
        auto top = make_level(g, gset_point(*g), g->full_subgroup());
        IrrKey t = canon_key(*top->sig, g->trivial_subgroup(), 0, {});
        FormalSum sq = mul_irr(top->sig, t, t);
        FormalSum expect;
        expect.sig = top->sig;
        expect.addmul(t, p);
        if (!(sq == expect)) {
            detail = "t^2 != p t at p=" + std::to_string(p);
            return false;
        }
        // A^0[C_p/C_p](C_p/e) = Z[x], one basis class per degree, x as displayed
        auto bot = make_level(g, gset_point(*g), g->trivial_subgroup());
        auto basis = level_basis(*bot, 4);
        std::map<int, std::vector<IrrKey>> per_degree;
        for (const auto& k : basis)
            if ((int)k.K.size() == 1) per_degree[irr_degree(k)].push_back(k); // middle G/e
        IrrKey x = canon_key(*bot->sig, g->trivial_subgroup(), 0, {{g->trivial_subgroup(), 0}});
        if (per_degree[1].size() != 1 || !(per_degree[1][0] == x)) {
            detail = "generator x missing at p=" + std::to_string(p);
            return false;
        }
        MulCache cache;
        for (int d = 0; d <= 4; ++d)
            if (per_degree[d].size() != 1) {
                detail = "A^0 bottom level not Z[x] at p=" + std::to_string(p);
                return false;
            }
        FormalSum xs = mul_irr(bot->sig, x, x, &cache);
        if (xs.terms.size() != 1 || !(xs.terms.begin()->first == per_degree[2][0])) {
            detail = "x*x != x^2 at p=" + std::to_string(p);
            return false;
        }
        // the displayed top-level generator xbar = [pt <- pt -> pt -> pt] exists,
        // has degree (1, C_p), and generates a free polynomial subring
        auto tbasis = level_basis(*top, 3);
        IrrKey xbar = canon_key(*top->sig, g->full_subgroup(), 0, {{g->full_subgroup(), 0}});
        if (std::find(tbasis.begin(), tbasis.end(), xbar) == tbasis.end() ||
            degree_of(*top, xbar).n != 1 || degree_of(*top, xbar).K->order() != p) {
            detail = "displayed A^0 generator missing at p=" + std::to_string(p);
            return false;
        }
        FormalSum power;
        power.sig = top->sig;
        power.addmul(xbar, 1);
        std::set<IrrKey> powers{xbar};
        for (int k = 2; k <= 3; ++k) {
            FormalSum xb;
            xb.sig = top->sig;
            xb.addmul(xbar, 1);
            power = mul(power, xb, &cache);
            if (power.terms.size() != 1 || power.terms.begin()->second != 1 ||
                !powers.insert(power.terms.begin()->first).second) {
                detail = "powers of xbar not free at p=" + std::to_string(p);
                return false;
            }
        }
    }
    return true;
}

// criterion 4: multiply_tuples versus bispan multiplication
bool tuple_oracle(std::string& detail) {
    for (const char* name : {"C4", "C2xC2", "Q8"}) {
        auto g = group_from_name(name);
        const auto& subs = g->subgroups();
        std::mt19937 rng(271);
        int done = 0;
        long long attempts = 0;
        while (done < 300 && ++attempts < 50000) {
            Subgroup l = subs[rng() % subs.size()];
            Subgroup h = subs[rng() % subs.size()];
            if (!l.contains(h)) continue;
            auto mids = subgroups_of(l);
            Subgroup k = mids[rng() % mids.size()];
            Subgroup kp = mids[rng() % mids.size()];
            if (!k.contains(h) || !kp.contains(k)) continue;
            auto ctx = make_level(g, gset_orbit(h), l);
            auto mk = [&](const Subgroup& mid) {
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
            DedekindTuple a = mk(k), b = mk(kp);
            auto prod = multiply_tuples(*ctx, a, b);
            FormalSum via_tuples;
            via_tuples.sig = ctx->sig;
            for (const auto& [tp, cf] : prod) via_tuples.addmul(from_tuple(*ctx, tp), cf);
            FormalSum via_bispan = mul_irr(ctx->sig, from_tuple(*ctx, a), from_tuple(*ctx, b));
            if (!(via_tuples == via_bispan)) {
                detail = std::string("disagreement over ") + name;
                return false;
            }
            ++done;
        }
        if (done < 300) {
            detail = std::string("could not draw 300 chain instances over ") + name;
            return false;
        }
    }
    return true;
}

// criterion 5: the axiom suite over every constructed functor
bool axiom_suite(std::string& detail) {
    for (const auto& g : preset_groups()) {
        auto rep = check_axioms(burnside(g));
        if (!rep.pass) {
            detail = "burnside(" + g->name + "): " + rep.failure;
            return false;
        }
    }
    for (const auto& g : preset_groups()) {
        if (g->order > 8) continue;
        GSet x = gset_orbit(g->subgroups()[1]);
        FreeTruncation ft = free_truncation(g, x, 3);
        auto rep = check_axioms(ft.data);
        if (!rep.pass) {
            detail = "free truncation over " + g->name + ": " + rep.failure;
            return false;
        }
    }
    // box outputs (the criterion 6/7 constructions)
    {
        auto c2 = group_from_name("C2");
        MulCache cache;
        FreeTruncation f1 = free_truncation(c2, gset_orbit(c2->trivial_subgroup()), 2, &cache);
        BoxProduct bp = box(c2, {f1.data, f1.data});
        auto rep = check_axioms(bp.data);
        if (!rep.pass) {
            detail = "box of free truncations over C2: " + rep.failure;
            return false;
        }
        MackeyData gc = green_counterexample(c2, 2, 3);
        auto rep2 = check_axioms(box(c2, {gc, gc}).data);
        if (!rep2.pass) {
            detail = "green counterexample box: " + rep2.failure;
            return false;
        }
    }
    {
        auto c4 = group_from_name("C4");
        MackeyData a = burnside(c4);
        auto rep = check_axioms(box(c4, {a, a}).data);
        if (!rep.pass) {
            detail = "burnside box over C4: " + rep.failure;
            return false;
        }
    }
    return true;
}

// criterion 6: box coherence through compare_free
bool box_coherence(std::string& detail) {
    {
        auto g = group_from_name("C2");
        auto rep = compare_free(g, gset_orbit(g->trivial_subgroup()), gset_orbit(g->trivial_subgroup()),
                                g->full_subgroup(), 3);
        if (!rep.pass) {
            detail = "C2 case: " + rep.detail;
            return false;
        }
    }
    {
        auto g = group_from_name("C4");
        Subgroup c2 = subgroup_closure(*g, {2});
        auto rep = compare_free(g, gset_orbit(c2), gset_orbit(g->trivial_subgroup()),
                                g->full_subgroup(), 2);
        if (!rep.pass) {
            detail = "C4 case: " + rep.detail;
            return false;
        }
    }
    {
        auto g = group_from_name("S3");
        Subgroup t = subgroup_closure(*g, {1});
        Subgroup c3 = subgroup_closure(*g, {3});
        auto rep = compare_free(g, gset_orbit(t), gset_orbit(c3), g->full_subgroup(), 2);
        if (!rep.pass) {
            detail = "S3 case: " + rep.detail;
            return false;
        }
    }
    return true;
}

// criterion 7: the Green counterexample reproduction
bool green_reproduction(std::string& detail) {
    for (int p : {2, 3}) {
        auto g = group_from_name("C" + std::to_string(p));
        int top = -1;
        std::vector<int> gens_by_d;
        for (int d = 2; d <= 4; ++d) {
            MackeyData r = green_counterexample(g, p, d);
            BoxProduct bp = box(g, {r, r});
            top = bp.data.sub_index(g->full_subgroup());
            if (d == 4) {
                // all transfer-class products vanish
                int bot = bp.data.sub_index(g->trivial_subgroup());
                const auto& li = bp.info[top];
                int pos_e = li.pos_of(bot);
                int ne = (d + 1) * (d + 1);
                for (int i = 0; i < ne; ++i)
                    for (int j = 0; j < ne; ++j) {
                        IVec ei(li.ngens, 0), ej(li.ngens, 0);
                        ei[li.offset[pos_e] + i] = 1;
                        ej[li.offset[pos_e] + j] = 1;
                        IVec prod = green_mul(bp.data, top, ei, ej);
                        ZVec z(prod.size());
                        for (size_t t2 = 0; t2 < prod.size(); ++t2) z[t2] = (long)prod[t2];
                        if (!bp.data.level[top].contains(z)) {
                            detail = "transfer product nonzero at p=" + std::to_string(p);
                            return false;
                        }
                    }
            }
            gens_by_d.push_back(bp.data.level[top].min_generators());
        }
        for (size_t i = 1; i < gens_by_d.size(); ++i)
            if (gens_by_d[i] <= gens_by_d[i - 1]) {
                detail = "generator counts not strictly increasing at p=" + std::to_string(p);
                return false;
            }
    }
    return true;
}

// criterion 8: double-coset factorization bijections
bool coset_factorizations(std::string& detail) {
    for (const char* name : {"S3", "D8", "Q8"}) {
        auto g = group_from_name(name);
        const auto& subs = g->subgroups();
        for (const auto& l : subs)
            for (const auto& k : subs) {
                if (!l.contains(k)) continue;
                for (const auto& h : subs) {
                    if (!k.contains(h)) continue;
                    for (const auto& m : subs) {
                        if (!l.contains(m)) continue;
                        if (!coset_factorization(h, k, l, m).bijective) {
                            detail = std::string("chain failure in ") + name;
                            return false;
                        }
                    }
                }
            }
    }
    return true;
}

// criterion 9: generation certificates at maxdeg 6
bool generation_certificates(std::string& detail) {
    struct Case { const char* g; const char* h; };
    std::vector<Case> cases{{"C2", "e"}, {"C4", "e"}, {"C4", "[2]"}, {"C2xC2", "e"}, {"S3", "e"},
                            {"D8", "e"}, {"D8", "[4]"}};
    for (const auto& cs : cases) {
        auto g = group_from_name(cs.g);
        Subgroup h = subgroup_from_spec(g, cs.h);
        auto rep = certify_generation(g, gset_orbit(h), 6);
        if (!rep.pass || rep.certified != rep.targets) {
            detail = std::string(cs.g) + "/" + cs.h + ": " + rep.detail;
            return false;
        }
        std::printf("        %s at X=G/%s: %d targets, %d rewritten, depth %d, escalations %d\n",
                    cs.g, cs.h, rep.targets, rep.targets - rep.leaves, rep.max_depth,
                    rep.escalations);
        std::fflush(stdout);
    }
    {
        auto q8 = group_from_name("Q8");
        for (const auto& h : q8->subgroups()) {
            auto rep = certify_generation(q8, gset_orbit(h), 6);
            if (!rep.pass) {
                detail = "Q8 ambient order " + std::to_string(h.order()) + ": " + rep.detail;
                return false;
            }
            std::printf("        Q8 at X=G/|H|=%d: %d targets, %d rewritten\n", h.order(),
                        rep.targets, rep.targets - rep.leaves);
            std::fflush(stdout);
        }
    }
    return true;
}

// criterion 10: grading laws on >= 1000 random instances
bool grading_laws(std::string& detail) {
    std::mt19937 rng(733);
    long long instances = 0;
    for (const auto& g : preset_groups()) {
        Subgroup h = g->subgroups()[1];
        GSet x = gset_orbit(h);
        bool ded = classify(*g).kind == GroupKind::dedekind;
        auto top = make_level(g, x, g->full_subgroup());
        auto bt = level_basis(*top, 3);
        MulCache cache;
        // deg(ab) = deg(a) + deg(b)
        for (int t = 0; t < 60; ++t) {
            const IrrKey& a = bt[rng() % bt.size()];
            const IrrKey& b = bt[rng() % bt.size()];
            WeightedDegree expect = deg_add(degree_of(*top, a), degree_of(*top, b));
            for (const auto& [k, c] : mul_irr(top->sig, a, b, &cache).terms) {
                if (!(degree_of(*top, k) == expect)) {
                    detail = "deg(ab) != deg(a)+deg(b) over " + g->name;
                    return false;
                }
                ++instances;
            }
        }
        // phi/psi gradedness of Tr and Res, Weyl degree preservation
        for (const auto& l : g->subgroups()) {
            if (l.order() == g->order) continue;
            auto low = make_level(g, x, l);
            auto bl = level_basis(*low, 3);
            for (int t = 0; t < 15; ++t) {
                const IrrKey& a = bl[rng() % bl.size()];
                LevelElement e;
                e.sig = low->sig;
                e.addmul(a, 1);
                WeightedDegree d = degree_of(*low, a);
                for (const auto& [k, c] : tr(*low, *top, e).terms) {
                    if (!(degree_of(*top, k).n == d.n) ||
                        (ded && !(*degree_of(*top, k).K == *d.K))) {
                        detail = "Tr not graded over " + g->name;
                        return false;
                    }
                    ++instances;
                }
                const IrrKey& b = bt[rng() % bt.size()];
                LevelElement eb;
                eb.sig = top->sig;
                eb.addmul(b, 1);
                WeightedDegree db = degree_of(*top, b);
                for (const auto& [k, c] : res(*top, *low, eb).terms) {
                    bool ok = degree_of(*low, k).n == db.n;
                    if (ded) ok = ok && *degree_of(*low, k).K == intersect(*db.K, l);
                    if (!ok) {
                        detail = "Res not graded over " + g->name;
                        return false;
                    }
                    ++instances;
                }
            }
            // Weyl action on the level
            for (int w : weyl_cosets(l)) {
                if (normalizer(l).order() == l.order()) break;
                for (int t = 0; t < 5; ++t) {
                    const IrrKey& a = bl[rng() % bl.size()];
                    LevelElement e;
                    e.sig = low->sig;
                    e.addmul(a, 1);
                    for (const auto& [k, c] : cg(*low, *low, e, w).terms) {
                        if (irr_degree(k) != irr_degree(a)) {
                            detail = "Weyl action changed a degree over " + g->name;
                            return false;
                        }
                        ++instances;
                    }
                }
            }
        }
        // N_f^* scales numerical degree by deg(f)
        {
            GMap pr{gset_orbit(g->trivial_subgroup()), x, {{0, 0}}};
            auto dfo = degree(pr);
            BispanClass nf = n_of(pr);
            auto ctxk = make_level(g, x, g->full_subgroup());
            auto bk = level_basis(*ctxk, 2);
            for (int t = 0; t < 12; ++t) {
                const IrrKey& a = bk[rng() % bk.size()];
                BispanClass cls = class_of_key(ctxk->sig, a);
                BispanClass pulled = compose(cls, nf);
                for (const auto& k : pulled.comps) {
                    if (irr_degree(k) != *dfo * irr_degree(a)) {
                        detail = "N_f^* degree scaling failed over " + g->name;
                        return false;
                    }
                    ++instances;
                }
            }
        }
    }
    if (instances < 1000) {
        detail = "only " + std::to_string(instances) + " instances";
        return false;
    }
    return true;
}

// criterion 11: the norm identity censuses
bool norm_identity(std::string& detail) {
    {
        auto c4 = group_from_name("C4");
        Subgroup c2 = subgroup_closure(*c4, {2});
        auto hg = as_group(c2);
        auto r1 = norm_free_check(c4, c2, hg, gset_point(*hg.group), c4->full_subgroup(), 2);
        if (!r1.pass) {
            detail = "(C2<=C4, H/H): " + r1.narrative;
            return false;
        }
        auto r2 = norm_free_check(c4, c2, hg, gset_orbit(hg.group->trivial_subgroup()),
                                  c4->full_subgroup(), 2);
        if (!r2.pass) {
            detail = "(C2<=C4, H/e): " + r2.narrative;
            return false;
        }
    }
    {
        auto s3 = group_from_name("S3");
        Subgroup e = s3->trivial_subgroup();
        auto hg = as_group(e);
        auto r = norm_free_check(s3, e, hg, gset_point(*hg.group), s3->full_subgroup(), 2);
        if (!r.pass) {
            detail = "(e<=S3, point): " + r.narrative;
            return false;
        }
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    par::set_jobs(argc > 1 ? std::atoi(argv[1]) : 2);
    std::string d;
    double t0;
    auto run = [&](int idx, const char* name, const std::function<bool(std::string&)>& f) {
        d.clear();
        t0 = now();
        bool pass = false;
        try {
            pass = f(d);
        } catch (const std::exception& e) {
            d = e.what();
        }
        char timing[64];
        std::snprintf(timing, sizeof timing, "%s(%.1fs)", d.empty() ? "" : " ", now() - t0);
        line(idx, name, pass, d + timing);
    };
    run(1, "Burnside recovery: degree-0 part is the Burnside level (ring check)", burnside_recovery);
    run(2, "Brun: bottom level free polynomial on |X| generators", brun_check);
    run(3, "C_p example rings: t^2 = p t and the A^0 generators", cp_rings);
    run(4, "tuple calculus agrees with bispan multiplication (300+ chains x 3 groups)", tuple_oracle);
    run(5, "Mackey axiom suite over every constructed functor", axiom_suite);
    run(6, "box coherence: A[X+Y] vs box(A[X],A[Y]) per degree stratum", box_coherence);
    run(7, "Green counterexample box square reproduction", green_reproduction);
    run(8, "double-coset factorization bijection, exhaustive chains", coset_factorizations);
    run(9, "generation certificates at maxdeg 6, independently re-expanded", generation_certificates);
    run(10, "grading laws on 1000+ random instances", grading_laws);
    run(11, "free-functor norm identity censuses", norm_identity);
    std::printf("%s\n", failures == 0 ? "ALL CRITERIA PASS" : "FAILURES PRESENT");
    return failures == 0 ? 0 : 1;
}
