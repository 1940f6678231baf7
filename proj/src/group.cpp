#include "tamb/group.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace tamb {

bool Subgroup::contains(int x) const {
    return std::binary_search(elems.begin(), elems.end(), x);
}

bool Subgroup::contains(const Subgroup& other) const {
    return std::includes(elems.begin(), elems.end(), other.elems.begin(), other.elems.end());
}

int FiniteGroup::pow(int a, int n) const {
    int r = 0;
    while (n-- > 0) r = mul(r, a);
    return r;
}

int FiniteGroup::subgroup_index(const Subgroup& h) const {
    auto it = std::lower_bound(subgroups_.begin(), subgroups_.end(), h);
    if (it == subgroups_.end() || !(*it == h)) throw Error("subgroup_index: not a lattice member");
    return (int)(it - subgroups_.begin());
}

Subgroup subgroup_from_elements(const FiniteGroup& g, std::vector<int> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    Subgroup h{&g, elems};
    if (elems.empty() || elems[0] != 0) throw Error("subgroup must contain identity");
    for (int a : elems) {
        if (a < 0 || a >= g.order) throw Error("subgroup element out of range");
        if (!h.contains(g.inv(a))) throw Error("subgroup not closed under inverse");
        for (int b : elems)
            if (!h.contains(g.mul(a, b))) throw Error("subgroup not closed under multiplication");
    }
    return h;
}

Subgroup subgroup_closure(const FiniteGroup& g, const std::vector<int>& gens) {
    std::set<int> s{0};
    std::vector<int> frontier{0};
    for (int x : gens)
        if (!s.count(x)) { s.insert(x); frontier.push_back(x); }
    while (!frontier.empty()) {
        int a = frontier.back();
        frontier.pop_back();
        std::vector<int> cur(s.begin(), s.end());
        for (int b : cur) {
            for (int c : {g.mul(a, b), g.mul(b, a), g.inv(a)}) {
                if (!s.count(c)) { s.insert(c); frontier.push_back(c); }
            }
        }
    }
    return Subgroup{&g, std::vector<int>(s.begin(), s.end())};
}

static void compute_lattice(FiniteGroup& g, std::vector<Subgroup>& out) {
    std::set<std::vector<int>> seen;
    std::vector<Subgroup> work;
    Subgroup triv{&g, {0}};
    seen.insert(triv.elems);
    work.push_back(triv);
    // close the collection under one-generator extensions
    for (size_t i = 0; i < work.size(); ++i) {
        Subgroup cur = work[i];
        for (int x = 1; x < g.order; ++x) {
            if (cur.contains(x)) continue;
            std::vector<int> gens = cur.elems;
            gens.push_back(x);
            Subgroup bigger = subgroup_closure(g, gens);
            if (!seen.count(bigger.elems)) {
                seen.insert(bigger.elems);
                work.push_back(bigger);
            }
        }
    }
    out = work;
    std::sort(out.begin(), out.end());
}

GroupPtr build_group(std::vector<std::vector<int>> table, std::string name) {
    auto g = std::make_shared<FiniteGroup>();
    int n = (int)table.size();
    if (n <= 0) throw NotAGroup("empty table");
    g->order = n;
    g->name = std::move(name);
    g->mul_.assign((size_t)n * n, 0);
    for (int i = 0; i < n; ++i) {
        if ((int)table[i].size() != n) throw NotAGroup("table is not square");
        for (int j = 0; j < n; ++j) {
            int v = table[i][j];
            if (v < 0 || v >= n) throw NotAGroup("table entry out of range");
            g->mul_[(size_t)i * n + j] = v;
        }
    }
    for (int i = 0; i < n; ++i) {
        if (g->mul(0, i) != i || g->mul(i, 0) != i) {
            std::ostringstream os;
            os << "index 0 is not an identity at element " << i;
            throw NotAGroup(os.str());
        }
    }
    g->inv_.assign(n, -1);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j)
            if (g->mul(i, j) == 0 && g->mul(j, i) == 0) { g->inv_[i] = j; break; }
        if (g->inv_[i] < 0) {
            std::ostringstream os;
            os << "element " << i << " has no two-sided inverse";
            throw NotAGroup(os.str());
        }
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c)
                if (g->mul(g->mul(a, b), c) != g->mul(a, g->mul(b, c))) {
                    std::ostringstream os;
                    os << "associativity fails at (" << a << "," << b << "," << c << ")";
                    throw NotAGroup(os.str());
                }
    compute_lattice(*g, g->subgroups_);
    return g;
}

// ---- presets ----

static GroupPtr make_cyclic(int n) {
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t[i][j] = (i + j) % n;
    return build_group(t, "C" + std::to_string(n));
}

static GroupPtr make_product_cyclic(int m, int n) {
    int o = m * n;
    auto idx = [&](int a, int b) { return a * n + b; };
    std::vector<std::vector<int>> t(o, std::vector<int>(o));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < m; ++c)
                for (int d = 0; d < n; ++d)
                    t[idx(a, b)][idx(c, d)] = idx((a + c) % m, (b + d) % n);
    return build_group(t, "C" + std::to_string(m) + "xC" + std::to_string(n));
}

static GroupPtr make_s3() {
    // permutations of {0,1,2} sorted by one-line notation
    std::vector<std::array<int, 3>> perms;
    std::array<int, 3> p{0, 1, 2};
    do { perms.push_back(p); } while (std::next_permutation(p.begin(), p.end()));
    int n = 6;
    auto find = [&](const std::array<int, 3>& q) {
        for (int i = 0; i < n; ++i)
            if (perms[i] == q) return i;
        return -1;
    };
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::array<int, 3> q;
            for (int k = 0; k < 3; ++k) q[k] = perms[i][perms[j][k]]; // i after j
            t[i][j] = find(q);
        }
    return build_group(t, "S3");
}

// semidirect C_p x| C_q with phi(y) = (x -> x^t), t of order q mod p
static GroupPtr make_cpxcq(int p, int q, const std::string& name) {
    int t = -1;
    for (int cand = 2; cand < p; ++cand) {
        long long v = 1;
        int ord = 0;
        for (int e = 1; e <= q; ++e) {
            v = (v * cand) % p;
            if (v == 1) { ord = e; break; }
        }
        if (ord == q) { t = cand; break; }
    }
    if (t < 0) throw UsageError("no faithful action: q must divide p-1");
    int o = p * q;
    auto idx = [&](int a, int b) { return a + p * b; };
    // (a,b)*(c,d) = (a + t^b c mod p, b+d mod q)
    std::vector<int> tpow(q);
    tpow[0] = 1;
    for (int i = 1; i < q; ++i) tpow[i] = (int)((long long)tpow[i - 1] * t % p);
    std::vector<std::vector<int>> tab(o, std::vector<int>(o));
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < q; ++b)
            for (int c = 0; c < p; ++c)
                for (int d = 0; d < q; ++d)
                    tab[idx(a, b)][idx(c, d)] = idx((int)((a + (long long)tpow[b] * c) % p), (b + d) % q);
    return build_group(tab, name);
}

static GroupPtr make_d8() {
    // <a,x | a^4 = x^2 = e, ax = xa^-1>, element a^i x^j has index i + 4j
    int n = 8;
    auto idx = [&](int i, int j) { return i + 4 * j; };
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 2; ++l) {
                    int kk = (j == 0) ? k : (4 - k) % 4; // x a^k = a^-k x
                    t[idx(i, j)][idx(k, l)] = idx((i + kk) % 4, (j + l) % 2);
                }
    return build_group(t, "D8");
}

static GroupPtr make_q8() {
    // 0:1 1:-1 2:i 3:-i 4:j 5:-j 6:k 7:-k
    auto enc = [](int sign, int axis) { return 2 * axis + (sign < 0 ? 1 : 0); }; // axis 0=1,1=i,2=j,3=k
    auto mul1 = [&](int u, int v) {
        int su = (u % 2 == 0) ? 1 : -1, au = u / 2;
        int sv = (v % 2 == 0) ? 1 : -1, av = v / 2;
        static const int axis[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
        static const int sgn[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
        return enc(su * sv * sgn[au][av], axis[au][av]);
    };
    std::vector<std::vector<int>> t(8, std::vector<int>(8));
    for (int u = 0; u < 8; ++u)
        for (int v = 0; v < 8; ++v) t[u][v] = mul1(u, v);
    return build_group(t, "Q8");
}

GroupPtr group_from_name(const std::string& spec) {
    if (spec == "S3") return make_s3();
    if (spec == "D8") return make_d8();
    if (spec == "Q8") return make_q8();
    if (spec.rfind("D2p", 0) == 0) {
        int p = std::stoi(spec.substr(3));
        return make_cpxcq(p, 2, spec);
    }
    if (spec.rfind("CpxCq", 0) == 0) {
        auto rest = spec.substr(5);
        auto comma = rest.find(',');
        if (comma == std::string::npos) throw UsageError("CpxCq<p>,<q> expected: " + spec);
        int p = std::stoi(rest.substr(0, comma));
        int q = std::stoi(rest.substr(comma + 1));
        return make_cpxcq(p, q, spec);
    }
    if (spec.size() > 1 && spec[0] == 'C') {
        auto x = spec.find("xC");
        if (x != std::string::npos) {
            int m = std::stoi(spec.substr(1, x - 1));
            int n = std::stoi(spec.substr(x + 2));
            return make_product_cyclic(m, n);
        }
        return make_cyclic(std::stoi(spec.substr(1)));
    }
    throw UsageError("unknown group name: " + spec);
}

// ---- subgroup operations ----

Subgroup conjugate_subgroup(const Subgroup& h, int g) {
    std::vector<int> out;
    out.reserve(h.elems.size());
    for (int x : h.elems) out.push_back(h.g->conj(g, x));
    std::sort(out.begin(), out.end());
    return Subgroup{h.g, out};
}

Subgroup intersect(const Subgroup& a, const Subgroup& b) {
    if (a.g != b.g) throw GroupMismatch("intersect");
    std::vector<int> out;
    std::set_intersection(a.elems.begin(), a.elems.end(), b.elems.begin(), b.elems.end(),
                          std::back_inserter(out));
    return Subgroup{a.g, out};
}

bool is_normal(const Subgroup& h) {
    for (int g = 0; g < h.g->order; ++g)
        if (!(conjugate_subgroup(h, g) == h)) return false;
    return true;
}

Subgroup normalizer(const Subgroup& h) {
    std::vector<int> out;
    for (int g = 0; g < h.g->order; ++g)
        if (conjugate_subgroup(h, g) == h) out.push_back(g);
    return Subgroup{h.g, out}; // closed automatically
}

std::vector<int> left_coset_reps(const Subgroup& h, const Subgroup& within) {
    if (!within.contains(h)) throw NotASubgroupChain("left_coset_reps: H not inside L");
    std::vector<char> used(h.g->order, 0);
    std::vector<int> reps;
    for (int x : within.elems) {
        if (used[x]) continue;
        reps.push_back(x);
        for (int k : h.elems) used[h.g->mul(x, k)] = 1;
    }
    return reps;
}

std::vector<int> weyl_cosets(const Subgroup& h) {
    Subgroup n = normalizer(h);
    return left_coset_reps(h, n);
}

std::vector<int> double_cosets(const Subgroup& h, const Subgroup& m, const Subgroup& within) {
    if (!within.contains(h) || !within.contains(m))
        throw NotASubgroupChain("double_cosets: H, M must lie inside L");
    const FiniteGroup& g = *h.g;
    std::vector<char> used(g.order, 0);
    std::vector<int> reps;
    for (int x : within.elems) {
        if (used[x]) continue;
        reps.push_back(x); // minimal element of the coset, since elems is sorted
        for (int a : h.elems)
            for (int b : m.elems) used[g.mul(g.mul(a, x), b)] = 1;
    }
    return reps;
}

std::vector<Subgroup> subgroups_of(const Subgroup& within) {
    std::vector<Subgroup> out;
    for (const auto& s : within.g->subgroups())
        if (within.contains(s)) out.push_back(s);
    return out;
}

Subgroup class_rep_of(const Subgroup& h) {
    Subgroup best = h;
    for (int g = 0; g < h.g->order; ++g) {
        Subgroup c = conjugate_subgroup(h, g);
        if (c < best) best = c;
    }
    return best;
}

std::vector<Subgroup> subgroup_class_reps(const FiniteGroup& g) {
    std::set<std::vector<int>> seen;
    std::vector<Subgroup> out;
    for (const auto& s : g.subgroups()) {
        Subgroup r = class_rep_of(s);
        if (!seen.count(r.elems)) {
            seen.insert(r.elems);
            out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

CosetFactorization coset_factorization(const Subgroup& h, const Subgroup& k,
                                       const Subgroup& l, const Subgroup& m) {
    if (!k.contains(h) || !l.contains(k) || !l.contains(m))
        throw NotASubgroupChain("coset_factorization: need H <= K <= L, M <= L");
    const FiniteGroup& g = *h.g;
    CosetFactorization out;
    out.hlm = double_cosets(h, m, l);
    auto rep_in = [&](int elem, const std::vector<int>& reps, const Subgroup& a, const Subgroup& b) {
        // representative of the double coset a elem b among reps
        std::set<int> coset;
        for (int x : a.elems)
            for (int y : b.elems) coset.insert(g.mul(g.mul(x, elem), y));
        for (int r : reps)
            if (coset.count(r)) return r;
        throw Error("double coset representative not found");
    };
    std::set<int> hit;
    for (int x : double_cosets(k, m, l)) {
        Subgroup xmx = conjugate_subgroup(m, x);
        Subgroup cut = intersect(xmx, k);
        for (int y : double_cosets(h, cut, k)) {
            int z = g.mul(y, x);
            int r = rep_in(z, out.hlm, h, m);
            out.pairs.push_back({x, y});
            out.images.push_back(r);
            hit.insert(r);
        }
    }
    out.bijective = (hit.size() == out.hlm.size()) && (out.images.size() == out.hlm.size());
    return out;
}

// ---- classification ----

const char* kind_name(GroupKind k) {
    switch (k) {
        case GroupKind::dedekind: return "dedekind";
        case GroupKind::star: return "star";
        case GroupKind::d8: return "d8";
        default: return "other";
    }
}

static bool satisfies_star(const FiniteGroup& g) {
    // every proper nontrivial subgroup maximal; every subgroup normal or self-normalizing
    const auto& subs = g.subgroups();
    for (const auto& s : subs) {
        if (s.order() > 1 && s.order() < g.order) {
            for (const auto& t : subs)
                if (t.order() > s.order() && t.order() < g.order && t.contains(s)) return false;
        }
        if (!is_normal(s) && !(normalizer(s) == s)) return false;
    }
    return true;
}

static bool is_d8_iso(const FiniteGroup& g) {
    if (g.order != 8) return false;
    bool abelian = true;
    for (int a = 0; a < 8 && abelian; ++a)
        for (int b = 0; b < 8; ++b)
            if (g.mul(a, b) != g.mul(b, a)) { abelian = false; break; }
    if (abelian) return false;
    int invol = 0;
    for (int a = 1; a < 8; ++a)
        if (g.mul(a, a) == 0) ++invol;
    return invol == 5; // D8 has five involutions, Q8 has one
}

GroupClassification classify(const FiniteGroup& g) {
    GroupClassification out;
    std::string bad;
    bool ded = true;
    for (const auto& s : g.subgroups())
        if (!is_normal(s)) {
            ded = false;
            std::ostringstream os;
            os << "non-normal subgroup of order " << s.order() << " {";
            for (size_t i = 0; i < s.elems.size(); ++i) os << (i ? "," : "") << s.elems[i];
            os << "}";
            if (!(normalizer(s) == s)) os << " with N_G(H) != H";
            bad = os.str();
            break;
        }
    if (ded) {
        out.kind = GroupKind::dedekind;
        return out;
    }
    if (satisfies_star(g)) {
        out.kind = GroupKind::star;
        return out;
    }
    if (is_d8_iso(g)) {
        out.kind = GroupKind::d8;
        return out;
    }
    out.kind = GroupKind::other;
    out.witness = bad;
    return out;
}

SubgroupGroup as_group(const Subgroup& h) {
    SubgroupGroup out;
    out.embed = h.elems;
    for (int i = 0; i < (int)h.elems.size(); ++i) out.from_parent[h.elems[i]] = i;
    int n = (int)h.elems.size();
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            t[i][j] = out.from_parent.at(h.g->mul(h.elems[i], h.elems[j]));
    out.group = build_group(t, h.g->name + "-sub" + std::to_string(n));
    return out;
}

} // namespace tamb
