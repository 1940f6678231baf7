#include "tamb/jsonio.hpp"

#include <chrono>
#include <fstream>

#include "tamb/parallel.hpp"

namespace tamb {

namespace par {
namespace {
int g_jobs = 1;
}
int jobs() { return g_jobs; }
void set_jobs(int n) { g_jobs = n < 1 ? 1 : n; }
double wall_time() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}
} // namespace par

json group_to_json(const FiniteGroup& g) {
    json j;
    j["name"] = g.name;
    j["order"] = g.order;
    json mul = json::array();
    for (int i = 0; i < g.order; ++i) {
        json row = json::array();
        for (int k = 0; k < g.order; ++k) row.push_back(g.mul(i, k));
        mul.push_back(row);
    }
    j["mul"] = mul;
    return j;
}

GroupPtr group_from_json(const json& j) {
    int n = j.at("order").get<int>();
    std::vector<std::vector<int>> t(n);
    const auto& mul = j.at("mul");
    for (int i = 0; i < n; ++i) t[i] = mul.at(i).get<std::vector<int>>();
    std::string name = j.contains("name") ? j["name"].get<std::string>() : "custom";
    return build_group(t, name);
}

json gset_to_json(const GSet& x) {
    json j;
    j["group"] = x.g->name;
    json orbits = json::array();
    for (const auto& s : x.stabs) orbits.push_back(s.elems);
    j["orbits"] = orbits;
    return j;
}

GSet gset_from_json(const json& j, const GroupPtr& g) {
    GSet x{g.get(), {}};
    for (const auto& o : j.at("orbits"))
        x.stabs.push_back(subgroup_from_elements(*g, o.get<std::vector<int>>()));
    return x;
}

json key_to_json(const IrrKey& k) {
    json j;
    j["K"] = k.K;
    j["y"] = k.y;
    json pairs = json::array();
    for (const auto& [h, x] : k.pairs) pairs.push_back(json{{"H", h}, {"x", x}});
    j["pairs"] = pairs;
    return j;
}

IrrKey key_from_json(const json& j) {
    IrrKey k;
    k.K = j.at("K").get<std::vector<int>>();
    k.y = j.at("y").get<int>();
    for (const auto& p : j.at("pairs"))
        k.pairs.push_back({p.at("H").get<std::vector<int>>(), p.at("x").get<int>()});
    return k;
}

static json action_to_json(const Action& a) {
    json j;
    j["points"] = a.npts;
    json t = json::array();
    for (int e = 0; e < a.g->order; ++e) {
        std::vector<int> row(a.npts);
        for (int p = 0; p < a.npts; ++p) row[p] = a.apply(e, p);
        t.push_back(row);
    }
    j["action"] = t;
    return j;
}

static Action action_from_json(const json& j, const FiniteGroup* g) {
    Action a;
    a.g = g;
    a.npts = j.at("points").get<int>();
    a.tbl.assign((size_t)g->order * a.npts, -1);
    const auto& t = j.at("action");
    for (int e = 0; e < g->order; ++e) {
        auto row = t.at(e).get<std::vector<int>>();
        for (int p = 0; p < a.npts; ++p) a.tbl[(size_t)e * a.npts + p] = row[p];
    }
    return a;
}

json bispan_to_json(const ConcreteBispan& b) {
    json j;
    j["X"] = gset_to_json(b.sig->X);
    j["Y"] = gset_to_json(b.sig->Y);
    j["A"] = action_to_json(b.A);
    j["B"] = action_to_json(b.B);
    j["p"] = b.p;
    j["q"] = b.q;
    j["r"] = b.r;
    json comps = json::array();
    for (const auto& k : canonicalize(b).comps) comps.push_back(key_to_json(k));
    j["key"] = comps;
    return j;
}

ConcreteBispan bispan_from_json(const json& j, const SigPtr& sig) {
    ConcreteBispan b;
    b.sig = sig;
    b.A = action_from_json(j.at("A"), sig->X.g);
    b.B = action_from_json(j.at("B"), sig->X.g);
    b.p = j.at("p").get<std::vector<int>>();
    b.q = j.at("q").get<std::vector<int>>();
    b.r = j.at("r").get<std::vector<int>>();
    validate(b);
    return b;
}

json sum_to_json(const FormalSum& s) {
    json j = json::array();
    for (const auto& [k, c] : s.terms) {
        json t;
        t["coef"] = c;
        t["key"] = key_to_json(k);
        j.push_back(t);
    }
    return j;
}

json expr_to_json(const ExprPtr& e) {
    json j;
    switch (e->kind) {
        case Expr::Leaf:
            j["op"] = "gen";
            j["key"] = key_to_json(e->leaf);
            return j;
        case Expr::Add: j["op"] = "add"; break;
        case Expr::Mul: j["op"] = "mul"; break;
        case Expr::Neg: j["op"] = "neg"; break;
        case Expr::Scale:
            j["op"] = "scale";
            j["coef"] = e->coef;
            break;
    }
    json kids = json::array();
    for (const auto& k : e->kids) kids.push_back(expr_to_json(k));
    j["args"] = kids;
    return j;
}

json certificate_to_json(const RewriteCertificate& c) {
    json j;
    j["target"] = key_to_json(c.target);
    j["verified"] = c.verified;
    j["depth"] = c.depth;
    j["expression"] = expr_to_json(c.expr);
    return j;
}

static json imat_to_json(const IMat& m) {
    json rows = json::array();
    for (const auto& r : m) rows.push_back(r);
    return rows;
}
static IMat imat_from_json(const json& j) {
    IMat out;
    for (const auto& r : j) out.push_back(r.get<IVec>());
    return out;
}

json mackey_to_json(const MackeyData& m) {
    json j;
    j["name"] = m.name;
    j["group"] = m.G->name;
    json levels = json::array();
    for (size_t i = 0; i < m.subs.size(); ++i) {
        json l;
        l["subgroup"] = m.subs[i].elems;
        l["class"] = class_rep_of(m.subs[i]).elems;
        l["ngens"] = m.level[i].ngens();
        json rels = json::array();
        for (const auto& r : m.level[i].relations()) {
            std::vector<long long> row;
            for (const auto& v : r) row.push_back(v.get_si());
            rels.push_back(row);
        }
        l["relations"] = rels;
        if (!m.gen_degree.empty()) l["degrees"] = m.gen_degree[i];
        levels.push_back(l);
    }
    j["levels"] = levels;
    json res = json::array(), tr = json::array();
    for (const auto& [kh, mat] : m.res_)
        res.push_back(json{{"K", kh.first}, {"H", kh.second}, {"matrix", imat_to_json(mat)}});
    for (const auto& [kh, mat] : m.tr_)
        tr.push_back(json{{"K", kh.first}, {"H", kh.second}, {"matrix", imat_to_json(mat)}});
    j["res"] = res;
    j["tr"] = tr;
    json conj = json::array();
    for (size_t e = 0; e < m.conj_.size(); ++e)
        for (const auto& [h, mat] : m.conj_[e])
            conj.push_back(json{{"g", e}, {"H", h}, {"matrix", imat_to_json(mat)}});
    j["conj"] = conj;
    j["green"] = m.green;
    if (m.green) {
        json units = json::array(), mult = json::array();
        for (const auto& u : m.unit) units.push_back(u);
        for (const auto& table : m.mult) {
            json t = json::array();
            for (const auto& row : table) {
                json rr = json::array();
                for (const auto& v : row) rr.push_back(v);
                t.push_back(rr);
            }
            mult.push_back(t);
        }
        j["units"] = units;
        j["mult"] = mult;
    }
    if (!m.norm_.empty()) {
        json norms = json::array();
        for (const auto& [kh, vals] : m.norm_) {
            json entries = json::array();
            for (const auto& [i, v] : vals) entries.push_back(json{{"gen", i}, {"value", v}});
            norms.push_back(json{{"K", kh.first}, {"H", kh.second}, {"values", entries}});
        }
        j["norms"] = norms;
    }
    return j;
}

MackeyData mackey_from_json(const json& j, const GroupPtr& g) {
    MackeyData m;
    m.G = g;
    m.name = j.at("name").get<std::string>();
    m.subs = g->subgroups();
    const auto& levels = j.at("levels");
    if (levels.size() != m.subs.size()) throw UsageError("mackey_from_json: level count mismatch");
    for (size_t i = 0; i < levels.size(); ++i) {
        if (levels[i].at("subgroup").get<std::vector<int>>() != m.subs[i].elems)
            throw UsageError("mackey_from_json: subgroup order mismatch");
        int ng = levels[i].at("ngens").get<int>();
        ZMat rels;
        for (const auto& r : levels[i].at("relations")) {
            ZVec row;
            for (const auto& v : r) row.push_back((long)v.get<long long>());
            rels.push_back(row);
        }
        m.level.push_back(PresentedZModule(ng, rels));
        if (levels[i].contains("degrees"))
            m.gen_degree.push_back(levels[i]["degrees"].get<std::vector<int>>());
    }
    for (const auto& e : j.at("res"))
        m.res_[{e.at("K").get<int>(), e.at("H").get<int>()}] = imat_from_json(e.at("matrix"));
    for (const auto& e : j.at("tr"))
        m.tr_[{e.at("K").get<int>(), e.at("H").get<int>()}] = imat_from_json(e.at("matrix"));
    m.conj_.resize(g->order);
    for (const auto& e : j.at("conj"))
        m.conj_[e.at("g").get<int>()][e.at("H").get<int>()] = imat_from_json(e.at("matrix"));
    m.green = j.at("green").get<bool>();
    if (m.green) {
        for (const auto& u : j.at("units")) m.unit.push_back(u.get<IVec>());
        for (const auto& t : j.at("mult")) {
            std::vector<std::vector<IVec>> table;
            for (const auto& row : t) {
                std::vector<IVec> rr;
                for (const auto& v : row) rr.push_back(v.get<IVec>());
                table.push_back(rr);
            }
            m.mult.push_back(table);
        }
    }
    if (j.contains("norms"))
        for (const auto& e : j["norms"]) {
            std::map<int, IVec> vals;
            for (const auto& v : e.at("values")) vals[v.at("gen").get<int>()] = v.at("value").get<IVec>();
            m.norm_[{e.at("K").get<int>(), e.at("H").get<int>()}] = vals;
        }
    return m;
}

GroupPtr group_from_spec(const std::string& spec) {
    if (!spec.empty() && spec[0] == '@') {
        std::ifstream in(spec.substr(1));
        if (!in) throw UsageError("cannot open group file: " + spec.substr(1));
        json j;
        in >> j;
        return group_from_json(j);
    }
    return group_from_name(spec);
}

Subgroup subgroup_from_spec(const GroupPtr& g, const std::string& spec) {
    std::string s = spec;
    auto slash = s.find('/');
    if (slash != std::string::npos) s = s.substr(slash + 1);
    if (s == "e") return g->trivial_subgroup();
    if (s == "G" || s == g->name) return g->full_subgroup();
    if (!s.empty() && s[0] == 's') {
        int i = std::stoi(s.substr(1));
        if (i < 0 || i >= (int)g->subgroups().size()) throw UsageError("subgroup index out of range");
        return g->subgroups()[i];
    }
    if (!s.empty() && s[0] == '[') {
        std::vector<int> gens;
        int v = 0;
        bool in_num = false;
        for (char c : s) {
            if (c >= '0' && c <= '9') {
                v = v * 10 + (c - '0');
                in_num = true;
            } else if (in_num) {
                gens.push_back(v);
                v = 0;
                in_num = false;
            }
        }
        return subgroup_closure(*g, gens);
    }
    throw UsageError("bad subgroup spec: " + spec);
}

GSet gset_from_spec(const GroupPtr& g, const std::string& spec) {
    if (spec == "empty") return gset_empty(*g);
    GSet x{g.get(), {}};
    size_t start = 0;
    while (start < spec.size()) {
        auto comma = spec.find(',', start);
        // beware of commas inside [..]
        auto open = spec.find('[', start);
        if (open != std::string::npos && (comma == std::string::npos || open < comma)) {
            auto close = spec.find(']', open);
            comma = spec.find(',', close);
        }
        std::string part = spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        x.stabs.push_back(subgroup_from_spec(g, part));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return x;
}

} // namespace tamb
