// tamb: batch front end for the equivariant-algebra engine.
//
// Subcommands: group | basis | box | axioms | certify | findim | norm
// Output is JSON-first (deterministic for a fixed RunConfig); --text renders
// a short human-readable summary as well.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "tamb/genset.hpp"
#include "tamb/jsonio.hpp"
#include "tamb/parallel.hpp"

using namespace tamb;

namespace {

struct Common {
    std::string group;
    std::string out;
    int jobs = 1;
    long long seed = 0;
    bool text = false;
};

void emit(const Common& c, json& j, int exit_code_on_fail, bool pass) {
    j["config"]["seed"] = c.seed;
    j["config"]["jobs"] = c.jobs;
    std::string payload = j.dump(2) + "\n";
    if (!c.out.empty()) {
        std::ofstream f(c.out);
        f << payload;
    } else {
        std::cout << payload;
    }
    if (!pass) std::exit(exit_code_on_fail);
}

Subgroup parse_subgroup(const GroupPtr& g, const std::string& spec) {
    return subgroup_from_spec(g, spec);
}

json degree_json(const LevelCtx& ctx, const IrrKey& k) {
    json d;
    WeightedDegree w = degree_of(ctx, k);
    d["n"] = w.n;
    if (w.K) d["K"] = w.K->elems;
    return d;
}

// optional on-disk memo for level bases, keyed by the full request
std::vector<IrrKey> cached_basis(const LevelCtxPtr& ctx, int maxdeg) {
    const char* dir = std::getenv("TAMB_CACHE_DIR");
    json cfg;
    cfg["group"] = group_to_json(*ctx->G);
    cfg["set"] = gset_to_json(ctx->X);
    cfg["level"] = ctx->L.elems;
    cfg["maxdeg"] = maxdeg;
    std::string key = cfg.dump();
    std::string path;
    if (dir) {
        path = std::string(dir) + "/basis-" + std::to_string(std::hash<std::string>{}(key)) + ".json";
        std::ifstream in(path);
        if (in) {
            json j;
            in >> j;
            if (j.contains("config") && j["config"].dump() == key) {
                std::vector<IrrKey> out;
                for (const auto& e : j["basis"]) out.push_back(key_from_json(e));
                return out;
            }
        }
    }
    auto basis = level_basis(*ctx, maxdeg);
    if (dir) {
        json j;
        j["config"] = json::parse(key);
        json arr = json::array();
        for (const auto& k : basis) arr.push_back(key_to_json(k));
        j["basis"] = arr;
        std::ofstream outf(path);
        outf << j.dump();
    }
    return basis;
}

int run(int argc, char** argv) {
    CLI::App app{"tamb: exact computations with bispans, free Tambara functors, box products and generation certificates"};
    app.require_subcommand(1);
    Common c;
    app.add_option("--jobs", c.jobs, "worker threads for the parallel kernels");
    app.add_option("--seed", c.seed, "seed recorded in reports (all computations are deterministic)");
    app.add_option("--out", c.out, "write the JSON report to this path");
    app.add_flag("--text", c.text, "also print a text summary to stderr");

    // group
    auto* cg = app.add_subcommand("group", "inspect a group: subgroups, classification");
    cg->add_option("name", c.group, "preset name or @table.json")->required();

    // basis
    auto* cb = app.add_subcommand("basis", "basis of A[X](G/L) through a degree bound");
    std::string set, level = "G", orbit;
    int maxdeg = 2;
    cb->add_option("--group", c.group)->required();
    cb->add_option("--set", set, "G-set spec, e.g. 'C2/e' or 'e,s3' or 'empty'")->required();
    cb->add_option("--level", level, "subgroup spec for L");
    cb->add_option("--maxdeg", maxdeg);

    // axioms
    auto* ca = app.add_subcommand("axioms", "run the Mackey/Green axiom checker on a functor");
    std::string functor = "burnside";
    ca->add_option("--group", c.group)->required();
    ca->add_option("--functor", functor,
                   "burnside | fixedpoints:<set> | green:<p>:<d> | free:<set>:<maxdeg> | @lewis.json");

    // box
    auto* cx = app.add_subcommand("box", "box product of free truncations and the coherence report");
    std::string set1, set2;
    cx->add_option("--group", c.group)->required();
    cx->add_option("--set1", set1)->required();
    cx->add_option("--set2", set2)->required();
    cx->add_option("--level", level);
    cx->add_option("--maxdeg", maxdeg);

    // certify
    auto* cc = app.add_subcommand("certify", "generation certificates at the top level");
    long long budget = 2000000;
    cc->add_option("--group", c.group)->required();
    cc->add_option("--orbit", orbit, "ambient orbit subgroup spec (X = G/H)");
    cc->add_option("--set", set, "general G-set spec (orbits certified separately)");
    cc->add_option("--maxdeg", maxdeg);
    cc->add_option("--budget", budget);

    // findim
    auto* cf = app.add_subcommand("findim", "relative finite-dimensionality report");
    cf->add_option("--group", c.group)->required();
    cf->add_option("--set", set)->required();
    cf->add_option("--maxdeg", maxdeg);

    // norm
    auto* cn = app.add_subcommand("norm", "free-functor norm identity censuses");
    std::string subgroup, hset = "point";
    cn->add_option("--group", c.group)->required();
    cn->add_option("--subgroup", subgroup, "H as a subgroup spec")->required();
    cn->add_option("--hset", hset, "H-set: 'point', 'free', or 's<i>' over as_group(H)");
    cn->add_option("--level", level);
    cn->add_option("--maxdeg", maxdeg);

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }
    par::set_jobs(c.jobs);

    json j;
    j["config"]["argv"] = [&] {
        std::vector<std::string> a;
        for (int i = 1; i < argc; ++i) a.push_back(argv[i]);
        return a;
    }();

    if (cg->parsed()) {
        auto g = group_from_spec(c.group);
        j["order"] = g->order;
        j["name"] = g->name;
        json subs = json::array();
        for (const auto& s : g->subgroups()) {
            json e;
            e["elements"] = s.elems;
            e["order"] = s.order();
            e["normal"] = is_normal(s);
            e["normalizer"] = normalizer(s).elems;
            e["class"] = class_rep_of(s).elems;
            subs.push_back(e);
        }
        j["subgroups"] = subs;
        auto cls = classify(*g);
        j["classification"] = kind_name(cls.kind);
        if (!cls.witness.empty()) j["witness"] = cls.witness;
        if (c.text)
            std::cerr << g->name << ": order " << g->order << ", " << g->subgroups().size()
                      << " subgroups, classification " << kind_name(cls.kind) << "\n";
        emit(c, j, 1, true);
        return 0;
    }
    if (cb->parsed()) {
        auto g = group_from_spec(c.group);
        GSet x = gset_from_spec(g, set);
        Subgroup l = parse_subgroup(g, level);
        auto ctx = make_level(g, x, l);
        auto basis = cached_basis(ctx, maxdeg);
        json arr = json::array();
        for (const auto& k : basis) {
            json e;
            e["key"] = key_to_json(k);
            e["degree"] = degree_json(*ctx, k);
            arr.push_back(e);
        }
        j["set"] = gset_to_json(x);
        j["level"] = l.elems;
        j["maxdeg"] = maxdeg;
        j["count"] = basis.size();
        j["basis"] = arr;
        if (c.text) std::cerr << "basis classes through degree " << maxdeg << ": " << basis.size() << "\n";
        emit(c, j, 1, true);
        return 0;
    }
    if (ca->parsed()) {
        auto g = group_from_spec(c.group);
        MackeyData m;
        if (functor == "burnside") m = burnside(g);
        else if (functor.rfind("fixedpoints:", 0) == 0)
            m = fixed_point_functor(g, gset_from_spec(g, functor.substr(12)));
        else if (functor.rfind("green:", 0) == 0) {
            auto rest = functor.substr(6);
            auto colon = rest.find(':');
            m = green_counterexample(g, std::stoi(rest.substr(0, colon)),
                                     std::stoi(rest.substr(colon + 1)));
        } else if (functor.rfind("free:", 0) == 0) {
            auto rest = functor.substr(5);
            auto colon = rest.rfind(':');
            m = free_truncation(g, gset_from_spec(g, rest.substr(0, colon)),
                                std::stoi(rest.substr(colon + 1)))
                    .data;
        } else if (!functor.empty() && functor[0] == '@') {
            std::ifstream in(functor.substr(1));
            if (!in) throw UsageError("cannot open " + functor.substr(1));
            json lj;
            in >> lj;
            m = mackey_from_json(lj, g);
        } else {
            throw UsageError("unknown functor spec: " + functor);
        }
        auto rep = check_axioms(m);
        j["functor"] = m.name;
        j["pass"] = rep.pass;
        j["checks"] = rep.checks;
        if (!rep.pass) j["failure"] = rep.failure;
        if (c.text) std::cerr << m.name << ": " << (rep.pass ? "pass" : rep.failure) << "\n";
        emit(c, j, 1, rep.pass);
        return rep.pass ? 0 : 1;
    }
    if (cx->parsed()) {
        auto g = group_from_spec(c.group);
        GSet x = gset_from_spec(g, set1), y = gset_from_spec(g, set2);
        Subgroup l = parse_subgroup(g, level);
        auto rep = compare_free(g, x, y, l, maxdeg);
        j["pass"] = rep.pass;
        if (!rep.pass) j["failure"] = rep.detail;
        json strata = json::array();
        for (const auto& s : rep.strata)
            strata.push_back(json{{"level", s.levelidx},
                                  {"degree", s.degree},
                                  {"rank_free", s.rank_free},
                                  {"rank_box", s.rank_box},
                                  {"iso", s.iso}});
        j["strata"] = strata;
        j["dress_checks"] = rep.dress_checks;
        // the box output itself, with the summand provenance block
        MulCache cache;
        FreeTruncation fx = free_truncation(g, x, maxdeg, &cache);
        FreeTruncation fy = free_truncation(g, y, maxdeg, &cache);
        BoxProduct bp = box(g, {fx.data, fy.data});
        json lewis = mackey_to_json(bp.data);
        json prov = json::array();
        for (size_t l2 = 0; l2 < bp.info.size(); ++l2) {
            json e;
            e["level"] = l2;
            e["summands"] = bp.info[l2].summands;
            e["offsets"] = bp.info[l2].offset;
            prov.push_back(e);
        }
        lewis["provenance"] = prov;
        j["box"] = lewis;
        if (c.text)
            std::cerr << "compare_free: " << (rep.pass ? "iso on all strata" : rep.detail) << "\n";
        emit(c, j, 1, rep.pass);
        return rep.pass ? 0 : 1;
    }
    if (cc->parsed()) {
        auto g = group_from_spec(c.group);
        GSet x = orbit.empty() ? gset_from_spec(g, set) : gset_orbit(parse_subgroup(g, orbit));
        auto rep = certify_generation(g, x, maxdeg, budget);
        std::function<json(const CertifyReport&)> render = [&](const CertifyReport& r) {
            json e;
            e["pass"] = r.pass;
            e["targets"] = r.targets;
            e["certified"] = r.certified;
            e["leaves"] = r.leaves;
            e["escalations"] = r.escalations;
            e["steps"] = r.steps;
            e["max_depth"] = r.max_depth;
            if (!r.detail.empty()) e["detail"] = r.detail;
            if (!r.thresholds.empty()) {
                json th = json::array();
                for (const auto& [cls, n] : r.thresholds)
                    th.push_back(json{{"middle_class", cls}, {"N", n}});
                e["stratum_thresholds"] = th;
            }
            json certs = json::array();
            for (const auto& cert : r.certificates) certs.push_back(certificate_to_json(cert));
            if (!certs.empty()) e["certificates"] = certs;
            if (!r.parts.empty()) {
                json parts = json::array();
                for (const auto& [nm, pr] : r.parts) parts.push_back(json{{"name", nm}, {"report", render(pr)}});
                e["parts"] = parts;
            }
            return e;
        };
        j["report"] = render(rep);
        j["maxdeg"] = maxdeg;
        if (c.text)
            std::cerr << "certify: " << (rep.pass ? "pass" : rep.detail) << " (" << rep.certified
                      << "/" << rep.targets << ", depth " << rep.max_depth << ")\n";
        emit(c, j, 1, rep.pass);
        return rep.pass ? 0 : 1;
    }
    if (cf->parsed()) {
        auto g = group_from_spec(c.group);
        GSet x = gset_from_spec(g, set);
        auto rep = relative_findim_check(g, x, maxdeg);
        j["pass"] = rep.pass;
        json levels = json::array();
        for (const auto& l : rep.levels)
            levels.push_back(json{{"level", l.level.elems},
                                  {"pass", l.pass},
                                  {"module_generators", l.module_generators},
                                  {"generator_degree_bound", l.gen_degree_bound}});
        j["levels"] = levels;
        if (c.text) std::cerr << "findim: " << (rep.pass ? "pass" : "fail") << "\n";
        emit(c, j, 1, rep.pass);
        return rep.pass ? 0 : 1;
    }
    if (cn->parsed()) {
        auto g = group_from_spec(c.group);
        Subgroup h = parse_subgroup(g, subgroup);
        auto hg = as_group(h);
        GSet xh;
        if (hset == "point") xh = gset_point(*hg.group);
        else if (hset == "free") xh = gset_orbit(hg.group->trivial_subgroup());
        else xh = gset_orbit(subgroup_from_spec(hg.group, hset));
        Subgroup l = parse_subgroup(g, level);
        auto rep = norm_free_check(g, h, hg, xh, l, maxdeg);
        j["pass"] = rep.pass;
        j["g_side"] = rep.g_side;
        j["h_side"] = rep.h_side;
        j["narrative"] = rep.narrative;
        if (c.text) std::cerr << rep.narrative << "\n";
        emit(c, j, 1, rep.pass);
        return rep.pass ? 0 : 1;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n"
                  << "usage: tamb {group|basis|axioms|box|certify|findim|norm} [options]\n";
        return 2;
    } catch (const std::exception& e) {
        json j;
        j["error"] = e.what();
        std::cout << j.dump(2) << "\n";
        return 1;
    }
}
