// Benchmark of the OpenMP kernels against their serial reference paths:
// double-coset axiom sweep, batch class multiplication, certificate
// re-expansion.

#include <cstdio>
#include <random>
#include <vector>

#include "tamb/genset.hpp"
#include "tamb/jsonio.hpp"
#include "tamb/parallel.hpp"

using namespace tamb;

namespace {

double time_it(const std::function<void()>& f) {
    double t0 = par::wall_time();
    f();
    return par::wall_time() - t0;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-34s serial %8.3fs   parallel %8.3fs   speedup %.2fx\n", name, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0);
}

} // namespace

int main(int argc, char** argv) {
    int jobs = 2;
    if (argc > 1) jobs = std::atoi(argv[1]);
    std::printf("jobs = %d\n", jobs);

    // 1. axiom sweep on a free truncation over D8
    {
        auto g = group_from_name("D8");
        FreeTruncation ft = free_truncation(g, gset_orbit(subgroup_closure(*g, {4})), 2);
        par::set_jobs(1);
        double s = time_it([&] { check_axioms(ft.data); });
        par::set_jobs(jobs);
        double p = time_it([&] { check_axioms(ft.data); });
        report("axiom sweep (free trunc, D8)", s, p);
    }

    // 2. batch multiplication of basis classes over Q8
    {
        auto g = group_from_name("Q8");
        auto ctx = make_level(g, gset_orbit(g->trivial_subgroup()), g->full_subgroup());
        auto basis = level_basis(*ctx, 4);
        std::mt19937 rng(5);
        std::vector<std::pair<IrrKey, IrrKey>> pairs;
        for (int i = 0; i < 300; ++i)
            pairs.push_back({basis[rng() % basis.size()], basis[rng() % basis.size()]});
        std::vector<FormalSum> out_s(pairs.size()), out_p(pairs.size());
        par::set_jobs(1);
        double s = time_it([&] {
            par::for_index_serial(pairs.size(), [&](size_t i) {
                out_s[i] = mul_irr(ctx->sig, pairs[i].first, pairs[i].second);
            });
        });
        par::set_jobs(jobs);
        double p = time_it([&] {
            par::for_index(pairs.size(), [&](size_t i) {
                out_p[i] = mul_irr(ctx->sig, pairs[i].first, pairs[i].second);
            });
        });
        bool same = true;
        for (size_t i = 0; i < pairs.size(); ++i) same = same && out_s[i] == out_p[i];
        report("batch class multiplication (Q8)", s, p);
        if (!same) std::printf("MISMATCH in batch multiplication!\n");
    }

    // 3. certificate re-expansion over C2
    {
        auto g = group_from_name("C2");
        Rewriter rw(g, g->trivial_subgroup());
        auto targets = level_basis(*rw.top(), 8);
        std::vector<RewriteCertificate> certs;
        for (const auto& t : targets) {
            auto c = rw.rewrite(t);
            if (c) certs.push_back(*c);
        }
        std::vector<char> ok_s(certs.size()), ok_p(certs.size());
        par::set_jobs(1);
        double s = time_it([&] {
            par::for_index_serial(certs.size(), [&](size_t i) {
                MulCache cache;
                FormalSum v = eval_expr(*rw.top(), certs[i].expr, &cache);
                ok_s[i] = v.terms.size() == 1;
            });
        });
        par::set_jobs(jobs);
        double p = time_it([&] {
            par::for_index(certs.size(), [&](size_t i) {
                MulCache cache;
                FormalSum v = eval_expr(*rw.top(), certs[i].expr, &cache);
                ok_p[i] = v.terms.size() == 1;
            });
        });
        report("certificate re-expansion (C2)", s, p);
        if (ok_s != ok_p) std::printf("MISMATCH in certificate verification!\n");
    }
    return 0;
}
