#include "doctest.h"
#include "tamb/mackey.hpp"

using namespace tamb;

TEST_CASE("burnside functor passes the axiom checker") {
    for (const char* name : {"C2", "C4", "S3", "D8", "Q8"}) {
        auto g = group_from_name(name);
        MackeyData b = burnside(g);
        AxiomReport rep = check_axioms(b);
        INFO(name, ": ", rep.failure);
        CHECK(rep.pass);
    }
}

TEST_CASE("burnside ranks") {
    auto cp = group_from_name("C3");
    MackeyData b = burnside(cp);
    int top = b.sub_index(cp->full_subgroup());
    CHECK(b.level[top].ngens() == 2);
    int bot = b.sub_index(cp->trivial_subgroup());
    CHECK(b.level[bot].ngens() == 1);

    auto d8 = group_from_name("D8");
    MackeyData bd = burnside(d8);
    CHECK(bd.level[bd.sub_index(d8->trivial_subgroup())].ngens() == 1);
    // top level rank = number of conjugacy classes of subgroups = 8 for D8
    CHECK(bd.level[bd.sub_index(d8->full_subgroup())].ngens() ==
          (int)subgroup_class_reps(*d8).size());
}

TEST_CASE("a corrupted transfer entry is caught with a located instance") {
    auto c4 = group_from_name("C4");
    MackeyData b = burnside(c4);
    int top = b.sub_index(c4->full_subgroup());
    int bot = b.sub_index(c4->trivial_subgroup());
    b.tr_[{top, bot}][0][0] += 1;
    AxiomReport rep = check_axioms(b);
    CHECK(!rep.pass);
    CHECK(!rep.failure.empty());
}

TEST_CASE("fixed point functor passes") {
    for (const char* name : {"C4", "S3", "D8"}) {
        auto g = group_from_name(name);
        GSet x{g.get(), {g->trivial_subgroup(), g->subgroups()[1]}};
        MackeyData f = fixed_point_functor(g, x);
        AxiomReport rep = check_axioms(f);
        INFO(name, ": ", rep.failure);
        CHECK(rep.pass);
    }
}

TEST_CASE("green counterexample data") {
    for (int p : {2, 3}) {
        auto cp = group_from_name("C" + std::to_string(p));
        MackeyData m = green_counterexample(cp, p, 3);
        AxiomReport rep = check_axioms(m);
        INFO(rep.failure);
        CHECK(rep.pass);
        int top = m.sub_index(cp->full_subgroup());
        int bot = m.sub_index(cp->trivial_subgroup());
        for (const auto& row : m.tr(top, bot))
            for (long long v : row) CHECK(v == 0);
    }
}

TEST_CASE("free truncation of A[C2/e] passes the axiom checker") {
    auto c2 = group_from_name("C2");
    GSet x = gset_orbit(c2->trivial_subgroup());
    FreeTruncation ft = free_truncation(c2, x, 3);
    AxiomReport rep = check_axioms(ft.data);
    INFO(rep.failure);
    CHECK(rep.pass);
    CHECK(!ft.data.norm_.empty());
}

TEST_CASE("free truncation over S3 passes") {
    auto s3 = group_from_name("S3");
    GSet x = gset_orbit(subgroup_closure(*s3, {1}));
    FreeTruncation ft = free_truncation(s3, x, 2);
    AxiomReport rep = check_axioms(ft.data);
    INFO(rep.failure);
    CHECK(rep.pass);
}
