#ifndef TAMB_GSET_HPP
#define TAMB_GSET_HPP

#include <optional>
#include <vector>

#include "tamb/group.hpp"

namespace tamb {

/// A finite G-set in symbolic form: a list of orbits, each recorded by a
/// chosen stabilizer, so orbit i is G/stabs[i].
struct GSet {
    const FiniteGroup* g = nullptr;
    std::vector<Subgroup> stabs;

    int orbit_count() const { return (int)stabs.size(); }
    int size() const;
    bool operator==(const GSet& o) const { return g == o.g && stabs == o.stabs; }
};

GSet gset_orbit(const Subgroup& stab);            // G/H
GSet gset_point(const FiniteGroup& g);            // G/G
GSet gset_empty(const FiniteGroup& g);
GSet gset_disjoint(const GSet& a, const GSet& b);

/// An equivariant map between symbolic G-sets: orbit i of the source goes to
/// orbit `orbit` of the target, with x H_i |-> x g K_j; requires H_i <= g K_j g^-1.
struct GMap {
    GSet source, target;
    struct OrbitAssign { int orbit; int elem; };
    std::vector<OrbitAssign> assign;
};

GMap gmap_identity(const GSet& x);
GMap compose(const GMap& g, const GMap& f); // g after f
void validate(const GMap& f);               // throws on a broken equivariance condition

/// Element-level G-set: points 0..npts-1 with the full action table.
struct Action {
    const FiniteGroup* g = nullptr;
    int npts = 0;
    std::vector<int> tbl; // tbl[e*npts + p]

    int apply(int e, int p) const { return tbl[(size_t)e * npts + p]; }
    std::vector<int> orbit_of_point() const;   // point -> orbit id (by minimal point)
    std::vector<int> orbit_reps() const;       // minimal point per orbit, sorted
    Subgroup stabilizer(int p) const;
    std::vector<int> orbit_points(int rep) const;
};

/// Canonical realization of a symbolic G-set: orbits in order; the points of
/// orbit G/H are the left cosets of H sorted by minimal element.
struct Realized {
    GSet sym;
    Action act;
    std::vector<std::pair<int, int>> point_label; // point -> (orbit, coset rep)
    int point_of(int orbit, int elem) const;      // coset containing elem*H_orbit
};

Realized realize(const GSet& x);
GSet extract(const Action& a);                        // choose stabilizers of minimal reps
std::vector<int> realize_map(const GMap& f, const Realized& src, const Realized& dst);

bool gset_iso(const GSet& a, const GSet& b); // multiset of stabilizer conjugacy classes

// ---- categorical constructions ----

struct ProductResult {
    GSet product;
    GMap pr1, pr2;
    // element-level witnesses over realize(product-as-extracted)
    Action act;
    std::vector<int> to_x, to_y; // product point -> realized X / Y point
};
ProductResult product(const GSet& x, const GSet& y);

struct PullbackResult {
    GSet pullback;
    Action act;
    std::vector<int> to_x, to_y; // into realized sources of f and g
};
PullbackResult pullback(const GMap& f, const GMap& g); // f: X->Z, g: Y->Z

/// Fiberwise degree of a map; Undefined (nullopt) when fibers are not all equal.
std::optional<int> degree(const GMap& f);
std::optional<int> degree_elementwise(const Action& src, const Action& dst, const std::vector<int>& f);

/// G x_H X for an H-set X (over the subgroup materialized via as_group).
GSet induce(const Subgroup& h, const SubgroupGroup& hg, const GSet& x_h);

/// The exponential diagram of Pi_f A:
///   X <- A <- X x_Y Pi_f A
///   Y <------ Pi_f A
struct ExponentialDiagram {
    GSet pi;           // Pi_f A
    GSet x_times_pi;   // X x_Y Pi_f A
    // element-level data (points of realized instances are indices below)
    Action pi_act;
    std::vector<int> pi_to_y;       // Pi point -> realized Y point
    Action xp_act;                  // X x_Y Pi
    std::vector<int> xp_to_a;       // evaluation
    std::vector<int> xp_to_x;
    std::vector<int> xp_to_pi;
};

/// Sections of p over the fibers of f, with the conjugation action.
/// f and p are element-level maps between realized/element-level actions:
///   f: X -> Y, p: A -> X.
ExponentialDiagram dependent_product_elt(const Action& X, const Action& Y, const Action& A,
                                         const std::vector<int>& f, const std::vector<int>& p,
                                         size_t cap = 2000000);

ExponentialDiagram dependent_product(const GMap& f, const GMap& p, size_t cap = 2000000);

} // namespace tamb

#endif
