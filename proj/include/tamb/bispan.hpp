#ifndef TAMB_BISPAN_HPP
#define TAMB_BISPAN_HPP

#include <map>
#include <memory>
#include <vector>

#include "tamb/gset.hpp"

namespace tamb {

/// The fixed endpoints (X, Y) of a hom-set bispan(X, Y), with their canonical
/// element-level realizations. All keys and point indices below are relative
/// to these realizations.
struct Signature {
    GSet X, Y;
    Realized rX, rY;
    unsigned long long uid = 0; // process-unique, used to key caches safely
};
using SigPtr = std::shared_ptr<const Signature>;
SigPtr make_sig(const GSet& x, const GSet& y);
bool same_sig(const Signature& a, const Signature& b);

/// Canonical key of an irreducible polynomial [X <- A -> B -> Y] with B
/// transitive: the middle stabilizer, the image point of the base in Y, and
/// one (stabilizer, image-point-in-X) pair per orbit of A, all minimized over
/// the choice of base point of B.
struct IrrKey {
    std::vector<int> K;                                   // sorted subgroup elements
    int y = 0;                                            // point of rY
    std::vector<std::pair<std::vector<int>, int>> pairs;  // sorted (H elements, point of rX)

    bool operator==(const IrrKey& o) const { return K == o.K && y == o.y && pairs == o.pairs; }
    bool operator<(const IrrKey& o) const {
        if (K != o.K) return K < o.K;
        if (y != o.y) return y < o.y;
        return pairs < o.pairs;
    }
};

/// A morphism of the polynomial category: a formal disjoint union of
/// irreducible components in canonical form. Empty list = the zero class.
struct BispanClass {
    SigPtr sig;
    std::vector<IrrKey> comps; // sorted multiset

    bool irreducible() const { return comps.size() == 1; }
};

/// An integer combination of irreducible classes (an element of the
/// group-completed hom-set; for X -> G/L this is a level of the free functor).
struct FormalSum {
    SigPtr sig;
    std::map<IrrKey, long long> terms;

    void addmul(const IrrKey& k, long long c);
    bool operator==(const FormalSum& o) const { return terms == o.terms; }
};

FormalSum to_sum(const BispanClass& c);
FormalSum sum_add(const FormalSum& a, const FormalSum& b);
FormalSum sum_scale(const FormalSum& a, long long c);

/// A concrete representative with element-level legs.
struct ConcreteBispan {
    SigPtr sig;
    Action A, B;
    std::vector<int> p, q, r; // A->rX points, A->B points, B->rY points
};

void validate(const ConcreteBispan& b);

/// Deterministic canonical form. Idempotent; constant on isomorphism classes.
BispanClass canonicalize(const ConcreteBispan& b);

/// Canonical key from orbit data (middle subgroup, base image in Y, fiber pairs).
IrrKey canon_key(const Signature& sig, const Subgroup& K, int y,
                 const std::vector<std::pair<Subgroup, int>>& pairs);

ConcreteBispan from_key(const SigPtr& sig, const IrrKey& k);
ConcreteBispan from_class(const BispanClass& c);
BispanClass class_of_key(const SigPtr& sig, const IrrKey& k);

int irr_degree(const IrrKey& k); // degree of A -> B

// ---- semiring structure on bispan(X, Y) ----

BispanClass zero_class(const SigPtr& sig); // [X <- 0 -> 0 -> Y]
BispanClass one_class(const SigPtr& sig);  // [X <- 0 -> Y -> Y]
BispanClass add(const BispanClass& a, const BispanClass& b);

/// Product memo; entries are keyed by the signature uid as well, so one
/// cache may be shared across levels and outlive any one signature.
using MulCache =
    std::map<std::tuple<unsigned long long, IrrKey, IrrKey>, std::vector<std::pair<IrrKey, long long>>>;

FormalSum mul_irr(const SigPtr& sig, const IrrKey& a, const IrrKey& b, MulCache* cache = nullptr);
FormalSum mul(const BispanClass& a, const BispanClass& b, MulCache* cache = nullptr);
FormalSum mul(const FormalSum& a, const FormalSum& b, MulCache* cache = nullptr);

/// Composition of polynomials (g after f, middle object must match).
BispanClass compose(const BispanClass& g, const BispanClass& f, size_t cap = 2000000);

// ---- distinguished morphisms ----

BispanClass r_of(const GMap& f); // restriction along f: Y -> X in bispan
BispanClass n_of(const GMap& f); // norm along f:        X -> Y
BispanClass t_of(const GMap& f); // transfer along f:    X -> Y
BispanClass c_of(const Subgroup& h, int g); // conjugation class G/H -> G/gHg^-1
BispanClass identity_class(const GSet& x);

} // namespace tamb

#endif
