#ifndef TAMB_LEVEL_HPP
#define TAMB_LEVEL_HPP

#include <optional>

#include "tamb/bispan.hpp"

namespace tamb {

/// Degree in the weighted monoid: numerical part always, subgroup part only
/// over Dedekind groups (dropped otherwise).
struct WeightedDegree {
    int n = 0;
    std::optional<Subgroup> K;

    bool operator==(const WeightedDegree& o) const { return n == o.n && K == o.K; }
};
WeightedDegree deg_add(const WeightedDegree& a, const WeightedDegree& b);

/// The level context: an element of A[X](G/L) is a FormalSum over the
/// signature (X, G/L).
struct LevelCtx {
    GroupPtr G;
    GSet X;
    Subgroup L;
    SigPtr sig; // (X, G/L)
    bool dedekind = false;
};
using LevelCtxPtr = std::shared_ptr<const LevelCtx>;
LevelCtxPtr make_level(const GroupPtr& g, const GSet& x, const Subgroup& l);
/// hom-set context with an arbitrary (possibly non-transitive) target;
/// L is set to the full subgroup and only the signature is meaningful
LevelCtxPtr make_hom_ctx(const GroupPtr& g, const GSet& x, const GSet& y);

using LevelElement = FormalSum;

WeightedDegree degree_of(const LevelCtx& ctx, const IrrKey& k);

/// All irreducible classes of A[X](G/L) with numerical degree <= max_n.
/// Complete and duplicate-free for the truncation.
std::vector<IrrKey> level_basis(const LevelCtx& ctx, int max_n, size_t cap = 500000);

// structure maps between levels (values land in the indicated context)
LevelElement tr(const LevelCtx& from, const LevelCtx& to, const LevelElement& e);   // L <= L'
LevelElement res(const LevelCtx& from, const LevelCtx& to, const LevelElement& e);  // L >= L'
/// Norm along L <= L'. Defined for effective elements (all coefficients >= 0).
LevelElement nm(const LevelCtx& from, const LevelCtx& to, const LevelElement& e);
LevelElement cg(const LevelCtx& from, const LevelCtx& to, const LevelElement& e, int g);

// ---- the Dedekind tuple calculus ----

/// ((H_1,f_1),...,(H_n,f_n))_K with labels reduced into G/(K H); canonical
/// under simultaneous translation by L/K and pair reordering.
struct DedekindTuple {
    Subgroup K;     // middle, K <= L
    Subgroup L;     // level
    Subgroup H;     // ambient orbit: X = G/H
    std::vector<std::pair<Subgroup, int>> pairs; // (H_i, label: minimal coset element of KH-coset)

    bool operator==(const DedekindTuple& o) const {
        return K == o.K && L == o.L && H == o.H && pairs == o.pairs;
    }
    bool operator<(const DedekindTuple& o) const {
        if (!(K == o.K)) return K < o.K;
        return pairs < o.pairs;
    }
};

DedekindTuple canonical_tuple(DedekindTuple t);
DedekindTuple tuple_form(const LevelCtx& ctx, const IrrKey& k);  // requires Dedekind
IrrKey from_tuple(const LevelCtx& ctx, const DedekindTuple& t);

/// The chain-case product ((H_i,f_i))_K * ((H'_j,g_j))_{K'} for H <= K <= K' <= L,
/// expanded as a sum over L/K' without touching the bispan machinery.
std::map<DedekindTuple, long long> multiply_tuples(const LevelCtx& ctx, const DedekindTuple& a,
                                                   const DedekindTuple& b);

} // namespace tamb

#endif
