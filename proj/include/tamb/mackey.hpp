#ifndef TAMB_MACKEY_HPP
#define TAMB_MACKEY_HPP

#include <map>
#include <optional>
#include <string>

#include "tamb/level.hpp"
#include "tamb/zmodule.hpp"

namespace tamb {

using IVec = std::vector<long long>;
using IMat = std::vector<IVec>; // column convention: rows = target gens

IMat imat_identity(int n);
IMat imat_zero(int rows, int cols);
IMat imat_mul(const IMat& a, const IMat& b);
IVec imat_apply(const IMat& a, const IVec& v);

/// Explicit Mackey (optionally Green, optionally partially Tambara) functor
/// data. Levels are kept for every subgroup; conjugation matrices tie the
/// conjugates together, which is what the Lewis-diagram JSON prints by
/// conjugacy class.
struct MackeyData {
    GroupPtr G;
    std::string name;
    std::vector<Subgroup> subs;          // = G->subgroups()
    std::vector<PresentedZModule> level; // per subgroup index

    std::map<std::pair<int, int>, IMat> res_; // (K,H), H <= K: M(K) -> M(H)
    std::map<std::pair<int, int>, IMat> tr_;  // (K,H), H <= K: M(H) -> M(K)
    std::vector<std::map<int, IMat>> conj_;   // [g][H]: M(H) -> M(gHg^-1)

    bool green = false;
    std::vector<IVec> unit;                         // per level, when green
    std::vector<std::vector<std::vector<IVec>>> mult; // per level: [i][j] -> coords

    // partial Tambara norms: (K,H) with H <= K, basis index -> image coords
    std::map<std::pair<int, int>, std::map<int, IVec>> norm_;

    // optional grading metadata (numerical degree per generator), used by the
    // box machinery to stratify levels
    std::vector<std::vector<int>> gen_degree;

    int sub_index(const Subgroup& h) const;
    const IMat& res(int k, int h) const;
    const IMat& tr(int k, int h) const;
    const IMat& cmat(int g, int h) const;
    int conj_target(int g, int h) const; // index of gHg^-1
};

struct AxiomReport {
    bool pass = true;
    std::string failure; // first failing axiom instance
    long long checks = 0;
};

/// Exhaustive verification of the Mackey axioms (and the Green conditions
/// when ring data is present); parallel over subgroup pairs.
AxiomReport check_axioms(const MackeyData& m);

MackeyData burnside(const GroupPtr& g);
MackeyData fixed_point_functor(const GroupPtr& g, const GSet& x); // functions on X, pointwise ring
MackeyData green_counterexample(const GroupPtr& cp, int p, int d);

/// Degree truncation of the free functor A[X]: free levels on the canonical
/// basis, structure maps from the bispan calculus, Green tables truncated at
/// maxdeg, norms supplied where the image stays inside the truncation.
struct FreeTruncation {
    MackeyData data;
    std::vector<std::vector<IrrKey>> basis; // per subgroup index
    std::vector<LevelCtxPtr> ctx;           // per subgroup index
    int maxdeg = 0;
    int basis_index(int levelidx, const IrrKey& k) const;
};
FreeTruncation free_truncation(const GroupPtr& g, const GSet& x, int maxdeg,
                               MulCache* cache = nullptr, bool with_norms = true);

/// Express a level element in truncated coordinates; throws if a term of
/// degree <= maxdeg is missing from the basis, drops terms above maxdeg.
IVec coords_of(const FreeTruncation& ft, int levelidx, const LevelElement& e);

} // namespace tamb

#endif
