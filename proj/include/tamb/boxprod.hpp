#ifndef TAMB_BOXPROD_HPP
#define TAMB_BOXPROD_HPP

#include "tamb/mackey.hpp"

namespace tamb {

/// Ring product on a Green MackeyData level (bilinear extension of the
/// stored table). Throws NotGreen without ring data.
IVec green_mul(const MackeyData& m, int levelidx, const IVec& a, const IVec& b);

/// Box product of finitely presented Mackey functors:
///   M(G/L) = (bigoplus_{H <= L} S_H^L) / F,  S_H^L = tensor of factor levels at H,
/// with F generated by the Frobenius and Weyl relations. Summand bookkeeping
/// is kept so elements can be addressed as formal Tr_H^L(x_1 (x) ... (x) x_N).
struct BoxProduct {
    MackeyData data;
    std::vector<MackeyData> factors;

    struct LevelInfo {
        std::vector<int> summands;             // subgroup indices H <= L, ascending
        std::vector<int> offset;               // generator offset per summand
        std::vector<std::vector<int>> strides; // per summand, per factor
        int ngens = 0;
        int pos_of(int subidx) const;
    };
    std::vector<LevelInfo> info; // per subgroup index L

    /// coordinate index of the pure tensor with factor generator indices `gi`
    /// inside summand H of level L
    int gen_of(int levelidx, int subidx, const std::vector<int>& gi) const;
};

BoxProduct box(const GroupPtr& g, std::vector<MackeyData> factors);

/// The universal pairing into the S_L^L summand.
IVec dress_pair(const BoxProduct& b, int levelidx, const std::vector<IVec>& elements);

/// Differential test of A[X (+) Y] against box(A[X], A[Y]) through degree
/// max_n: builds the comparison morphism Phi (summand-wise transfers of
/// products of the canonical images) and verifies it is a well-defined
/// isomorphism on every degree stratum of every level inside L.
struct CompareFreeReport {
    bool pass = true;
    std::string detail; // first failure
    struct Stratum {
        int levelidx;
        int degree;
        int rank_free;   // side A
        int rank_box;    // box side stratum (after relations)
        bool iso;
    };
    std::vector<Stratum> strata;
    long long dress_checks = 0;
};
CompareFreeReport compare_free(const GroupPtr& g, const GSet& x, const GSet& y, const Subgroup& l,
                               int max_n, MulCache* cache = nullptr);

} // namespace tamb

#endif
