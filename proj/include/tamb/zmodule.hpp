#ifndef TAMB_ZMODULE_HPP
#define TAMB_ZMODULE_HPP

#include <gmpxx.h>

#include <optional>
#include <vector>

#include "tamb/errors.hpp"

namespace tamb {

using ZVec = std::vector<mpz_class>;
using ZMat = std::vector<ZVec>; // rows

ZMat zmat_identity(int n);
ZMat zmat_mul(const ZMat& a, const ZMat& b);
ZVec zmat_apply(const ZMat& a, const ZVec& v); // a * v (column convention)
mpz_class zmat_det(ZMat a);                    // fraction-free elimination

struct SmithResult {
    ZMat U, D, V; // U*A*V = D, U and V unimodular, diagonal divisibility chain
};

SmithResult smith_normal_form(const ZMat& a);

/// A finitely generated abelian group presented as Z^ngens / rowspan(relations).
class PresentedZModule {
  public:
    PresentedZModule() = default;
    PresentedZModule(int ngens, ZMat relations);

    int ngens() const { return ngens_; }
    const ZMat& relations() const { return rels_; }

    /// nontrivial invariant factors (each >= 2), in divisibility order
    const std::vector<mpz_class>& torsion() const;
    int free_rank() const;
    int min_generators() const;
    bool is_trivial() const { return min_generators() == 0; }

    bool contains(const ZVec& x) const;            // x in the relation lattice
    bool equal(const ZVec& a, const ZVec& b) const; // equality in the quotient

  private:
    void ensure_snf() const;
    int ngens_ = 0;
    ZMat rels_;
    mutable bool have_snf_ = false;
    mutable SmithResult snf_;
    mutable std::vector<mpz_class> diag_;    // nonzero diagonal of D
    mutable std::vector<mpz_class> torsion_;
    mutable int rank_ = 0;
};

struct TensorIndex {
    int left_gens = 0, right_gens = 0;
    int of(int i, int j) const { return i * right_gens + j; }
};

std::pair<PresentedZModule, TensorIndex> tensor(const PresentedZModule& m, const PresentedZModule& n);
PresentedZModule tensor_many(const std::vector<const PresentedZModule*>& ms,
                             std::vector<int>* strides = nullptr);
PresentedZModule quotient(const PresentedZModule& m, const ZMat& extra);
struct DirectSumIndex { std::vector<int> offset; };
std::pair<PresentedZModule, DirectSumIndex> direct_sum(const std::vector<const PresentedZModule*>& ms);
bool is_iso(const PresentedZModule& m, const PresentedZModule& n);

/// Does the matrix (tgt.ngens x src.ngens, column convention) define a
/// homomorphism src -> tgt, i.e. does it kill the relations of src?
bool well_defined_hom(const PresentedZModule& src, const PresentedZModule& tgt, const ZMat& f);

ZMat zmat_from_ll(const std::vector<std::vector<long long>>& a);

} // namespace tamb

#endif
