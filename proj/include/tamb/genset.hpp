#ifndef TAMB_GENSET_HPP
#define TAMB_GENSET_HPP

#include <memory>
#include <set>

#include "tamb/boxprod.hpp"
#include "tamb/level.hpp"

namespace tamb {

/// Combinatorial expansion of a product of two irreducible classes over the
/// terminal level (G/G), derived from the double-coset structure of the two
/// middles. Independent of the element-level bispan multiplication; the two
/// are cross-checked in the test suite.
FormalSum expand_product_pt(const LevelCtx& ctx, const IrrKey& a, const IrrKey& b);

// ---- certificates ----

struct Expr {
    enum Kind { Leaf, Add, Mul, Neg, Scale } kind = Leaf;
    IrrKey leaf;              // Leaf
    long long coef = 1;       // Scale
    std::vector<std::shared_ptr<const Expr>> kids;
};
using ExprPtr = std::shared_ptr<const Expr>;

ExprPtr expr_leaf(const IrrKey& k);
ExprPtr expr_mul(ExprPtr a, ExprPtr b);
ExprPtr expr_neg(ExprPtr a);
ExprPtr expr_scale(long long c, ExprPtr a);
ExprPtr expr_add(std::vector<ExprPtr> kids);
int expr_depth(const ExprPtr& e);

/// Oracle evaluation through bispan arithmetic (element-level products).
FormalSum eval_expr(const LevelCtx& ctx, const ExprPtr& e, MulCache* cache = nullptr);

struct RewriteCertificate {
    IrrKey target;
    ExprPtr expr;
    bool verified = false;
    int depth = 0;
};

struct GenSpec {
    IrrKey key;
    std::string provenance;
};

struct GeneratorSet {
    LevelCtxPtr ctx; // ambient (X = G/H, L = G)
    std::vector<GenSpec> gens;
    std::map<std::vector<int>, long long> stratum_threshold; // middle class rep -> N_K
    int escalation = 0; // thresholds have been doubled this many times
};

/// The per-ambient rewriting engine for the top level A[G/H](G/G).
class Rewriter {
  public:
    Rewriter(GroupPtr g, Subgroup h, long long budget = 2000000);
    ~Rewriter();

    const Subgroup& ambient() const;
    LevelCtxPtr top() const;
    GeneratorSet generator_set(); // enumerated, with provenance
    bool is_generator(const IrrKey& t);

    /// Rewrite one target; throws TruncationTooLarge/UsageError on bad input,
    /// returns an unverified certificate or nullopt when the budget is spent.
    std::optional<RewriteCertificate> rewrite(const IrrKey& target);

    long long steps_used() const;
    int escalations() const;
    void escalate(); // double every stratum threshold

    /// the stack of classes under reduction when the budget ran out
    const std::vector<IrrKey>& last_failure_trace() const;

  private:
    struct Impl;
    std::unique_ptr<Impl> impl;
};

struct CertifyReport {
    bool pass = false;
    int targets = 0;
    int certified = 0;
    int leaves = 0;
    int escalations = 0;
    long long steps = 0;
    int max_depth = 0;
    std::string detail;
    std::vector<RewriteCertificate> certificates;
    std::map<std::vector<int>, long long> thresholds; // middle class -> N_K
    std::vector<std::pair<std::string, CertifyReport>> parts; // for non-transitive X
};

/// Certify that every irreducible class of A[X](G/G) with numerical degree
/// <= max_n has a verified expression over the generator set. For
/// non-transitive X the orbits are certified separately and the box
/// coherence of the disjoint union is checked through compare_free.
CertifyReport certify_generation(const GroupPtr& g, const GSet& x, int max_n,
                                 long long budget = 2000000);

struct FindimLevelReport {
    Subgroup level;
    int module_generators = 0;
    int gen_degree_bound = 0;
    bool pass = false;
};
struct FindimReport {
    bool pass = true;
    std::vector<FindimLevelReport> levels;
};

/// For each L <= G, exhibit a finite module generating set for the degree
/// truncation of A[X](G/L) over the image of restriction from the top level,
/// and verify membership of the whole truncated basis.
FindimReport relative_findim_check(const GroupPtr& g, const GSet& x, int max_n);

struct NormCheckReport {
    bool pass = false;
    int h_side = 0;
    int g_side = 0;
    std::string narrative;
};

/// Census check of the free-functor norm identity: the degree truncation of
/// A[G x_H X](G/L) is matched basis-by-basis with bispans X -> Res_H(G/L)
/// over H through the induction functor.
NormCheckReport norm_free_check(const GroupPtr& g, const Subgroup& h, const SubgroupGroup& hg,
                                const GSet& x_h, const Subgroup& l, int max_n);

} // namespace tamb

#endif
