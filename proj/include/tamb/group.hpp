#ifndef TAMB_GROUP_HPP
#define TAMB_GROUP_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tamb/errors.hpp"

namespace tamb {

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

/// A subgroup, stored as its sorted element-index set. The sorted set is the
/// canonical key: two subgroups of the same group compare equal iff the sets do.
struct Subgroup {
    const FiniteGroup* g = nullptr;
    std::vector<int> elems; // sorted, contains 0 (identity)

    int order() const { return (int)elems.size(); }
    bool contains(int x) const;
    bool contains(const Subgroup& other) const; // other <= this
    bool operator==(const Subgroup& o) const { return elems == o.elems; }
    bool operator!=(const Subgroup& o) const { return elems != o.elems; }
    bool operator<(const Subgroup& o) const {
        if (elems.size() != o.elems.size()) return elems.size() < o.elems.size();
        return elems < o.elems;
    }
};

/// A finite group given by a multiplication table on indices 0..order-1.
/// Identity is index 0. Associativity, identity and inverses are verified
/// exhaustively at construction; the subgroup lattice is computed once.
class FiniteGroup {
  public:
    int order = 0;
    std::string name;

    int mul(int a, int b) const { return mul_[(size_t)a * order + b]; }
    int inv(int a) const { return inv_[a]; }
    int conj(int g, int h) const { return mul(mul(g, h), inv(g)); } // g h g^-1
    int pow(int a, int n) const;

    const std::vector<Subgroup>& subgroups() const { return subgroups_; }
    const Subgroup& trivial_subgroup() const { return subgroups_.front(); }
    const Subgroup& full_subgroup() const { return subgroups_.back(); }
    int subgroup_index(const Subgroup& h) const; // index into subgroups()

    friend GroupPtr build_group(std::vector<std::vector<int>> table, std::string name);

  private:
    std::vector<int> mul_;
    std::vector<int> inv_;
    std::vector<Subgroup> subgroups_; // all subgroups, sorted by (order, elems)
};

GroupPtr build_group(std::vector<std::vector<int>> table, std::string name);

/// Preset catalog: "C<n>", "C<m>xC<n>", "S3", "D8", "D2p<p>", "Q8",
/// "CpxCq<p>,<q>" (semidirect product with faithful action, p > q primes).
GroupPtr group_from_name(const std::string& spec);

// ---- subgroup machinery ----

Subgroup subgroup_from_elements(const FiniteGroup& g, std::vector<int> elems); // verifies closure
Subgroup subgroup_closure(const FiniteGroup& g, const std::vector<int>& gens);
Subgroup conjugate_subgroup(const Subgroup& h, int g);     // g H g^-1
Subgroup intersect(const Subgroup& a, const Subgroup& b);
bool is_normal(const Subgroup& h);                         // in the full group
Subgroup normalizer(const Subgroup& h);
std::vector<int> weyl_cosets(const Subgroup& h);           // coset reps of N(H)/H
std::vector<int> left_coset_reps(const Subgroup& h, const Subgroup& within); // minimal reps of within/h
std::vector<int> double_cosets(const Subgroup& h, const Subgroup& m, const Subgroup& within);

/// subgroups of `within`, as subgroups of the parent group
std::vector<Subgroup> subgroups_of(const Subgroup& within);
/// conjugacy classes of subgroups; representative = lexicographically minimal key
std::vector<Subgroup> subgroup_class_reps(const FiniteGroup& g);
Subgroup class_rep_of(const Subgroup& h); // minimal key among conjugates (under full group)

/// The bijection {y_x * x} -> H\L/M for a chain H <= K <= L, M <= L,
/// where x runs over K\L/M and y_x over H\K/(xMx^-1 cap K).
struct CosetFactorization {
    std::vector<std::pair<int, int>> pairs; // (x, y_x)
    std::vector<int> images;                // representative of H (y_x x) M in H\L/M
    std::vector<int> hlm;                   // double cosets H\L/M
    bool bijective = false;
};
CosetFactorization coset_factorization(const Subgroup& h, const Subgroup& k,
                                       const Subgroup& l, const Subgroup& m);

// ---- classification against the hypotheses used downstream ----

enum class GroupKind { dedekind, star, d8, other };

struct GroupClassification {
    GroupKind kind = GroupKind::other;
    std::string witness; // for kind=other, a subgroup violating the tested clauses
};

GroupClassification classify(const FiniteGroup& g);
const char* kind_name(GroupKind k);

/// A subgroup materialized as a group in its own right, with the index map
/// back into the parent.
struct SubgroupGroup {
    GroupPtr group;
    std::vector<int> embed;           // sub index -> parent element index
    std::map<int, int> from_parent;   // parent element -> sub index
};
SubgroupGroup as_group(const Subgroup& h);

} // namespace tamb

#endif
