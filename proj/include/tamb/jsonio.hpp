#ifndef TAMB_JSONIO_HPP
#define TAMB_JSONIO_HPP

#include "json.hpp"
#include "tamb/bispan.hpp"
#include "tamb/level.hpp"
#include "tamb/genset.hpp"
#include "tamb/mackey.hpp"

namespace tamb {

using json = nlohmann::ordered_json;

json group_to_json(const FiniteGroup& g);
GroupPtr group_from_json(const json& j);

/// {"group": name, "orbits": [[subgroup elements], ...]}
json gset_to_json(const GSet& x);
GSet gset_from_json(const json& j, const GroupPtr& g);

json key_to_json(const IrrKey& k);
IrrKey key_from_json(const json& j);

/// Concrete representative as JSON of the three legs; "key" carries the
/// canonical form, whose serialization is the bit-exact class identifier.
json bispan_to_json(const ConcreteBispan& b);
ConcreteBispan bispan_from_json(const json& j, const SigPtr& sig);

json sum_to_json(const FormalSum& s);

json expr_to_json(const ExprPtr& e);
json certificate_to_json(const RewriteCertificate& c);

/// Lewis-diagram JSON: levels (grouped by subgroup conjugacy class) with
/// presentations, Res/Tr/c_g matrices, ring tables and norms when present.
/// Round-trips bit-exactly.
json mackey_to_json(const MackeyData& m);
MackeyData mackey_from_json(const json& j, const GroupPtr& g);

/// Group spec: a preset name, or "@file.json" holding {"order": n, "mul": [[..]]}.
GroupPtr group_from_spec(const std::string& spec);

/// Orbit/set spec relative to a group: "empty", or comma-separated orbit
/// selectors "G/<sub>" (or bare "<sub>") with <sub> one of "e", "G", "s<i>"
/// (subgroup index as printed by the group command), or "[a,b,...]" (generated
/// subgroup).
Subgroup subgroup_from_spec(const GroupPtr& g, const std::string& spec);
GSet gset_from_spec(const GroupPtr& g, const std::string& spec);

} // namespace tamb

#endif
