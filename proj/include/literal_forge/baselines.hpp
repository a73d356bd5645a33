#pragma once
// EXCLUDE, TRANSFORM (literal to entity) and ONEENTITY.

#include "literal_forge/mint.hpp"

namespace lforge {

/// Drops every statement of the group.
Augmentation exclude(const GroupInput& in);

/// One minted entity per distinct lexical value: new:<stem><value>.
Augmentation transform_literal2entity(const GroupInput& in);

/// One minted entity per predicate: new:<stem>AnyValue.
Augmentation one_entity(const GroupInput& in);

/// Entity names used by the baselines, shared with per-statement fallbacks.
Term transform_entity(const GroupInput& in, const Term& value);
Term any_value_entity(const GroupInput& in);

}  // namespace lforge
