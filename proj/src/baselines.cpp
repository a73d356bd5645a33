#include "literal_forge/baselines.hpp"

namespace lforge {

Term transform_entity(const GroupInput& in, const Term& value) {
    return in.minter.entity(in.stem() + sanitize_value(value.value));
}

Term any_value_entity(const GroupInput& in) { return in.minter.entity(in.stem() + "AnyValue"); }

Augmentation exclude(const GroupInput& in) {
    Augmentation out;
    out.removed = in.size();
    return out;
}

Augmentation transform_literal2entity(const GroupInput& in) {
    Augmentation out;
    const Term predicate = in.predicate();
    for (std::size_t i = 0; i < in.size(); ++i)
        out.link({in.subject(i), predicate, transform_entity(in, in.value(i))});
    return out;
}

Augmentation one_entity(const GroupInput& in) {
    Augmentation out;
    const Term predicate = in.predicate();
    const Term target = any_value_entity(in);
    for (std::size_t i = 0; i < in.size(); ++i) out.link({in.subject(i), predicate, target});
    return out;
}

}  // namespace lforge
