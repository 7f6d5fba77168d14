#include "probepack/probing.hpp"

#include <sstream>

#include "probepack/rng.hpp"

namespace probepack {

std::string to_string(ProbeAction a) {
    switch (a) {
        case ProbeAction::bend: return "bend";
        case ProbeAction::fold: return "fold";
        case ProbeAction::push: return "push";
    }
    return "?";
}

ProbeAction probe_action_for(Dimension d) {
    switch (d) {
        case Dimension::d1: return ProbeAction::bend;
        case Dimension::d2: return ProbeAction::fold;
        case Dimension::d3: return ProbeAction::push;
    }
    return ProbeAction::push;
}

bool property_dimension_compatible(Property p, Dimension d) {
    switch (p) {
        case Property::rigid:
        case Property::plastic:
            return true;
        case Property::bendable:
            return d == Dimension::d1;
        case Property::foldable:
            return d == Dimension::d2;
        case Property::compressible:
            return d == Dimension::d3;
    }
    return false;
}

std::vector<Property> properties_for_dimension(Dimension d) {
    std::vector<Property> out;
    for (Property p : all_properties()) {
        if (property_dimension_compatible(p, d)) out.push_back(p);
    }
    return out;
}

std::string to_string(DeformationState s) {
    return s == DeformationState::original ? "original" : "deformed";
}

ObservationTriple simulate_probe(Property truth, Dimension dimension, ProbeAction action) {
    if (probe_action_for(dimension) != action)
        throw ActionDimensionMismatch("cannot " + to_string(action) + " a " +
                                      to_string(dimension) + " object");
    if (!property_dimension_compatible(truth, dimension))
        throw ActionDimensionMismatch("a " + to_string(dimension) + " object cannot be " +
                                      to_string(truth));

    ObservationTriple obs;
    obs.before = DeformationState::original;
    switch (truth) {
        case Property::rigid:
            obs.during = DeformationState::original;
            obs.after = DeformationState::original;
            break;
        case Property::bendable:
        case Property::foldable:
        case Property::compressible:
            obs.during = DeformationState::deformed;
            obs.after = DeformationState::original;  // recovers once released
            break;
        case Property::plastic:
            obs.during = DeformationState::deformed;
            obs.after = DeformationState::deformed;  // deformation sticks
            break;
    }
    return obs;
}

Property classify_property(const ObservationTriple& obs, ProbeAction action) {
    if (obs.during == DeformationState::original) return Property::rigid;
    if (obs.after == DeformationState::original) {
        switch (action) {
            case ProbeAction::bend: return Property::bendable;
            case ProbeAction::fold: return Property::foldable;
            case ProbeAction::push: return Property::compressible;
        }
    }
    return Property::plastic;
}

ProbeOutcome probe_object(const ObjectRecord& object, Property truth, PropertyAdapter& adapter,
                          std::uint64_t seed) {
    ProbeOutcome out;
    out.name = object.name;
    out.action = probe_action_for(object.dimension);
    out.observation = simulate_probe(truth, object.dimension, out.action);
    out.inferred = adapter.classify(object, out.observation, out.action, seed);

    std::ostringstream line;
    line << object.name << ' ' << to_string(out.action) << ' ' << to_string(out.observation.before)
         << '/' << to_string(out.observation.during) << '/' << to_string(out.observation.after)
         << " -> " << to_string(out.inferred);
    out.log_line = line.str();
    return out;
}

std::string ProbeRunReport::log_text() const {
    std::string text;
    for (const auto& o : outcomes) text += o.log_line + "\n";
    return text;
}

ProbeRunReport probe_missing(std::vector<ObjectRecord>& objects,
                             const std::map<std::string, Property>& ground_truth,
                             KnowledgeBase& kb, PropertyAdapter& adapter, std::uint64_t seed) {
    ProbeRunReport report;
    for (auto& object : objects) {
        if (auto known = kb.lookup(object.name)) {
            object.property = *known;
            ++report.skipped_known;
            continue;
        }
        auto truth = ground_truth.find(object.name);
        if (truth == ground_truth.end())
            throw MissingProperty("no ground truth for " + object.name);

        auto outcome = probe_object(object, truth->second, adapter,
                                    derive_seed(seed, object.name));
        object.property = outcome.inferred;
        kb.insert(object.name, outcome.inferred);
        report.outcomes.push_back(std::move(outcome));
        ++report.probed_count;
    }
    return report;
}

}  // namespace probepack
