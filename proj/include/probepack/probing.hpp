#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "probepack/core.hpp"

namespace probepack {

enum class ProbeAction { bend, fold, push };

std::string to_string(ProbeAction a);

// Which probe a given object admits: 1D objects are bent, 2D folded, 3D pushed.
ProbeAction probe_action_for(Dimension d);

// rigid and plastic occur in any dimension; the three recoverable classes are
// tied to the dimension whose probe reveals them.
bool property_dimension_compatible(Property p, Dimension d);

// Set of labels a probe in dimension d can possibly output.
std::vector<Property> properties_for_dimension(Dimension d);

enum class DeformationState { original, deformed };

std::string to_string(DeformationState s);

struct ObservationTriple {
    DeformationState before = DeformationState::original;
    DeformationState during = DeformationState::original;
    DeformationState after = DeformationState::original;

    bool operator==(const ObservationTriple&) const = default;
};

// Physics stand-in: what the camera sees before / during / after the probe
// (the robot always attempts a recovery once the probe ends).
// Throws ActionDimensionMismatch when the action does not fit the dimension or
// the claimed property cannot exist at that dimension.
ObservationTriple simulate_probe(Property truth, Dimension dimension, ProbeAction action);

// Observation decision tree: unchanged during the probe means rigid; deformed
// during but recovered after means the action-specific recoverable class;
// deformed and stuck means plastic.
Property classify_property(const ObservationTriple& obs, ProbeAction action);

class PropertyAdapter {
public:
    virtual ~PropertyAdapter() = default;
    virtual Property classify(const ObjectRecord& object, const ObservationTriple& obs,
                              ProbeAction action, std::uint64_t seed) = 0;
};

struct ProbeOutcome {
    std::string name;
    ProbeAction action = ProbeAction::push;
    ObservationTriple observation;
    Property inferred = Property::rigid;
    std::string log_line;  // "<name> <action> <b>/<d>/<a> -> <property>"
};

// Probes a single object whose true behaviour is `truth` and asks the adapter
// to interpret the observations.
ProbeOutcome probe_object(const ObjectRecord& object, Property truth, PropertyAdapter& adapter,
                          std::uint64_t seed);

struct ProbeRunReport {
    std::vector<ProbeOutcome> outcomes;  // one per probed object
    int probed_count = 0;
    int skipped_known = 0;

    std::string log_text() const;
};

// Fills in missing property labels: objects already in the knowledge base are
// taken from it without touching the robot; unknown ones are probed, classified
// and recorded. Object records are updated in place.
ProbeRunReport probe_missing(std::vector<ObjectRecord>& objects,
                             const std::map<std::string, Property>& ground_truth,
                             KnowledgeBase& kb, PropertyAdapter& adapter, std::uint64_t seed);

}  // namespace probepack
