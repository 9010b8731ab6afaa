#pragma once

// One mutant of the healthcare fixtures per rule; each violates only that rule.

#include <string>
#include <vector>

#include "support.hpp"

namespace testing {

struct Mutant {
    std::string rule;
    std::string source;
};

inline std::vector<Mutant> rule_mutants() {
    const std::string rel = read_file(fixture_path("healthcare_relator.onto"));
    const std::string ev = read_file(fixture_path("healthcare_event.onto"));
    return {
        {"R1", rel + "subkind Clinic specializes Person, Organization\n"},
        {"R2", rel + "kind Surgeon specializes Person\n"},
        {"R3", rel + "subkind ChronicPatient specializes Patient\n"},
        {"R4", rel + "role Visitor specializes Person\n"},
        {"R5", replace_once(rel, "involvesProvider : Treatment [1..*] -- [1..*]", "involvesProvider : Treatment [1..*] -- [0..*]")},
        {"R6", rel + "material consults : Patient [0..*] -- [0..*] HealthcareProvider\n"},
        {"R7", replace_once(rel, "treatedBy : Patient [1..*] -- [1..*] HealthcareProvider",
                            "treatedBy : Patient [1..*] -- [1..*] Hospital") +
                   "kind Hospital\n"},
        {"R8", rel + "phase HealthyPerson specializes Person\n"},
        {"R9", replace_once(rel, "space Severity ordered 0..100", "space Severity nominal {mild, severe}")},
        {"R10", replace_once(ev, "participation participatesPatient : Treatment [1..*] -- [1..1] Patient",
                             "relator Record\nmediation recordsPatient : Record [1..*] -- [2..*] Patient")},
    };
}

} // namespace testing
