#pragma once

#include "afflab/connection.hpp"
#include "afflab/func_span.hpp"

#include <string>
#include <vector>

namespace afflab {

// The classification families. The extra entry N is the geodesically
// complete surface with G22^1 = x1 that completes M_5^1(0); it is not a
// constant-coefficient model and never comes out of classification.
enum class Family {
    M0_0, M1_0, M2_0, M3_0, M4_0, M5_0,
    M1_1, M2_1, M3_1, M4_1, M5_1,
    M1_2, M2_2, M3_2, M4_2,
    N,
};

struct CanonicalLabel {
    Family family = Family::M0_0;
    std::vector<Num> params;

    CanonicalLabel() = default;
    CanonicalLabel(Family f, std::vector<Num> p = {})
        : family(f), params(std::move(p)) {}
    std::string str() const;
};

// Ricci rank of the family (0, 1 or 2); N has Ricci dx2 x dx2, rank 1.
int family_rank(Family f);
int family_param_count(Family f);
std::string family_name(Family f);
Family parse_family(const std::string& name);

// True for the families that also admit a Type B realisation.
bool also_type_b(Family f);

// Throws ParamDomainError naming the violated constraint.
void validate_params(Family f, const std::vector<Num>& params);

// The constant-coefficient representative of the family; throws for N.
TypeAModel canonical_model(const CanonicalLabel& label);
// Same, but N yields its non-constant connection.
Connection canonical_connection(const CanonicalLabel& label);

// The solution space of the quasi-Einstein equation for the family, as the
// literal span of the catalogue.
FuncSpan q_catalogue(const CanonicalLabel& label);

// Canonical parameter representative within the linear-equivalence class:
// M_2^1 reports c1 >= -1/2, M_4^1 reports c in {0,1}, M_5^1 reports c >= 0,
// M_2^2 reports b2 >= 0, M_1^2 reports the lexicographically largest member
// of its six-element parameter orbit. Other families are already unique.
std::vector<Num> canonicalize_params(Family f, const std::vector<Num>& params);

}  // namespace afflab
