#pragma once

#include <stdexcept>
#include <string>

namespace dimforge {

// Machine-readable failure codes carried by every domain error. The CLI maps
// these to structured JSON payloads and exit code 1; usage problems are a
// separate category (exit code 2).
enum class errc {
    not_square,
    dimension_mismatch,
    not_monic,
    invalid_modulus,
    negative_entries,
    dependent_columns,
    not_pure,
    not_invariant,
    not_primitive,
    not_irreducible,
    no_integer_solution,
    spec_invalid,
    cyclic_group,
    interior_empty,
    no_separating_row,
    check_failed,
    defect,
    budget_exceeded,
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::not_square: return "NotSquare";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::not_monic: return "NotMonic";
    case errc::invalid_modulus: return "InvalidModulus";
    case errc::negative_entries: return "NegativeEntries";
    case errc::dependent_columns: return "DependentColumns";
    case errc::not_pure: return "NotPure";
    case errc::not_invariant: return "NotInvariant";
    case errc::not_primitive: return "NotPrimitive";
    case errc::not_irreducible: return "NotIrreducible";
    case errc::no_integer_solution: return "NoIntegerSolution";
    case errc::spec_invalid: return "SpecInvalid";
    case errc::cyclic_group: return "CyclicGroup";
    case errc::interior_empty: return "InteriorEmpty";
    case errc::no_separating_row: return "NoSeparatingRow";
    case errc::check_failed: return "CheckFailed";
    case errc::defect: return "Defect";
    case errc::budget_exceeded: return "BudgetExceeded";
    }
    return "Unknown";
}

class domain_error : public std::runtime_error {
public:
    domain_error(errc code, std::string detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + detail),
          code_(code), detail_(std::move(detail)) {}

    errc code() const noexcept { return code_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    errc code_;
    std::string detail_;
};

class usage_error : public std::runtime_error {
public:
    explicit usage_error(std::string what) : std::runtime_error(std::move(what)) {}
};

[[noreturn]] inline void fail(errc code, const std::string& detail) {
    throw domain_error(code, detail);
}

inline void require(bool ok, errc code, const std::string& detail) {
    if (!ok) fail(code, detail);
}

} // namespace dimforge
