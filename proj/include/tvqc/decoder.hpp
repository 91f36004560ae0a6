#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tvqc/pauli.hpp"
#include "tvqc/planar_code.hpp"

namespace tvqc {

/// Which defect graph: X-error defects live on Z-type checks (rough
/// top/bottom boundaries), Z-error defects on X-type checks (left/right).
enum class DefectKind { XError, ZError };

/// One matched pair; `b == kBoundary` means `a` was matched to its nearest boundary.
struct DefectPair {
    static constexpr int kBoundary = -1;
    int a;
    int b;
    friend bool operator==(const DefectPair&, const DefectPair&) = default;
};

struct DefectMatching {
    std::vector<DefectPair> pairs;
    std::int64_t weight = 0;
};

/// Lattice path length between two checks of the same kind.
int defect_distance(const PlanarCode& code, DefectKind kind, int check_a, int check_b);
/// Path length from a check to its nearest boundary of the matching type.
int boundary_distance(const PlanarCode& code, DefectKind kind, int check);

/// Minimum-weight perfect matching of the given defects (check indices,
/// ascending). Each defect has a private boundary node; boundary nodes are
/// mutually connected with weight 0.
DefectMatching match_defects(const PlanarCode& code, DefectKind kind, std::span<const int> defects);

/// Flips the qubits on the canonical path (vertical leg, then horizontal)
/// between two checks, or from a check to its nearest boundary when
/// check_b == DefectPair::kBoundary.
void apply_path(const PlanarCode& code, DefectKind kind, int check_a, int check_b, PauliOperator& target);

struct DecodeResult {
    PauliOperator correction;
    std::int64_t x_weight = 0;
    std::int64_t z_weight = 0;
};

DecodeResult mwpm_decode_detailed(const PlanarCode& code, const Syndrome& s);
PauliOperator mwpm_decode(const PlanarCode& code, const Syndrome& s);

/// True iff error * correction acts as a nontrivial logical operator.
/// Throws std::logic_error when the residual has a nonzero syndrome.
bool is_logical_failure(const PlanarCode& code, const PauliOperator& error, const PauliOperator& correction);

} // namespace tvqc
