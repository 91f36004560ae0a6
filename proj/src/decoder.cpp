#include "tvqc/decoder.hpp"

#include <cstdlib>
#include <stdexcept>

#include "tvqc/errors.hpp"
#include "tvqc/matching.hpp"

namespace tvqc {

namespace {

const Site& check_site(const PlanarCode& code, DefectKind kind, int check) {
    const auto& sites = kind == DefectKind::XError ? code.z_check_sites() : code.x_check_sites();
    return sites.at(static_cast<std::size_t>(check));
}

void flip(const PlanarCode& code, DefectKind kind, int row, int col, PauliOperator& target) {
    const int q = code.qubit_at(row, col);
    if (q < 0) throw std::logic_error("correction path left the lattice");
    if (kind == DefectKind::XError) target.flip_x(static_cast<std::size_t>(q));
    else target.flip_z(static_cast<std::size_t>(q));
}

// Which boundary a check is matched to: true for top (X kind) / left (Z kind).
bool near_low_boundary(const PlanarCode& code, DefectKind kind, const Site& s) {
    const int coord = kind == DefectKind::XError ? s.row : s.col;
    return (coord + 1) <= (code.grid_size() - coord);
}

std::vector<int> defect_list(const std::vector<std::uint8_t>& bits) {
    std::vector<int> out;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i]) out.push_back(static_cast<int>(i));
    }
    return out;
}

} // namespace

int defect_distance(const PlanarCode& code, DefectKind kind, int check_a, int check_b) {
    const Site& a = check_site(code, kind, check_a);
    const Site& b = check_site(code, kind, check_b);
    return (std::abs(a.row - b.row) + std::abs(a.col - b.col)) / 2;
}

int boundary_distance(const PlanarCode& code, DefectKind kind, int check) {
    const Site& s = check_site(code, kind, check);
    const int coord = kind == DefectKind::XError ? s.row : s.col;
    return std::min(coord + 1, code.grid_size() - coord) / 2;
}

DefectMatching match_defects(const PlanarCode& code, DefectKind kind, std::span<const int> defects) {
    DefectMatching result;
    const int k = static_cast<int>(defects.size());
    if (k == 0) return result;

    // Nodes 0..k-1 are defects, k..2k-1 their private boundary nodes.
    std::vector<WeightedEdge> edges;
    edges.reserve(static_cast<std::size_t>(k * k + k));
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            edges.push_back({i, j, defect_distance(code, kind, defects[i], defects[j])});
        }
        edges.push_back({i, k + i, boundary_distance(code, kind, defects[i])});
    }
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) edges.push_back({k + i, k + j, 0});
    }
    const auto mate = min_weight_perfect_matching(2 * k, edges);
    for (int i = 0; i < k; ++i) {
        const int m = mate[static_cast<std::size_t>(i)];
        if (m >= k) {
            result.pairs.push_back({defects[i], DefectPair::kBoundary});
            result.weight += boundary_distance(code, kind, defects[i]);
        } else if (m > i) {
            result.pairs.push_back({defects[i], defects[m]});
            result.weight += defect_distance(code, kind, defects[i], defects[m]);
        }
    }
    return result;
}

void apply_path(const PlanarCode& code, DefectKind kind, int check_a, int check_b, PauliOperator& target) {
    const Site a = check_site(code, kind, check_a);
    if (check_b == DefectPair::kBoundary) {
        const bool low = near_low_boundary(code, kind, a);
        const int step = low ? -1 : 1;
        if (kind == DefectKind::XError) {
            for (int r = a.row + step; r >= 0 && r < code.grid_size(); r += 2 * step) flip(code, kind, r, a.col, target);
        } else {
            for (int c = a.col + step; c >= 0 && c < code.grid_size(); c += 2 * step) flip(code, kind, a.row, c, target);
        }
        return;
    }
    const Site b = check_site(code, kind, check_b);
    const int row_step = b.row > a.row ? 1 : -1;
    for (int r = a.row; r != b.row; r += 2 * row_step) flip(code, kind, r + row_step, a.col, target);
    const int col_step = b.col > a.col ? 1 : -1;
    for (int c = a.col; c != b.col; c += 2 * col_step) flip(code, kind, b.row, c + col_step, target);
}

DecodeResult mwpm_decode_detailed(const PlanarCode& code, const Syndrome& s) {
    if (s.x_defects.size() != code.z_check_sites().size() || s.z_defects.size() != code.x_check_sites().size()) {
        throw UsageError("syndrome does not match the code");
    }
    DecodeResult result;
    result.correction = PauliOperator(code.num_qubits());
    for (DefectKind kind : {DefectKind::XError, DefectKind::ZError}) {
        const auto defects = defect_list(kind == DefectKind::XError ? s.x_defects : s.z_defects);
        const auto matching = match_defects(code, kind, defects);
        for (const auto& pair : matching.pairs) apply_path(code, kind, pair.a, pair.b, result.correction);
        (kind == DefectKind::XError ? result.x_weight : result.z_weight) = matching.weight;
    }
    return result;
}

PauliOperator mwpm_decode(const PlanarCode& code, const Syndrome& s) { return mwpm_decode_detailed(code, s).correction; }

bool is_logical_failure(const PlanarCode& code, const PauliOperator& error, const PauliOperator& correction) {
    if (error.size() != code.num_qubits() || correction.size() != code.num_qubits()) {
        throw UsageError("error/correction size does not match the code");
    }
    const PauliOperator residual = error * correction;
    if (!syndrome(code, residual).is_trivial()) {
        throw std::logic_error("residual error has a nonzero syndrome; the correction is inconsistent");
    }
    return anticommutes(residual, code.logical_x()) || anticommutes(residual, code.logical_z());
}

} // namespace tvqc
