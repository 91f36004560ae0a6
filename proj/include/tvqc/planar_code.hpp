#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "tvqc/pauli.hpp"

namespace tvqc {

/// Lattice site on the (2d-1) x (2d-1) planar grid.
struct Site {
    int row;
    int col;
    friend bool operator==(const Site&, const Site&) = default;
};

/// Distance-d planar code, [[d^2 + (d-1)^2, 1, d]].
///
/// Sites (r, c) with r + c even hold qubits. Plaquettes (r odd, c even)
/// are Z-type checks that flag X errors; their rough boundaries are the
/// top and bottom edges. Vertices (r even, c odd) are X-type checks that
/// flag Z errors, with left and right boundaries. Qubits and checks are
/// indexed in row-major order of their sites.
class PlanarCode {
public:
    /// Throws UsageError unless d is odd and 3 <= d <= 15.
    explicit PlanarCode(int d);

    int distance() const { return d_; }
    std::size_t num_qubits() const { return qubit_sites_.size(); }
    /// Rows/columns of the site grid (2d - 1).
    int grid_size() const { return 2 * d_ - 1; }

    const std::vector<Site>& qubit_sites() const { return qubit_sites_; }
    /// Qubit index at a site, or -1 when the site holds no qubit.
    int qubit_at(int row, int col) const;

    /// Z-type checks (plaquettes), detecting X errors.
    const std::vector<Site>& z_check_sites() const { return z_check_sites_; }
    /// X-type checks (vertices), detecting Z errors.
    const std::vector<Site>& x_check_sites() const { return x_check_sites_; }
    const std::vector<std::vector<int>>& z_check_support() const { return z_support_; }
    const std::vector<std::vector<int>>& x_check_support() const { return x_support_; }

    const std::vector<PauliOperator>& z_stabilizers() const { return z_stabilizers_; }
    const std::vector<PauliOperator>& x_stabilizers() const { return x_stabilizers_; }
    const PauliOperator& logical_x() const { return logical_x_; }
    const PauliOperator& logical_z() const { return logical_z_; }

    /// GF(2) rank of the full stabilizer generator matrix.
    std::size_t stabilizer_rank() const;

private:
    int d_;
    std::vector<Site> qubit_sites_;
    std::vector<int> qubit_index_;
    std::vector<Site> z_check_sites_;
    std::vector<Site> x_check_sites_;
    std::vector<std::vector<int>> z_support_;
    std::vector<std::vector<int>> x_support_;
    std::vector<PauliOperator> z_stabilizers_;
    std::vector<PauliOperator> x_stabilizers_;
    PauliOperator logical_x_;
    PauliOperator logical_z_;
};

/// Defect pattern. x_defects are flagged Z-type checks (caused by X
/// components of the error), z_defects are flagged X-type checks.
struct Syndrome {
    std::vector<std::uint8_t> x_defects;
    std::vector<std::uint8_t> z_defects;

    bool is_trivial() const;
    friend bool operator==(const Syndrome&, const Syndrome&) = default;
};

PlanarCode build_planar(int d);

/// Throws UsageError when error.size() != code.num_qubits().
Syndrome syndrome(const PlanarCode& code, const PauliOperator& error);
void syndrome(const PlanarCode& code, const PauliOperator& error, Syndrome& out);

} // namespace tvqc
