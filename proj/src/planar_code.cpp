#include "tvqc/planar_code.hpp"

#include <algorithm>
#include <string>

#include "tvqc/errors.hpp"

namespace tvqc {

PlanarCode::PlanarCode(int d) : d_(d) {
    if (d < 3 || d > 15 || d % 2 == 0) {
        throw UsageError("planar code distance must be odd and within [3, 15], got " + std::to_string(d));
    }
    const int size = grid_size();
    qubit_index_.assign(static_cast<std::size_t>(size * size), -1);
    for (int r = 0; r < size; ++r) {
        for (int c = 0; c < size; ++c) {
            if ((r + c) % 2 == 0) {
                qubit_index_[static_cast<std::size_t>(r * size + c)] = static_cast<int>(qubit_sites_.size());
                qubit_sites_.push_back({r, c});
            } else if (r % 2 == 1) {
                z_check_sites_.push_back({r, c});
            } else {
                x_check_sites_.push_back({r, c});
            }
        }
    }
    const std::size_t n = qubit_sites_.size();

    auto support_of = [&](Site s) {
        std::vector<int> support;
        for (auto [dr, dc] : {std::pair{-1, 0}, std::pair{0, -1}, std::pair{0, 1}, std::pair{1, 0}}) {
            const int q = qubit_at(s.row + dr, s.col + dc);
            if (q >= 0) support.push_back(q);
        }
        return support;
    };
    for (const Site& s : z_check_sites_) {
        z_support_.push_back(support_of(s));
        PauliOperator op(n);
        for (int q : z_support_.back()) op.set(static_cast<std::size_t>(q), PauliLetter::Z);
        z_stabilizers_.push_back(std::move(op));
    }
    for (const Site& s : x_check_sites_) {
        x_support_.push_back(support_of(s));
        PauliOperator op(n);
        for (int q : x_support_.back()) op.set(static_cast<std::size_t>(q), PauliLetter::X);
        x_stabilizers_.push_back(std::move(op));
    }

    // X string down the first column joins the two rough boundaries; Z
    // string along the first row joins the two smooth ones.
    logical_x_ = PauliOperator(n);
    logical_z_ = PauliOperator(n);
    for (int r = 0; r < size; r += 2) logical_x_.set(static_cast<std::size_t>(qubit_at(r, 0)), PauliLetter::X);
    for (int c = 0; c < size; c += 2) logical_z_.set(static_cast<std::size_t>(qubit_at(0, c)), PauliLetter::Z);
}

int PlanarCode::qubit_at(int row, int col) const {
    const int size = grid_size();
    if (row < 0 || col < 0 || row >= size || col >= size) return -1;
    return qubit_index_[static_cast<std::size_t>(row * size + col)];
}

std::size_t PlanarCode::stabilizer_rank() const {
    const std::size_t n = num_qubits();
    std::vector<std::vector<std::uint8_t>> rows;
    for (const auto* group : {&z_stabilizers_, &x_stabilizers_}) {
        for (const auto& op : *group) {
            std::vector<std::uint8_t> row(op.x_bits());
            row.insert(row.end(), op.z_bits().begin(), op.z_bits().end());
            rows.push_back(std::move(row));
        }
    }
    std::size_t rank = 0;
    for (std::size_t col = 0; col < 2 * n && rank < rows.size(); ++col) {
        auto pivot = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(rank), rows.end(),
                                  [col](const auto& row) { return row[col] != 0; });
        if (pivot == rows.end()) continue;
        std::iter_swap(rows.begin() + static_cast<std::ptrdiff_t>(rank), pivot);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i != rank && rows[i][col]) {
                for (std::size_t k = 0; k < 2 * n; ++k) rows[i][k] ^= rows[rank][k];
            }
        }
        ++rank;
    }
    return rank;
}

bool Syndrome::is_trivial() const {
    return std::none_of(x_defects.begin(), x_defects.end(), [](auto b) { return b != 0; }) &&
           std::none_of(z_defects.begin(), z_defects.end(), [](auto b) { return b != 0; });
}

PlanarCode build_planar(int d) { return PlanarCode(d); }

Syndrome syndrome(const PlanarCode& code, const PauliOperator& error) {
    Syndrome s;
    syndrome(code, error, s);
    return s;
}

void syndrome(const PlanarCode& code, const PauliOperator& error, Syndrome& out) {
    if (error.size() != code.num_qubits()) {
        throw UsageError("error acts on " + std::to_string(error.size()) + " qubits, code has " +
                         std::to_string(code.num_qubits()));
    }
    const auto& zs = code.z_check_support();
    const auto& xs = code.x_check_support();
    out.x_defects.resize(zs.size());
    out.z_defects.resize(xs.size());
    for (std::size_t i = 0; i < zs.size(); ++i) {
        std::uint8_t parity = 0;
        for (int q : zs[i]) parity ^= error.x_bits()[static_cast<std::size_t>(q)];
        out.x_defects[i] = parity;
    }
    for (std::size_t i = 0; i < xs.size(); ++i) {
        std::uint8_t parity = 0;
        for (int q : xs[i]) parity ^= error.z_bits()[static_cast<std::size_t>(q)];
        out.z_defects[i] = parity;
    }
}

} // namespace tvqc
