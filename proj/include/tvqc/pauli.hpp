#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tvqc {

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// n-qubit Pauli operator (phase dropped) in symplectic form.
/// Qubit j is I/X/Z/Y for (x, z) = (0,0)/(1,0)/(0,1)/(1,1).
class PauliOperator {
public:
    PauliOperator() = default;
    explicit PauliOperator(std::size_t n) : x_(n, 0), z_(n, 0) {}
    /// Parses a string over {I, X, Y, Z, _}.
    static PauliOperator from_string(const std::string& letters);

    std::size_t size() const { return x_.size(); }

    bool x(std::size_t q) const { return x_[q] != 0; }
    bool z(std::size_t q) const { return z_[q] != 0; }
    const std::vector<std::uint8_t>& x_bits() const { return x_; }
    const std::vector<std::uint8_t>& z_bits() const { return z_; }

    PauliLetter letter(std::size_t q) const;
    void set(std::size_t q, PauliLetter p);
    void flip_x(std::size_t q) { x_[q] ^= 1; }
    void flip_z(std::size_t q) { z_[q] ^= 1; }
    void clear();

    std::size_t weight() const;
    bool is_identity() const { return weight() == 0; }

    /// Multiplication up to phase (symplectic addition).
    PauliOperator& operator*=(const PauliOperator& other);
    friend PauliOperator operator*(PauliOperator a, const PauliOperator& b) { return a *= b; }
    friend bool operator==(const PauliOperator&, const PauliOperator&) = default;

    std::string to_string() const;

private:
    std::vector<std::uint8_t> x_;
    std::vector<std::uint8_t> z_;
};

/// True iff the two operators anticommute (symplectic product is 1).
bool anticommutes(const PauliOperator& a, const PauliOperator& b);

} // namespace tvqc
