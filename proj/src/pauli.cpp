#include "tvqc/pauli.hpp"

#include "tvqc/errors.hpp"

#include <algorithm>

namespace tvqc {

PauliOperator PauliOperator::from_string(const std::string& letters) {
    PauliOperator op(letters.size());
    for (std::size_t q = 0; q < letters.size(); ++q) {
        switch (letters[q]) {
        case 'I':
        case '_': break;
        case 'X': op.set(q, PauliLetter::X); break;
        case 'Y': op.set(q, PauliLetter::Y); break;
        case 'Z': op.set(q, PauliLetter::Z); break;
        default: throw UsageError(std::string("invalid Pauli letter '") + letters[q] + "'");
        }
    }
    return op;
}

PauliLetter PauliOperator::letter(std::size_t q) const {
    const int code = (x_[q] ? 1 : 0) | (z_[q] ? 2 : 0);
    switch (code) {
    case 1: return PauliLetter::X;
    case 2: return PauliLetter::Z;
    case 3: return PauliLetter::Y;
    default: return PauliLetter::I;
    }
}

void PauliOperator::set(std::size_t q, PauliLetter p) {
    x_[q] = (p == PauliLetter::X || p == PauliLetter::Y) ? 1 : 0;
    z_[q] = (p == PauliLetter::Z || p == PauliLetter::Y) ? 1 : 0;
}

void PauliOperator::clear() {
    std::fill(x_.begin(), x_.end(), 0);
    std::fill(z_.begin(), z_.end(), 0);
}

std::size_t PauliOperator::weight() const {
    std::size_t w = 0;
    for (std::size_t q = 0; q < x_.size(); ++q) {
        w += (x_[q] | z_[q]) ? 1 : 0;
    }
    return w;
}

PauliOperator& PauliOperator::operator*=(const PauliOperator& other) {
    if (other.size() != size()) {
        throw UsageError("Pauli operator size mismatch");
    }
    for (std::size_t q = 0; q < x_.size(); ++q) {
        x_[q] ^= other.x_[q];
        z_[q] ^= other.z_[q];
    }
    return *this;
}

std::string PauliOperator::to_string() const {
    static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
    std::string out(size(), 'I');
    for (std::size_t q = 0; q < size(); ++q) {
        out[q] = kLetters[static_cast<int>(letter(q))];
    }
    return out;
}

bool anticommutes(const PauliOperator& a, const PauliOperator& b) {
    if (a.size() != b.size()) {
        throw UsageError("Pauli operator size mismatch");
    }
    unsigned parity = 0;
    for (std::size_t q = 0; q < a.size(); ++q) {
        parity ^= (a.x_bits()[q] & b.z_bits()[q]) ^ (a.z_bits()[q] & b.x_bits()[q]);
    }
    return parity != 0;
}

} // namespace tvqc
