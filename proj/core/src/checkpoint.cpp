#include <array>
#include <bit>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>

#include "rydarp/errors.hpp"
#include "rydarp/observables.hpp"

namespace rydarp {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
    std::array<char, 8> bytes{};
    for (std::size_t k = 0; k < 8; ++k) {
        bytes[k] = static_cast<char>((v >> (8 * k)) & 0xffu);
    }
    out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& in) {
    std::array<unsigned char, 8> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!in) {
        throw ValidationError("checkpoint truncated");
    }
    std::uint64_t v = 0;
    for (std::size_t k = 0; k < 8; ++k) {
        v |= static_cast<std::uint64_t>(bytes[k]) << (8 * k);
    }
    return v;
}

}  // namespace

void write_checkpoint(std::ostream& out, const Eigen::MatrixXcd& rho) {
    if (rho.rows() != rho.cols()) {
        throw ValidationError("checkpoint needs a square matrix");
    }
    put_u64(out, static_cast<std::uint64_t>(rho.rows()));
    for (Eigen::Index r = 0; r < rho.rows(); ++r) {
        for (Eigen::Index c = 0; c < rho.cols(); ++c) {
            put_u64(out, std::bit_cast<std::uint64_t>(rho(r, c).real()));
            put_u64(out, std::bit_cast<std::uint64_t>(rho(r, c).imag()));
        }
    }
}

void write_checkpoint(const std::filesystem::path& path, const Eigen::MatrixXcd& rho) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ValidationError("cannot open checkpoint for writing: " + path.string());
    }
    write_checkpoint(out, rho);
    if (!out) {
        throw ValidationError("failed writing checkpoint: " + path.string());
    }
}

Eigen::MatrixXcd read_checkpoint(std::istream& in) {
    const std::uint64_t dim = get_u64(in);
    if (dim == 0 || dim > 4096) {
        throw ValidationError("checkpoint dimension out of range");
    }
    const auto n = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd rho(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            const double re = std::bit_cast<double>(get_u64(in));
            const double im = std::bit_cast<double>(get_u64(in));
            rho(r, c) = {re, im};
        }
    }
    return rho;
}

Eigen::MatrixXcd read_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open checkpoint: " + path.string());
    }
    return read_checkpoint(in);
}

}  // namespace rydarp
