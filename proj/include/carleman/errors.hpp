#pragma once

#include <stdexcept>
#include <string>

namespace carleman {

/// Error categories surfaced by the library; the CLI maps them to exit codes.
enum class errc {
    invalid_argument,
    incompatible_grids,
    index_out_of_range,
    non_finite_kernel,
    precondition_violation,
    no_convergence,
    not_normal,
    not_positive,
    sector_too_wide,
    sector_required,
    sector_mismatch,
    zero_operator,
    invalid_family,
    invalid_sequence,
    symbol_error,
    unknown_symbol,
    unknown_check,
    grid_too_coarse,
    io_error,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

} // namespace carleman
