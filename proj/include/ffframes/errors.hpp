#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ff {

/// Error codes surfaced by the library. The CLI maps these onto exit codes.
enum class errc {
    not_prime,
    char_two_rejected,
    reducible_polynomial,
    involution_unavailable,
    field_too_large,
    denominator_vanishes,
    not_square_matrix,
    dimension_mismatch,
    shape_mismatch,
    not_hermitian,
    degenerate,
    index_out_of_range,
    not_equiangular,
    zero_tight,
    not_tight,
    complement_verification_failed,
    no_invertible_principal_block,
    inconsistent_rank,
    strategy_precondition_failed,
    beta_not_root,
    case_u,
    invalid_two_graph,
    complete_or_empty,
    hypothesis_violated,
    not_incoherent,
    not_maximal,
    not_independent,
    hypotheses_not_met,
    unequal_block_sizes,
    budget_exceeded,
    invalid_json,
};

inline std::string_view errc_name(errc c) {
    switch (c) {
        case errc::not_prime: return "NotPrime";
        case errc::char_two_rejected: return "CharTwoRejected";
        case errc::reducible_polynomial: return "ReduciblePolynomial";
        case errc::involution_unavailable: return "InvolutionUnavailable";
        case errc::field_too_large: return "FieldTooLarge";
        case errc::denominator_vanishes: return "DenominatorVanishes";
        case errc::not_square_matrix: return "NotSquare";
        case errc::dimension_mismatch: return "DimensionMismatch";
        case errc::shape_mismatch: return "ShapeMismatch";
        case errc::not_hermitian: return "NotHermitian";
        case errc::degenerate: return "Degenerate";
        case errc::index_out_of_range: return "IndexOutOfRange";
        case errc::not_equiangular: return "NotEquiangular";
        case errc::zero_tight: return "ZeroTight";
        case errc::not_tight: return "NotTight";
        case errc::complement_verification_failed: return "ComplementVerificationFailed";
        case errc::no_invertible_principal_block: return "NoInvertiblePrincipalBlock";
        case errc::inconsistent_rank: return "InconsistentRank";
        case errc::strategy_precondition_failed: return "StrategyPreconditionFailed";
        case errc::beta_not_root: return "BetaNotRoot";
        case errc::case_u: return "CaseU";
        case errc::invalid_two_graph: return "InvalidTwoGraph";
        case errc::complete_or_empty: return "CompleteOrEmpty";
        case errc::hypothesis_violated: return "HypothesisViolated";
        case errc::not_incoherent: return "NotIncoherent";
        case errc::not_maximal: return "NotMaximal";
        case errc::not_independent: return "NotIndependent";
        case errc::hypotheses_not_met: return "HypothesesNotMet";
        case errc::unequal_block_sizes: return "UnequalBlockSizes";
        case errc::budget_exceeded: return "BudgetExceeded";
        case errc::invalid_json: return "InvalidJson";
    }
    return "UnknownError";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& what) { throw error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) raise(code, what);
}

}  // namespace ff
