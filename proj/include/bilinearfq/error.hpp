#ifndef BILINEARFQ_ERROR_HPP
#define BILINEARFQ_ERROR_HPP

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bfq {

enum class ErrorCode {
    NonPrime,
    DivisionByZero,
    Degenerate,
    DimensionMismatch,
    ZeroLambda,
    TooLarge,
    ArityMismatch,
    NotInHyperplane,
    ZeroVector,
    OriginInF,
    NotGenerating,
    InvalidArgument,
    OracleMismatch,
};

inline std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPrime: return "NonPrime";
        case ErrorCode::DivisionByZero: return "DivisionByZero";
        case ErrorCode::Degenerate: return "Degenerate";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::ZeroLambda: return "ZeroLambda";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::NotInHyperplane: return "NotInHyperplane";
        case ErrorCode::ZeroVector: return "ZeroVector";
        case ErrorCode::OriginInF: return "OriginInF";
        case ErrorCode::NotGenerating: return "NotGenerating";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::OracleMismatch: return "OracleMismatch";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Loop-count cap shared by every enumeration. BILINEARFQ_GUARDRAIL overrides
/// the default of 10^9 iterations.
inline std::uint64_t guardrail() {
    constexpr std::uint64_t kDefault = 1'000'000'000ULL;
    if (const char* env = std::getenv("BILINEARFQ_GUARDRAIL")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return kDefault;
}

inline void require_within_guardrail(long double loops, std::string_view what) {
    if (loops > static_cast<long double>(guardrail()))
        throw Error(ErrorCode::TooLarge, std::string(what) + " needs ~" +
                                             std::to_string(static_cast<unsigned long long>(loops)) +
                                             " iterations, above the guardrail");
}

}  // namespace bfq

#endif  // BILINEARFQ_ERROR_HPP
