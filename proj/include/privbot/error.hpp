#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace privbot {

enum class Errc {
    // market data
    FileNotFound,
    EmptyFile,
    MalformedRow,
    DuplicateTimestamp,
    NonUniformSpacing,
    NotAMultiple,
    SeriesTooShort,
    EmptyList,
    // indicators
    UnknownTimestamp,
    InsufficientHistory,
    // training
    InvalidRange,
    WindowOutOfRange,
    WindowMismatch,
    TooFewSamples,
    ZeroVariance,
    EmptyTestSet,
    // proofs
    ConstraintUnsatisfied,
    InvalidWitness,
    // chain
    NoData,
    DuplicateUser,
    ZeroAmount,
    EmptyPool,
    UnknownPhase,
    VerifierAlreadyDeployed,
    VerifierNotDeployed,
    // dex
    InsufficientBalance,
    InsufficientLiquidity,
    UnknownAsset,
    // orchestration
    FeedExhausted,
    // generic
    InvalidArgument,
    BadConfig,
};

std::string_view errc_name(Errc code) noexcept;

/// Library-wide exception. `detail()` carries the offending line number or
/// timestamp when the error has one (MalformedRow, NonUniformSpacing, NoData).
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message, std::optional<std::int64_t> detail = std::nullopt);

    Errc code() const noexcept { return code_; }
    std::optional<std::int64_t> detail() const noexcept { return detail_; }

private:
    Errc code_;
    std::optional<std::int64_t> detail_;
};

} // namespace privbot
