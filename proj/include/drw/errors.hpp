#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace drw {

enum class ErrorCode {
    InvalidConfig,
    NotConnected,
    UnknownNode,
    InvalidGraph,
    IsolatedInitiator,
    StepBudgetExceeded,
    Exhausted,
    TooManyInitiators,
    BuildFailed,
    EmptyOverlay,
    EmptySample,
    EmptyGroup,
    MalformedInput,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class NotConnectedError : public Error {
public:
    explicit NotConnectedError(std::size_t attempts);

    std::size_t attempts() const noexcept { return attempts_; }

private:
    std::size_t attempts_;
};

class BuildFailedError : public Error {
public:
    BuildFailedError(std::uint32_t walk, ErrorCode cause, const std::string& detail);

    std::uint32_t walk() const noexcept { return walk_; }
    ErrorCode cause() const noexcept { return cause_; }

private:
    std::uint32_t walk_;
    ErrorCode cause_;
};

}  // namespace drw
